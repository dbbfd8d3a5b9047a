#ifndef ASYMP_TSERIES_HPP
#define ASYMP_TSERIES_HPP

// Dense truncated power series over Value coefficients. Small fixed-order
// formal expansions: the workhorse behind variable changes (w = -log z),
// Stirling-series manipulation and series reversion. Order is the number of
// retained coefficients (exponents 0 .. order-1).

#include "real.hpp"

#include <vector>

namespace asymp {

class TSeries {
  public:
    TSeries() = default;
    explicit TSeries(std::size_t order) : c_(order, Value(0L)) {}
    TSeries(std::vector<Value> c) : c_(std::move(c)) {}

    std::size_t order() const { return c_.size(); }
    const Value& operator[](std::size_t i) const { return c_[i]; }
    Value& operator[](std::size_t i) { return c_[i]; }

    static TSeries one(std::size_t order) {
        TSeries s(order);
        if (order > 0) s.c_[0] = Value(1L);
        return s;
    }

    TSeries truncated(std::size_t order) const {
        TSeries s(order);
        for (std::size_t i = 0; i < order && i < c_.size(); ++i) s.c_[i] = c_[i];
        return s;
    }

    friend TSeries operator+(const TSeries& a, const TSeries& b) {
        TSeries s(std::max(a.order(), b.order()));
        for (std::size_t i = 0; i < s.order(); ++i) {
            if (i < a.order()) s.c_[i] += a.c_[i];
            if (i < b.order()) s.c_[i] += b.c_[i];
        }
        return s;
    }
    friend TSeries operator-(const TSeries& a, const TSeries& b) {
        TSeries s(std::max(a.order(), b.order()));
        for (std::size_t i = 0; i < s.order(); ++i) {
            if (i < a.order()) s.c_[i] += a.c_[i];
            if (i < b.order()) s.c_[i] -= b.c_[i];
        }
        return s;
    }
    friend TSeries operator*(const TSeries& a, const TSeries& b) {
        std::size_t n = std::min(a.order(), b.order());
        if (a.order() == 0 || b.order() == 0) return TSeries(0);
        TSeries s(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; i + j < n && j < b.order(); ++j)
                s.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return s;
    }
    TSeries scaled(const Value& k) const {
        TSeries s = *this;
        for (auto& x : s.c_) x = x * k;
        return s;
    }

    // multiplicative inverse; requires nonzero constant term
    TSeries inverse() const {
        if (order() == 0 || c_[0].is_zero())
            throw std::domain_error("TSeries::inverse: zero constant term");
        TSeries r(order());
        r.c_[0] = Value(1L) / c_[0];
        for (std::size_t n = 1; n < order(); ++n) {
            Value acc(0L);
            for (std::size_t k = 1; k <= n; ++k) acc += c_[k] * r.c_[n - k];
            r.c_[n] = -acc / c_[0];
        }
        return r;
    }

    // log(1 + u) where u = *this with u[0] == 0
    TSeries log1p_of() const {
        check_no_constant("log1p_of");
        TSeries s(order());
        // d/dx log(1+u) = u'/(1+u)
        TSeries onepu = *this;
        if (order() > 0) onepu.c_[0] += Value(1L);
        TSeries du = derivative();
        TSeries q = du * onepu.inverse();
        return q.antiderivative(order());
    }

    // exp(u) with u[0] == 0
    TSeries exp_of() const {
        check_no_constant("exp_of");
        TSeries r(order());
        if (order() == 0) return r;
        r.c_[0] = Value(1L);
        // r' = u' r  =>  n r_n = sum_{k=1}^{n} k u_k r_{n-k}
        for (std::size_t n = 1; n < order(); ++n) {
            Value acc(0L);
            for (std::size_t k = 1; k <= n; ++k)
                acc += Value(Rat(static_cast<long>(k))) * c_[k] * r.c_[n - k];
            r.c_[n] = acc / Value(Rat(static_cast<long>(n)));
        }
        return r;
    }

    // (1 + u)^theta with u[0] == 0, arbitrary Value exponent
    TSeries pow1p(const Value& theta) const {
        check_no_constant("pow1p");
        return log1p_of().scaled(theta).exp_of();
    }

    TSeries derivative() const {
        if (order() <= 1) return TSeries(order() == 0 ? 0 : 1);
        TSeries s(order() - 1);
        for (std::size_t i = 1; i < order(); ++i)
            s.c_[i - 1] = c_[i] * Value(Rat(static_cast<long>(i)));
        return s;
    }

    TSeries antiderivative(std::size_t neworder) const {
        TSeries s(neworder);
        for (std::size_t i = 0; i + 1 < neworder && i < order(); ++i)
            s.c_[i + 1] = c_[i] / Value(Rat(static_cast<long>(i + 1)));
        return s;
    }

    // composition this(g(x)) with g[0] == 0 (Horner)
    TSeries compose(const TSeries& g) const {
        g.check_no_constant_static("compose");
        std::size_t n = std::min(order(), g.order());
        TSeries acc(n);
        for (std::size_t i = order(); i-- > 0;) {
            acc = acc * g.truncated(n);
            if (i < order()) acc.c_[0] += c_[i];
        }
        return acc;
    }

    // reversion: find g with this(g(x)) = x; requires c0 == 0, c1 != 0
    TSeries revert() const {
        check_no_constant("revert");
        if (order() < 2 || c_[1].is_zero())
            throw std::domain_error("TSeries::revert: needs nonzero linear term");
        std::size_t n = order();
        TSeries g(n);
        g.c_[1] = Value(1L) / c_[1];
        for (std::size_t m = 2; m < n; ++m) {
            TSeries comp = truncated(m + 1).compose(g.truncated(m + 1));
            // comp matches x through order m-1; kill coefficient at x^m
            g.c_[m] = -comp.c_[m] / c_[1];
        }
        return g;
    }

    Real eval_real(const Real& x) const {
        Real acc(0L);
        for (std::size_t i = order(); i-- > 0;) acc = acc * x + c_[i].real();
        return acc;
    }

  private:
    void check_no_constant(const char* who) const {
        if (order() > 0 && !c_[0].is_zero())
            throw std::domain_error(std::string("TSeries::") + who + ": nonzero constant term");
    }
    void check_no_constant_static(const char* who) const { check_no_constant(who); }

    std::vector<Value> c_;
};

}  // namespace asymp

#endif  // ASYMP_TSERIES_HPP
