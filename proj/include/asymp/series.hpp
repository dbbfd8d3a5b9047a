#ifndef ASYMP_SERIES_HPP
#define ASYMP_SERIES_HPP

// Exact Taylor-coefficient sources. SeriesProvider holds materialized
// coefficients (exact rationals or Reals) with an optional asymptotic tail
// descriptor; the helpers below build the coefficient streams used as ground
// truth everywhere: binomial series, singular-element series (1-z)^a L^k,
// and the dense formal-series operations (via TSeries) plus sqrt and
// Hadamard product.

#include "transfer.hpp"

#include <optional>

namespace asymp {

struct SeriesProvider {
    std::vector<Value> coeffs;  // indices 0..nmax
    std::optional<CoeffAsymptotics> tail;

    SeriesProvider() = default;
    explicit SeriesProvider(std::vector<Value> c) : coeffs(std::move(c)) {}

    std::size_t nmax() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    const Value& coeff(std::size_t n) const {
        if (n >= coeffs.size()) throw std::out_of_range("SeriesProvider: index beyond nmax");
        return coeffs[n];
    }

    // truncated-sum evaluator; usable while |t| is comfortably below 1
    Evaluator evaluator() const {
        auto c = coeffs;
        return Evaluator{[c](const Real& t, const Real&) {
            Real acc(0L);
            for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i].real();
            return acc;
        }};
    }
};

// coefficients of (1-z)^alpha: c_0 = 1, c_n = c_{n-1} (n-1-alpha)/n (exact)
inline SeriesProvider binomial_series(const Rat& alpha, std::size_t N) {
    std::vector<Value> c(N + 1);
    c[0] = Value(1L);
    Rat cur(1);
    for (std::size_t n = 1; n <= N; ++n) {
        cur *= (Rat(static_cast<long>(n) - 1) - alpha);
        cur /= static_cast<long>(n);
        c[n] = Value(cur);
    }
    return SeriesProvider(std::move(c));
}

// coefficients of (1-z)^alpha L(z)^k via the first-order recurrences
//   f_{n+1} = ((n - alpha) f_n + k h_n) / (n+1),   h = (1-z)^alpha L^{k-1}
inline SeriesProvider singular_element_series(const Rat& alpha, int k, std::size_t N) {
    if (k < 0) throw std::invalid_argument("singular_element_series: k >= 0 only");
    std::vector<Value> prev = binomial_series(alpha, N).coeffs;
    for (int level = 1; level <= k; ++level) {
        std::vector<Value> cur(N + 1, Value(0L));
        for (std::size_t n = 0; n < N; ++n) {
            Value t = (Value(Rat(static_cast<long>(n)) - alpha) * cur[n] +
                       Value(static_cast<long>(level)) * prev[n]) /
                      Value(Rat(static_cast<long>(n) + 1));
            cur[n + 1] = t;
        }
        prev = std::move(cur);
    }
    return SeriesProvider(std::move(prev));
}

// same streams in Real arithmetic at the active precision (fast at large N;
// relative error stays within a few N ulp)
inline SeriesProvider singular_element_series_float(const Rat& alpha, int k, std::size_t N) {
    if (k < 0) throw std::invalid_argument("singular_element_series_float: k >= 0 only");
    Real a(alpha);
    std::vector<Real> prev(N + 1);
    prev[0] = Real(1L);
    for (std::size_t n = 1; n <= N; ++n)
        prev[n] = prev[n - 1] * (Real(static_cast<long>(n) - 1) - a) / Real(static_cast<long>(n));
    for (int level = 1; level <= k; ++level) {
        std::vector<Real> cur(N + 1, Real(0L));
        for (std::size_t n = 0; n < N; ++n)
            cur[n + 1] = ((Real(static_cast<long>(n)) - a) * cur[n] +
                          Real(static_cast<long>(level)) * prev[n]) /
                         Real(static_cast<long>(n) + 1);
        prev = std::move(cur);
    }
    std::vector<Value> out;
    out.reserve(N + 1);
    for (auto& x : prev) out.emplace_back(std::move(x));
    return SeriesProvider(std::move(out));
}

// ------------------------------------------------------- dense series ops

// exact square root of a series with constant term 1
inline TSeries series_sqrt(const TSeries& f) {
    if (f.order() == 0 || !(f[0] == Value(1L)))
        throw std::domain_error("series_sqrt: needs constant term 1");
    TSeries u = f;
    u[0] = Value(0L);
    return u.pow1p(Value(Rat(1, 2)));
}

inline TSeries series_hadamard(const TSeries& a, const TSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    TSeries out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
    return out;
}

// logarithmic derivative f'/f
inline TSeries series_dlog(const TSeries& f) {
    return f.derivative() * f.truncated(f.order() > 0 ? f.order() - 1 : 0).inverse();
}

inline TSeries to_tseries(const SeriesProvider& p, std::size_t order) {
    TSeries s(order);
    for (std::size_t i = 0; i < order && i < p.coeffs.size(); ++i) s[i] = p.coeffs[i];
    return s;
}

inline SeriesProvider to_provider(const TSeries& s) {
    std::vector<Value> c(s.order());
    for (std::size_t i = 0; i < s.order(); ++i) c[i] = s[i];
    return SeriesProvider(std::move(c));
}

// provider for a singular element (1-z)^a L^k: float coefficient stream
// plus its transfer as the tail descriptor
inline SeriesProvider singular_provider(const Rat& alpha, int k, std::size_t N, int tail_depth,
                                        Precision prec) {
    SeriesProvider p = singular_element_series_float(alpha, k, N);
    p.tail = transfer(SingularExpansion::monomial(Value(1L), alpha, k), tail_depth, prec);
    return p;
}

// Catalan numbers, exact
inline const std::vector<Int>& catalan_numbers(std::size_t N) {
    static std::vector<Int> cache{Int(1)};
    static std::mutex mtx;
    std::lock_guard<std::mutex> lk(mtx);
    while (cache.size() <= N) {
        std::size_t n = cache.size();  // C_n = C_{n-1} * 2(2n-1)/(n+1)
        Int c = cache.back() * 2 * (2 * static_cast<long>(n) - 1);
        c /= (static_cast<long>(n) + 1);
        cache.push_back(c);
    }
    return cache;
}

// central binomial over 4^n: c_n = binom(2n,n)/4^n, exact rationals
inline SeriesProvider central_binomial_over4n(std::size_t N) {
    std::vector<Value> c(N + 1);
    Rat cur(1);
    c[0] = Value(1L);
    for (std::size_t n = 1; n <= N; ++n) {
        cur *= Rat(2 * static_cast<long>(n) - 1, 2 * static_cast<long>(n));
        c[n] = Value(cur);
    }
    return SeriesProvider(std::move(c));
}

}  // namespace asymp

#endif  // ASYMP_SERIES_HPP
