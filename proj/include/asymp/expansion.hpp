#ifndef ASYMP_EXPANSION_HPP
#define ASYMP_EXPANSION_HPP

// Singular expansions at z = 1 as data, and the calculus on them:
// normalization, ring operations, reciprocals, singular differentiation and
// integration, and the w = -log z variable change.
//
// A term is c * (1-z)^alpha * L(z)^k with L(z) = log(1/(1-z)). Exponents are
// exact rationals; every operation propagates an explicit error budget
// O((1-z)^A L^B) or the distinguished EXACT budget. Negative log powers are
// admitted only at alpha = 0 (the descending 1/L scale).

#include "quadrature.hpp"
#include "specfun.hpp"
#include "real.hpp"
#include "tseries.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asymp {

struct ExpansionError : std::logic_error {
    explicit ExpansionError(const std::string& m) : std::logic_error(m) {}
};
struct MissingConstSourceError : std::logic_error {
    explicit MissingConstSourceError(const std::string& m) : std::logic_error(m) {}
};

// rational * e^k scale factor; carries singularity locations like 1/4 or 1/e
struct ScaleFactor {
    Rat r = Rat(1);
    int e_pow = 0;

    static ScaleFactor one() { return {}; }
    static ScaleFactor rational(const Rat& q) { return {q, 0}; }
    static ScaleFactor inv_e() { return {Rat(1), -1}; }

    ScaleFactor inverse() const {
        if (r == 0) throw ExpansionError("ScaleFactor: inverse of zero");
        return {Rat(1) / r, -e_pow};
    }
    ScaleFactor operator*(const ScaleFactor& o) const { return {r * o.r, e_pow + o.e_pow}; }
    bool operator==(const ScaleFactor& o) const { return r == o.r && e_pow == o.e_pow; }

    Real real() const {
        Real v(r);
        if (e_pow != 0) v *= pow(Real::euler_e(), static_cast<long>(e_pow));
        return v;
    }
    std::string to_string() const {
        if (e_pow == 0) return rat_to_string(r);
        std::string es = e_pow == 1 ? "e" : (e_pow == -1 ? "1/e" : "e^" + std::to_string(e_pow));
        if (r == 1) return es;
        return rat_to_string(r) + "*" + es;
    }
};

struct SingularTerm {
    Value coeff;
    Rat alpha;
    int logpow = 0;

    SingularTerm() = default;
    SingularTerm(Value c, Rat a, int k) : coeff(std::move(c)), alpha(std::move(a)), logpow(k) {}
};

struct ErrorBudget {
    bool is_exact = true;
    Rat aexp;
    int logpow = 0;

    static ErrorBudget exact() { return {}; }
    static ErrorBudget big_o(Rat a, int k = 0) { return {false, std::move(a), k}; }
};

// strict dominance as z -> 1: does (a1,k1) grow strictly faster than (a2,k2)?
inline bool scale_dominates(const Rat& a1, int k1, const Rat& a2, int k2) {
    if (a1 != a2) return a1 < a2;
    return k1 > k2;
}

// ordering for normalized term lists: dominant first
inline bool term_order(const SingularTerm& s, const SingularTerm& t) {
    return scale_dominates(s.alpha, s.logpow, t.alpha, t.logpow);
}

struct SingularExpansion {
    ScaleFactor rho;  // singularity of the un-rescaled function
    std::vector<SingularTerm> terms;
    ErrorBudget error;

    SingularExpansion() : rho(ScaleFactor::one()) {}

    bool is_zero() const { return terms.empty(); }

    static SingularExpansion zero(ErrorBudget e = ErrorBudget::exact()) {
        SingularExpansion s;
        s.error = e;
        return s;
    }
    // c * (1-z)^alpha * L^k, exact
    static SingularExpansion monomial(Value c, Rat alpha, int logpow = 0,
                                      ErrorBudget e = ErrorBudget::exact()) {
        SingularExpansion s;
        s.terms.emplace_back(std::move(c), std::move(alpha), logpow);
        s.error = e;
        return s;
    }
};

namespace detail {
inline void check_term_valid(const SingularTerm& t) {
    if (t.logpow < 0 && t.alpha != 0)
        throw ExpansionError("negative log power requires alpha = 0");
}
}  // namespace detail

// merge like terms, drop zeros and error-dominated terms, sort by dominance
inline SingularExpansion normalize(const SingularExpansion& e) {
    std::map<std::pair<Rat, int>, Value> acc;
    for (const auto& t : e.terms) {
        detail::check_term_valid(t);
        auto key = std::make_pair(t.alpha, -t.logpow);
        auto it = acc.find(key);
        if (it == acc.end()) acc.emplace(key, t.coeff);
        else it->second += t.coeff;
    }
    SingularExpansion out;
    out.rho = e.rho;
    out.error = e.error;
    for (auto& [key, c] : acc) {
        if (c.is_zero()) continue;
        const Rat& alpha = key.first;
        int logpow = -key.second;
        if (!e.error.is_exact &&
            !scale_dominates(alpha, logpow, e.error.aexp, e.error.logpow))
            continue;  // absorbed by the error budget
        out.terms.emplace_back(c, alpha, logpow);
    }
    // std::map with (alpha, -logpow) ascending is exactly dominance order
    return out;
}

inline SingularExpansion scale(const SingularExpansion& f, const Value& c) {
    SingularExpansion out = f;
    for (auto& t : out.terms) t.coeff = t.coeff * c;
    return normalize(out);
}

namespace detail {
// the asymptotically larger (coarser) of two budgets
inline ErrorBudget coarser(const ErrorBudget& a, const ErrorBudget& b) {
    if (a.is_exact) return b;
    if (b.is_exact) return a;
    if (scale_dominates(a.aexp, a.logpow, b.aexp, b.logpow)) return a;
    return b;
}
}  // namespace detail

inline SingularExpansion add(const SingularExpansion& f, const SingularExpansion& g) {
    if (!(f.rho == g.rho)) throw ExpansionError("add: mismatched singularity location");
    SingularExpansion out;
    out.rho = f.rho;
    out.terms = f.terms;
    out.terms.insert(out.terms.end(), g.terms.begin(), g.terms.end());
    out.error = detail::coarser(f.error, g.error);
    return normalize(out);
}

inline SingularExpansion sub(const SingularExpansion& f, const SingularExpansion& g) {
    return add(f, scale(g, Value(-1L)));
}

inline SingularExpansion multiply(const SingularExpansion& f, const SingularExpansion& g) {
    if (!(f.rho == g.rho)) throw ExpansionError("multiply: mismatched singularity location");
    SingularExpansion out;
    out.rho = f.rho;
    if (f.is_zero() && f.error.is_exact) return SingularExpansion::zero();
    if (g.is_zero() && g.error.is_exact) return SingularExpansion::zero();
    for (const auto& s : f.terms)
        for (const auto& t : g.terms) {
            int k = s.logpow + t.logpow;
            Rat a = s.alpha + t.alpha;
            if (k < 0 && a != 0)
                throw ExpansionError("multiply: product leaves the admissible log scale");
            out.terms.emplace_back(s.coeff * t.coeff, a, k);
        }
    // error: dominant among term x error cross products and error x error
    ErrorBudget err = ErrorBudget::exact();
    if (!g.error.is_exact)
        for (const auto& s : f.terms)
            err = detail::coarser(err, ErrorBudget::big_o(s.alpha + g.error.aexp,
                                                          s.logpow + g.error.logpow));
    if (!f.error.is_exact)
        for (const auto& t : g.terms)
            err = detail::coarser(err, ErrorBudget::big_o(t.alpha + f.error.aexp,
                                                          t.logpow + f.error.logpow));
    if (!f.error.is_exact && !g.error.is_exact)
        err = detail::coarser(err, ErrorBudget::big_o(f.error.aexp + g.error.aexp,
                                                      f.error.logpow + g.error.logpow));
    out.error = err;
    return normalize(out);
}

// f^m for small integer m >= 0
inline SingularExpansion power(const SingularExpansion& f, unsigned m) {
    SingularExpansion acc = SingularExpansion::monomial(Value(1L), Rat(0));
    acc.rho = f.rho;
    for (unsigned i = 0; i < m; ++i) acc = multiply(acc, f);
    return acc;
}

// 1/f truncated at `order` terms beyond the dominant one.
inline SingularExpansion reciprocal(const SingularExpansion& f_in, int order) {
    if (order < 1) throw ExpansionError("reciprocal: order must be >= 1");
    SingularExpansion f = normalize(f_in);
    if (f.is_zero()) throw ExpansionError("reciprocal: no dominant term (zero expansion)");
    const SingularTerm dom = f.terms.front();

    if (dom.alpha == 0 && dom.logpow > 0) {
        // descending 1/L scale: 1/f = (1/c) L^{-k0} / (1 + v), v built from the
        // other alpha = 0 terms; alpha > 0 terms and the budget are dominated
        // by every retained 1/L term.
        int k0 = dom.logpow;
        std::map<int, Value> poly;  // relative L powers, negative
        for (std::size_t i = 1; i < f.terms.size(); ++i) {
            const auto& t = f.terms[i];
            if (t.alpha != 0) continue;
            poly[t.logpow - k0] += t.coeff / dom.coeff;
        }
        // series expansion of 1/(1+v) in descending L powers
        std::map<int, Value> inv;  // relative powers of L
        inv[0] = Value(1L);
        int cutoff = -(order);  // keep relative powers > -order .. hmm keep `order` terms total
        // iteratively: inv = 1 - v*inv truncated
        for (int iter = 0; iter < order + 2; ++iter) {
            std::map<int, Value> next;
            next[0] = Value(1L);
            for (const auto& [pv, cv] : poly)
                for (const auto& [pi, ci] : inv) {
                    int p = pv + pi;
                    if (p <= cutoff) continue;
                    next[p] += -(cv * ci);
                }
            inv = std::move(next);
        }
        SingularExpansion out;
        out.rho = f.rho;
        for (const auto& [p, c] : inv) {
            if (c.is_zero()) continue;
            int lp = p - k0;
            if (lp <= -k0 - order) continue;
            out.terms.emplace_back(c / dom.coeff, Rat(0), lp);
        }
        out.error = ErrorBudget::big_o(Rat(0), -k0 - order);
        return normalize(out);
    }

    if (dom.logpow != 0)
        throw ExpansionError("reciprocal: dominant term with log factor is not invertible here");

    // geometric inversion around the dominant power term
    SingularExpansion u;  // (f - dom)/dom
    u.rho = f.rho;
    for (std::size_t i = 1; i < f.terms.size(); ++i) {
        const auto& t = f.terms[i];
        u.terms.emplace_back(t.coeff / dom.coeff, t.alpha - dom.alpha, t.logpow);
    }
    if (!f.error.is_exact)
        u.error = ErrorBudget::big_o(f.error.aexp - dom.alpha, f.error.logpow);
    u = normalize(u);

    // effective truncation: if u has a leading gap delta, keep `order` powers
    ErrorBudget budget = u.error;
    if (!u.is_zero()) {
        Rat delta = u.terms.front().alpha;
        int dlog = u.terms.front().logpow;
        ErrorBudget order_cut = ErrorBudget::big_o(delta * (order + 1), dlog * (order + 1));
        budget = detail::coarser(budget, order_cut);
        if (budget.is_exact) budget = order_cut;
    }

    SingularExpansion geom = SingularExpansion::monomial(Value(1L), Rat(0));
    geom.rho = f.rho;
    geom.error = budget;
    geom = normalize(geom);
    if (!u.is_zero()) {
        SingularExpansion upow = SingularExpansion::monomial(Value(1L), Rat(0));
        upow.rho = f.rho;
        for (int m = 1; m <= order + 1; ++m) {
            upow = multiply(upow, u);
            upow.error = detail::coarser(upow.error, budget);
            upow = normalize(upow);
            if (upow.is_zero()) break;
            geom = add(geom, scale(upow, Value(m % 2 == 1 ? -1L : 1L)));
        }
    }
    // divide by dominant monomial
    SingularExpansion out;
    out.rho = f.rho;
    for (const auto& t : geom.terms)
        out.terms.emplace_back(t.coeff / dom.coeff, t.alpha - dom.alpha, t.logpow);
    if (!geom.error.is_exact)
        out.error = ErrorBudget::big_o(geom.error.aexp - dom.alpha, geom.error.logpow);
    else
        out.error = ErrorBudget::exact();
    return normalize(out);
}

// d^r/dz^r with term-by-term rules; error (A,B) -> (A-r, B)
inline SingularExpansion differentiate(const SingularExpansion& f, unsigned r = 1) {
    SingularExpansion cur = f;
    for (unsigned step = 0; step < r; ++step) {
        SingularExpansion out;
        out.rho = cur.rho;
        for (const auto& t : cur.terms) {
            if (t.logpow < 0)
                throw ExpansionError("differentiate: 1/L scale not closed under d/dz");
            // d/dz [x^a L^k] = -a x^{a-1} L^k + k x^{a-1} L^{k-1},  x = 1-z
            if (t.alpha != 0)
                out.terms.emplace_back(t.coeff * Value(Rat(-t.alpha)), t.alpha - 1, t.logpow);
            if (t.logpow != 0)
                out.terms.emplace_back(t.coeff * Value(Rat(static_cast<long>(t.logpow))),
                                       t.alpha - 1, t.logpow - 1);
        }
        if (!cur.error.is_exact)
            out.error = ErrorBudget::big_o(cur.error.aexp - 1, cur.error.logpow);
        cur = normalize(out);
    }
    return cur;
}

// Point evaluation source for the case-(ii) integration constant.
struct Evaluator {
    // f(t) with both t and 1-t supplied accurately
    std::function<Real(const Real& t, const Real& one_minus_t)> eval;
};

// how integrate() obtains  R = int_0^1 [f(t) - sum of terms(t)] dt
struct ConstSource {
    enum class Kind { None, GivenRemainderIntegral, Evaluate } kind = Kind::None;
    Value given;       // for GivenRemainderIntegral
    Evaluator f_eval;  // for Evaluate
    int digits = 50;

    static ConstSource none() { return {}; }
    static ConstSource remainder_integral(Value v) {
        ConstSource c;
        c.kind = Kind::GivenRemainderIntegral;
        c.given = std::move(v);
        return c;
    }
    static ConstSource evaluator(Evaluator e, int digits) {
        ConstSource c;
        c.kind = Kind::Evaluate;
        c.f_eval = std::move(e);
        c.digits = digits;
        return c;
    }
};

// evaluate the term sum at z = t (x = 1-t); L = log(1/(1-t))
inline Real eval_terms(const std::vector<SingularTerm>& terms, const Real& t, const Real& omt) {
    Real L = -log(omt);
    (void)t;
    Real acc(0L);
    for (const auto& tm : terms) {
        Real v = tm.coeff.real();
        if (tm.alpha != 0) v *= pow(omt, Real(tm.alpha));
        if (tm.logpow != 0) v *= pow(L, static_cast<long>(tm.logpow));
        acc += v;
    }
    return acc;
}

// int_0^z f(t) dt, term-by-term exact antiderivatives.
//
// For alpha != -1:  int_0^z c x^a L^k dx  =
//   c k!/(a+1)^{k+1}  -  c x^{a+1} sum_{i<=k} (k!/i!) L^i / (a+1)^{k+1-i}
// For alpha == -1:   int_0^z c x^{-1} L^k dx = c L^{k+1}/(k+1)
//
// The remainder integral R = int_0^1 [f - terms] enters the constant term
// whenever the budget exponent A > -1 (it is otherwise dominated); R comes
// from const_source, or is 0 for EXACT budgets.
inline SingularExpansion integrate(const SingularExpansion& f,
                                   const ConstSource& const_source = ConstSource::none()) {
    SingularExpansion out;
    out.rho = f.rho;
    Value const_acc(0L);
    for (const auto& t : f.terms) {
        if (t.logpow < 0) throw ExpansionError("integrate: 1/L scale not supported");
        if (t.alpha == Rat(-1)) {
            out.terms.emplace_back(t.coeff / Value(Rat(t.logpow + 1)), Rat(0), t.logpow + 1);
            continue;
        }
        Rat ap1 = t.alpha + 1;
        // constant part
        Rat kfact(1);
        for (int i = 2; i <= t.logpow; ++i) kfact *= i;
        Value cpow = Value(kfact);
        for (int i = 0; i <= t.logpow; ++i) cpow = cpow / Value(ap1);
        const_acc += t.coeff * cpow;
        // singular parts
        Rat fct(1);  // k!/i! built downward: start i=k -> 1
        // compute k!/i! for i = k .. 0
        std::vector<Rat> kfac_over_ifac(static_cast<std::size_t>(t.logpow) + 1, Rat(1));
        for (int i = t.logpow - 1; i >= 0; --i)
            kfac_over_ifac[static_cast<std::size_t>(i)] =
                kfac_over_ifac[static_cast<std::size_t>(i) + 1] * (i + 1);
        for (int i = 0; i <= t.logpow; ++i) {
            Rat denom(1);
            for (int j = 0; j < t.logpow + 1 - i; ++j) denom *= ap1;
            Value coef = -(t.coeff * Value(kfac_over_ifac[static_cast<std::size_t>(i)] / denom));
            out.terms.emplace_back(coef, ap1, i);
        }
    }

    bool needs_R = false;
    if (f.error.is_exact) {
        out.error = ErrorBudget::exact();
    } else if (f.error.aexp < Rat(-1)) {
        out.error = ErrorBudget::big_o(f.error.aexp + 1, f.error.logpow);
    } else if (f.error.aexp == Rat(-1)) {
        out.error = ErrorBudget::big_o(Rat(0), f.error.logpow + 1);
    } else {
        out.error = ErrorBudget::big_o(f.error.aexp + 1, f.error.logpow);
        needs_R = true;
    }

    if (needs_R) {
        switch (const_source.kind) {
            case ConstSource::Kind::None:
                throw MissingConstSourceError(
                    "integrate: case (ii) constant requested but no source given");
            case ConstSource::Kind::GivenRemainderIntegral:
                const_acc += const_source.given;
                break;
            case ConstSource::Kind::Evaluate: {
                auto terms = f.terms;
                auto feval = const_source.f_eval;
                Real R = tanh_sinh_01(
                    [&](const Real& t, const Real& omt) {
                        return feval.eval(t, omt) - eval_terms(terms, t, omt);
                    },
                    const_source.digits);
                const_acc += Value(R);
                break;
            }
        }
    }
    if (!const_acc.is_zero()) out.terms.emplace_back(const_acc, Rat(0), 0);
    return normalize(out);
}

// retag the singularity location (the term data is already in the rescaled
// variable; bookkeeping only)
inline SingularExpansion rescale(const SingularExpansion& f, const ScaleFactor& new_rho) {
    SingularExpansion out = f;
    out.rho = new_rho;
    return out;
}

// ------------------------------------------------- w = -log z substitution

// One w-side element c * w^theta * (log w)^r expanded into (1-z) powers up to
// the budget exponent A: w = x (1 + x/2 + x^2/3 + ...), log w = -L + eta(x).
struct WTerm {
    Value coeff;
    Rat theta;
    int logw_pow = 0;
};

inline SingularExpansion w_to_oneminusz(const std::vector<WTerm>& wterms, const Rat& A,
                                        int error_logpow = 0) {
    // series length: enough x-powers to exhaust exponents below A
    Rat min_theta = A;
    for (const auto& t : wterms) min_theta = std::min(min_theta, t.theta);
    long depth = rat_is_int(A - min_theta) ? rat_to_long(A - min_theta)
                                           : static_cast<long>(Rat(A - min_theta).get_d()) + 1;
    if (depth < 1) depth = 1;
    std::size_t M = static_cast<std::size_t>(depth) + 2;

    // u = w/x - 1 = x/2 + x^2/3 + ...
    TSeries u(M);
    for (std::size_t i = 1; i < M; ++i) u[i] = Value(Rat(1, static_cast<long>(i) + 1));
    TSeries eta = u.log1p_of();  // log(w/x)

    SingularExpansion out;
    int maxlog = error_logpow;
    for (const auto& wt : wterms) {
        TSeries stheta = u.pow1p(Value(wt.theta));  // (w/x)^theta
        // (log w)^r = (-L + eta)^r = sum_i binom(r,i) (-L)^i eta^{r-i}
        maxlog = std::max(maxlog, wt.logw_pow);
        for (int i = 0; i <= wt.logw_pow; ++i) {
            Rat binom(binomial_int(static_cast<unsigned>(wt.logw_pow), static_cast<unsigned>(i)));
            if (i % 2 == 1) binom = -binom;
            TSeries etapow = TSeries::one(M);
            for (int j = 0; j < wt.logw_pow - i; ++j) etapow = etapow * eta;
            TSeries xser = stheta * etapow;
            for (std::size_t m = 0; m < M; ++m) {
                if (xser[m].is_zero()) continue;
                Rat expo = wt.theta + Rat(static_cast<long>(m));
                if (!scale_dominates(expo, i, A, error_logpow)) continue;
                out.terms.emplace_back(wt.coeff * Value(binom) * xser[m], expo, i);
            }
        }
    }
    out.error = ErrorBudget::big_o(A, error_logpow);
    return normalize(out);
}

}  // namespace asymp

#endif  // ASYMP_EXPANSION_HPP
