#ifndef ASYMP_SPECFUN_HPP
#define ASYMP_SPECFUN_HPP

// Special functions and constants at arbitrary precision: Gamma (Spouge),
// digamma (shift + asymptotic series), Riemann zeta (Euler-Maclaurin, with
// the functional equation for very negative arguments), zeta derivatives and
// Stieltjes constants (central differences at boosted precision), rising
// factorials, Bernoulli numbers, and Euler-Maclaurin tail sums for series
// acceleration.
//
// All functions are pure: results depend only on the arguments and the
// requested Precision.

#include "real.hpp"
#include "tseries.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace asymp {

struct PoleError : std::domain_error {
    explicit PoleError(const std::string& m) : std::domain_error(m) {}
};
struct UnsupportedError : std::invalid_argument {
    explicit UnsupportedError(const std::string& m) : std::invalid_argument(m) {}
};

// ---------------------------------------------------------------- Bernoulli

// Exact Bernoulli number B_n (B_1 = -1/2 convention).
inline const Rat& bernoulli(unsigned n) {
    static std::vector<Rat> cache{Rat(1)};
    static std::mutex mtx;
    std::lock_guard<std::mutex> lk(mtx);
    while (cache.size() <= n) {
        unsigned m = static_cast<unsigned>(cache.size());
        // sum_{j=0}^{m} binom(m+1, j) B_j = 0
        Rat acc(0);
        Int binom(1);  // binom(m+1, j), starts at j=0
        for (unsigned j = 0; j < m; ++j) {
            acc += Rat(binom) * cache[j];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        cache.push_back(-acc / Rat(binom));
    }
    return cache[n];
}

inline Int factorial_int(unsigned n) {
    Int r(1);
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Int binomial_int(unsigned n, unsigned k) {
    if (k > n) return Int(0);
    Int r(1);
    for (unsigned i = 0; i < k; ++i) { r *= (n - i); r /= (i + 1); }
    return r;
}

// ------------------------------------------------------------------- gamma

namespace detail {

// Spouge coefficients for a given parameter a, computed at the active
// precision; keyed by (a, bits).
inline const std::vector<Real>& spouge_coeffs(long a) {
    static std::map<std::pair<long, long>, std::vector<Real>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lk(mtx);
    auto key = std::make_pair(a, Real::active_bits());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<Real> c(static_cast<std::size_t>(a));
    c[0] = sqrt(Real::pi() * 2);
    Real fact(1L);
    for (long k = 1; k < a; ++k) {
        if (k > 1) fact *= Real(k - 1);
        Real ak = Real(a - k);
        Real t = pow(ak, Real(k) - Real(0.5)) * exp(ak) / fact;
        c[static_cast<std::size_t>(k)] = (k % 2 == 1) ? t : -t;
    }
    it = cache.emplace(key, std::move(c)).first;
    return it->second;
}

inline Real gamma_spouge_positive(const Real& x) {
    // valid for x >= 0.5; relative error ~ (2*pi)^(-a)
    long work_digits = static_cast<long>(Real::active_bits() / 3.32) + 1;
    long a = static_cast<long>(1.2530 * work_digits) + 8;
    PrecisionScope ps(Real::active_bits() + 64);
    const auto& c = spouge_coeffs(a);
    Real z = x - 1;
    Real acc = c[0];
    for (long k = 1; k < a; ++k) acc += c[static_cast<std::size_t>(k)] / (z + k);
    Real base = z + Real(a);
    return pow(base, z + Real(0.5)) * exp(-base) * acc;
}

inline bool is_nonpositive_integer(const Rat& x) { return rat_is_int(x) && x <= 0; }

}  // namespace detail

// Gamma(x) for real x, poles rejected.
inline Real gamma_real(const Real& x) {
    if (x > Real(0.5) || x == Real(0.5)) {
        Real g = detail::gamma_spouge_positive(x);
        Real out;  // round to active precision
        mpfr_set(out.raw(), g.raw(), MPFR_RNDN);
        return out;
    }
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    Real ix;
    mpfr_round(ix.raw(), x.raw());
    if (ix == x)
        throw PoleError("gamma: pole at nonpositive integer " + x.to_decimal(8));
    PrecisionScope ps(Real::active_bits() + 64);
    Real s = sin(Real::pi() * x);
    Real g = Real::pi() / (s * detail::gamma_spouge_positive(Real(1L) - x));
    Real out;
    mpfr_set(out.raw(), g.raw(), MPFR_RNDN);
    return out;
}

inline Real gamma(const Rat& x, Precision prec) {
    PrecisionScope ps(prec);
    if (detail::is_nonpositive_integer(x)) throw PoleError("gamma: pole at " + rat_to_string(x));
    return gamma_real(Real(x));
}

// 1/Gamma with the convention 1/Gamma(-j) = 0 for j in Z>=0.
inline Real recip_gamma_real(const Real& x) {
    Real ix;
    mpfr_round(ix.raw(), x.raw());
    if (ix == x && (x < Real(0L) || x.is_zero())) return Real(0L);
    return Real(1L) / gamma_real(x);
}

inline Real recip_gamma(const Rat& x, Precision prec) {
    PrecisionScope ps(prec);
    if (detail::is_nonpositive_integer(x)) return Real(0L);
    return Real(1L) / gamma_real(Real(x));
}

inline Real lgamma_real(const Real& x) {
    if (!(x > Real(0L))) throw std::domain_error("lgamma: requires x > 0");
    return log(gamma_real(x));
}

// ----------------------------------------------------------------- digamma

inline Real digamma_real(const Real& x) {
    Real ix;
    mpfr_round(ix.raw(), x.raw());
    if (ix == x && (x < Real(0L) || x.is_zero()))
        throw PoleError("digamma: pole at nonpositive integer");
    long bits = Real::active_bits();
    PrecisionScope ps(bits + 64);
    if (x < Real(0.5)) {
        // psi(x) = psi(1-x) - pi cot(pi x)
        Real pix = Real::pi() * x;
        Real cot = cos(pix) / sin(pix);
        Real r = digamma_real(Real(1L) - x) - Real::pi() * cot;
        Real out;
        mpfr_set(out.raw(), r.raw(), MPFR_RNDN);
        return out;
    }
    double digits = bits / 3.32;
    long shift_to = static_cast<long>(0.4 * digits) + 12;
    Real acc(0L);
    Real t = x;
    while (t < Real(shift_to)) { acc -= Real(1L) / t; t += Real(1L); }
    // asymptotic: psi(t) = log t - 1/(2t) - sum B_{2k}/(2k t^{2k})
    Real r = log(t) - Real(0.5) / t;
    Real t2 = t * t;
    Real p = t2;
    Real eps = (abs(r) + Real(1L)).scaled_by_pow10(-static_cast<long>(digits) - 8);
    Real prev_term;
    for (unsigned k = 1; k < 4000; ++k) {
        Real term = Real(bernoulli(2 * k)) / (Real(2L * k) * p);
        r -= term;
        p *= t2;
        Real a = abs(term);
        if (a < eps) break;
        if (k > 2 && a > prev_term) break;  // divergence guard
        prev_term = a;
    }
    Real out = r + acc;
    Real rounded;
    mpfr_set(rounded.raw(), out.raw(), MPFR_RNDN);
    return rounded;
}

inline Real digamma(const Rat& x, Precision prec) {
    PrecisionScope ps(prec);
    if (detail::is_nonpositive_integer(x)) throw PoleError("digamma: pole at " + rat_to_string(x));
    return digamma_real(Real(x));
}

inline Real euler_gamma(Precision prec) {
    PrecisionScope ps(prec);
    return -digamma_real(Real(1L));
}

// -------------------------------------------------------------------- zeta

namespace detail {

// Euler-Maclaurin for zeta(s), real s != 1. Accurate as long as the
// cancellation boost below covers N^{|s|} growth of the correction terms.
inline Real zeta_em(const Real& s) {
    long bits = Real::active_bits();
    double digits = bits / 3.32;
    double sneg = s < Real(0L) ? -s.to_double() : 0.0;
    long N = static_cast<long>(0.7 * digits) + 12 + static_cast<long>(sneg / 2);
    long boost = static_cast<long>((sneg + 2) * std::log2(static_cast<double>(N))) + 64;
    PrecisionScope ps(bits + boost);
    Real acc(0L);
    for (long n = 1; n < N; ++n) acc += pow(Real(n), -s);
    Real Nr(N);
    Real NmS = pow(Nr, -s);
    Real scale = abs(acc) + abs(NmS * Nr / (s - 1)) + Real(1L);
    acc += NmS / 2;
    acc += NmS * Nr / (s - 1);
    // sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    Real rising = s;           // (s)_{2k-1}
    Real npow = NmS / Nr;      // N^{-s-2k+1} at k=1
    Real N2 = Nr * Nr;
    Real eps = scale.scaled_by_pow10(-static_cast<long>(digits) - 10);
    Real prev;
    for (long k = 1; k <= 2 * N; ++k) {
        Real term = Real(bernoulli(2 * static_cast<unsigned>(k))) /
                    Real(factorial_int(2 * static_cast<unsigned>(k))) * rising * npow;
        acc += term;
        Real a = abs(term);
        if (a < eps) break;
        if (k > 2 && a > prev) break;
        prev = a;
        rising *= (s + Real(2L * k - 1)) * (s + Real(2L * k));
        if (rising.is_zero()) break;  // terminating polynomial at negative integer s
        npow /= N2;
    }
    Real out;
    mpfr_set(out.raw(), acc.raw(), MPFR_RNDN);
    return out;
}

}  // namespace detail

inline Real zeta_real(const Real& s) {
    if (s == Real(1L)) throw PoleError("zeta: pole at s = 1");
    long bits = Real::active_bits();
    double digits = bits / 3.32;
    if (s < Real(-2L * static_cast<long>(digits))) {
        // functional equation: zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
        PrecisionScope ps(bits + 64);
        Real pi = Real::pi();
        Real val = pow(Real(2L), s) * pow(pi, s - 1) * sin(pi * s / 2) * gamma_real(Real(1L) - s) *
                   detail::zeta_em(Real(1L) - s);
        Real out;
        mpfr_set(out.raw(), val.raw(), MPFR_RNDN);
        return out;
    }
    return detail::zeta_em(s);
}

inline Real zeta(const Rat& s, Precision prec) {
    if (s == 1) throw PoleError("zeta: pole at s = 1");
    PrecisionScope ps(prec);
    return zeta_real(Real(s));
}

// --------------------------------------------- finite-difference derivative

// r-th derivative of F at x0 with target accuracy ~10^(-digits): central
// differences with one Richardson level, evaluated at boosted precision so
// roundoff stays below the truncation error.
inline Real fd_derivative(const std::function<Real(const Real&)>& F, const Real& x0, unsigned r,
                          int digits) {
    if (r == 0) {
        PrecisionScope ps{Precision(digits)};
        return F(x0);
    }
    long hd = digits / 3 + 4;  // h = 10^-hd, truncation O(h^4) after Richardson
    long work_digits = 3L * digits + static_cast<long>(r) * hd + 24;
    PrecisionScope ps{Precision(static_cast<int>(work_digits))};
    Real h = Real(1L).scaled_by_pow10(-hd);

    auto central = [&](const Real& step) {
        // sum_{i=0}^{r} (-1)^i binom(r,i) F(x0 + (r/2 - i) step), divided by step^r
        Real acc(0L);
        for (unsigned i = 0; i <= r; ++i) {
            Rat coef(binomial_int(r, i));
            if (i % 2 == 1) coef = -coef;
            Rat off = Rat(static_cast<long>(r)) / 2 - Rat(static_cast<long>(i));
            Real x = x0 + Real(off) * step;
            acc += Real(coef) * F(x);
        }
        return acc / pow(step, static_cast<long>(r));
    };

    Real d1 = central(h);
    Real d2 = central(h / 2);
    Real res = (d2 * 4 - d1) / 3;
    PrecisionScope out_ps{Precision(digits)};
    return res + Real(0L);
}

// r-th derivative of zeta at s (r >= 1).
inline Real zeta_deriv(const Rat& s, unsigned r, Precision prec) {
    if (s == 1) throw PoleError("zeta_deriv: pole at s = 1");
    if (r == 0) return zeta(s, prec);
    return fd_derivative([](const Real& x) { return zeta_real(x); }, Real(s), r, prec.digits);
}

// Stieltjes-type constants A_k = ((-1)^k/(k+1)) d^{k+1}/ds^{k+1} [(s-1) zeta(s)] at s=1.
inline Real stieltjes(unsigned k, Precision prec) {
    if (k > 8) throw UnsupportedError("stieltjes: supported range is k <= 8");
    auto F = [](const Real& s) -> Real {
        if (s == Real(1L)) return Real(1L);
        return (s - 1) * zeta_real(s);
    };
    Real d = fd_derivative(F, Real(1L), k + 1, prec.digits);
    PrecisionScope ps(prec);
    Real r = d / Real(static_cast<long>(k + 1));
    return (k % 2 == 1) ? -r : r;
}

// ------------------------------------------------------------------ rising

// rising factorial (x)_k = x (x+1) ... (x+k-1); exact on rational input
inline Rat rising(const Rat& x, unsigned k) {
    Rat r(1);
    for (unsigned i = 0; i < k; ++i) r *= (x + Rat(static_cast<long>(i)));
    return r;
}

inline Real rising_real(const Real& x, unsigned k) {
    Real r(1L);
    for (unsigned i = 0; i < k; ++i) r *= (x + Real(static_cast<long>(i)));
    return r;
}

// ------------------------------------------------------- 1/Gamma Taylor row

// Taylor coefficients of 1/Gamma(s) at s=0: 1/Gamma(s) = sum_{k>=1} a_k s^k,
// a_1 = 1, a_2 = gamma, ... computed from log Gamma(s) = -log s - gamma s +
// sum_{k>=2} (-1)^k zeta(k) s^k / k.
inline std::vector<Real> recip_gamma_taylor(std::size_t order) {
    TSeries u(order);  // gamma*s + sum_{k>=2} (-1)^{k-1} zeta(k) s^k / k
    if (order > 1) u[1] = Value(-digamma_real(Real(1L)));
    for (std::size_t k = 2; k < order; ++k) {
        Real z = zeta_real(Real(static_cast<long>(k)));
        Real c = z / Real(static_cast<long>(k));
        u[k] = Value(k % 2 == 1 ? c : -c);
    }
    TSeries e = u.exp_of();
    std::vector<Real> a(order, Real(0L));
    for (std::size_t k = 1; k < order; ++k) a[k] = e[k - 1].real();
    return a;
}

// --------------------------------------------------------- tail summation

// sum_{n >= N} (log n)^r / n^s for real s > 1, r in {0,1,2}, by
// Euler-Maclaurin at the left endpoint.
inline Real zeta_log_tail(const Real& s, long N, unsigned r) {
    if (!(s > Real(1L))) throw std::domain_error("zeta_log_tail: requires s > 1");
    if (r > 2) throw UnsupportedError("zeta_log_tail: r <= 2");
    long bits = Real::active_bits();
    PrecisionScope ps(bits + 32);
    double digits = bits / 3.32;
    Real Nr(N);
    Real logN = log(Nr);
    Real sm1 = s - 1;

    // integral: N^{1-s} sum_{i=0}^{r} r!/(r-i)! log^{r-i} N / (s-1)^{i+1}
    Real integral(0L);
    {
        Real fct(1L);
        for (unsigned i = 0; i <= r; ++i) {
            if (i > 0) fct *= Real(static_cast<long>(r - i + 1));
            integral += fct * pow(logN, static_cast<long>(r - i)) / pow(sm1, static_cast<long>(i + 1));
        }
        integral *= pow(Nr, Real(1L) - s);
    }

    // f(x) = x^{-s} P(log x); derivative recursion on polynomial coefficients
    // f^{(j)}(x) = x^{-s-j} P_j(log x), P_{j+1} = -(s+j) P_j + P_j'
    std::vector<Real> P(r + 1, Real(0L));
    P[r] = Real(1L);
    auto evalP = [&](const std::vector<Real>& poly) {
        Real acc(0L);
        for (std::size_t i = poly.size(); i-- > 0;) acc = acc * logN + poly[i];
        return acc;
    };
    Real f0 = pow(Nr, -s) * evalP(P);
    Real acc = integral + f0 / 2;

    // f^{(j)}(N) = xpow * P_j(log N), xpow = N^{-s-j}
    std::vector<Real> Pj = P;
    Real xpow = pow(Nr, -s);
    unsigned j = 0;
    auto advance = [&]() {
        std::vector<Real> Pn(Pj.size(), Real(0L));
        for (std::size_t i = 0; i < Pj.size(); ++i) {
            Pn[i] += -(s + Real(static_cast<long>(j))) * Pj[i];
            if (i + 1 < Pj.size()) Pn[i] += Pj[i + 1] * Real(static_cast<long>(i + 1));
        }
        Pj = Pn;
        ++j;
        xpow /= Nr;
    };
    Real eps = (abs(acc) + abs(f0) + Real(1L).scaled_by_pow10(-static_cast<long>(digits)))
                   .scaled_by_pow10(-static_cast<long>(digits) - 8);
    Real prev;
    for (unsigned k = 1; k < 500; ++k) {
        while (j < 2 * k - 1) advance();
        Real deriv = xpow * evalP(Pj);
        Real term = -Real(bernoulli(2 * k)) / Real(factorial_int(2 * k)) * deriv;
        acc += term;
        Real a = abs(term);
        if (a < eps) break;
        if (k > 2 && a > prev) break;
        prev = a;
    }
    Real out;
    mpfr_set(out.raw(), acc.raw(), MPFR_RNDN);
    return out;
}

}  // namespace asymp

#endif  // ASYMP_SPECFUN_HPP
