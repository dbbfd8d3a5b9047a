#ifndef ASYMP_HADAMARD_HPP
#define ASYMP_HADAMARD_HPP

// Hadamard products of singular expansions: the explicit power-product law,
// error-term composition, Taylor values at 1 with zeta-tail acceleration,
// and the zigzag driver (transfer both factors, multiply coefficientwise,
// reconstruct, then recover the hidden analytic polynomial from Taylor
// values at 1).

#include "oracle.hpp"

#include <cmath>
#include "series.hpp"
#include "transfer.hpp"

namespace asymp {

struct HadamardError : std::logic_error {
    explicit HadamardError(const std::string& m) : std::logic_error(m) {}
};

// ------------------------------------------------------------ power product

// (1-z)^a (.) (1-z)^b for a, b, a+b all non-integers: two exponent ladders
//   sum_k (lambda_k/k!) (1-z)^k + sum_k (mu_k/k!) (1-z)^{a+b+1+k}
// with Gamma-prefactors and Pochhammer ratios. K ladders of each kind are
// retained; the budget sits at the first omitted exponent.
inline SingularExpansion power_hadamard(const Rat& a, const Rat& b, int K, Precision prec) {
    if (rat_is_int(a) || rat_is_int(b))
        throw HadamardError("power_hadamard: integer exponent; use the polynomial/derivative shortcut");
    if (rat_is_int(a + b))
        throw HadamardError("power_hadamard: a+b integer requires the zigzag route");
    if (K < 1) throw HadamardError("power_hadamard: K >= 1");
    PrecisionScope ps{prec};

    Real lam0 = gamma_real(Real(Rat(1) + a + b)) *
                (recip_gamma_real(Real(Rat(1) + a)) * recip_gamma_real(Real(Rat(1) + b)));
    Real mu0 = gamma_real(Real(Rat(-1) - a - b)) *
               (recip_gamma_real(Real(-a)) * recip_gamma_real(Real(-b)));

    SingularExpansion out;
    Rat kfact(1);
    for (int k = 0; k < K; ++k) {
        if (k > 0) kfact *= k;
        // lambda_k / k! = lam0 * (-a)_k (-b)_k / ((-a-b)_k k!)
        Rat num = rising(-a, static_cast<unsigned>(k)) * rising(-b, static_cast<unsigned>(k));
        Rat den = rising(-a - b, static_cast<unsigned>(k)) * kfact;
        Value lam = Value(lam0) * Value(num / den);
        if (!lam.is_zero()) out.terms.emplace_back(lam, Rat(k), 0);
        // mu_k / k! = mu0 * (1+a)_k (1+b)_k / ((2+a+b)_k k!)
        Rat mnum = rising(Rat(1) + a, static_cast<unsigned>(k)) *
                   rising(Rat(1) + b, static_cast<unsigned>(k));
        Rat mden = rising(Rat(2) + a + b, static_cast<unsigned>(k)) * kfact;
        Value mu = Value(mu0) * Value(mnum / mden);
        if (!mu.is_zero()) out.terms.emplace_back(mu, a + b + 1 + Rat(k), 0);
    }
    // budget: dominant of the two omitted ladders
    ErrorBudget e1 = ErrorBudget::big_o(Rat(K));
    ErrorBudget e2 = ErrorBudget::big_o(a + b + 1 + Rat(K));
    out.error = scale_dominates(e1.aexp, 0, e2.aexp, 0) ? e1 : e2;
    return normalize(out);
}

// the unit of the Hadamard product is (1-z)^{-1} (all-ones coefficients)
inline SingularExpansion hadamard_identity(const SingularExpansion& f) { return normalize(f); }

// --------------------------------------------------------- error composition

struct HadamardErrorInfo {
    int taylor_degree = -1;  // -1: no analytic part required
    ErrorBudget budget;
};

// composition of O((1-z)^a L^k) (.) O((1-z)^b L^l)
inline HadamardErrorInfo error_hadamard(const Rat& a, int k, const Rat& b, int l) {
    HadamardErrorInfo info;
    Rat s = a + b + 1;
    if (s < 0) {
        info.taylor_degree = -1;
        info.budget = ErrorBudget::big_o(s, k + l);
        return info;
    }
    if (rat_is_int(s)) {
        info.taylor_degree = static_cast<int>(rat_to_long(s)) - 1;
        info.budget = ErrorBudget::big_o(s, k + l + 1);
        return info;
    }
    // k0 < s < k0+1 with k0 >= 0 integer (s > 0 non-integer here)
    long k0 = static_cast<long>(s.get_d());  // floor for positive s
    info.taylor_degree = static_cast<int>(k0);
    info.budget = ErrorBudget::big_o(s, k + l);
    return info;
}

// ------------------------------------------------- accelerated summation

// falling factorial n(n-1)...(n-j+1) as an exact polynomial in n
inline std::vector<Rat> falling_factorial_poly(unsigned j) {
    std::vector<Rat> poly{Rat(1)};
    for (unsigned i = 0; i < j; ++i) {
        std::vector<Rat> next(poly.size() + 1, Rat(0));
        for (std::size_t q = 0; q < poly.size(); ++q) {
            next[q + 1] += poly[q];
            next[q] -= poly[q] * Rat(static_cast<long>(i));
        }
        poly = std::move(next);
    }
    return poly;
}

// multiply a coefficient expansion by an exact polynomial in n
inline CoeffAsymptotics coeff_mul_poly(const CoeffAsymptotics& a, const std::vector<Rat>& poly) {
    CoeffAsymptotics out;
    out.exp_factor = a.exp_factor;
    for (const auto& t : a.terms)
        for (std::size_t q = 0; q < poly.size(); ++q) {
            if (poly[q] == 0) continue;
            out.terms.emplace_back(t.coeff * Value(poly[q]), t.npow + Rat(static_cast<long>(q)),
                                   t.logpow);
        }
    out.exact = a.exact;
    if (!a.exact) {
        out.err_npow = a.err_npow + Rat(static_cast<long>(poly.size()) - 1);
        out.err_logpow = a.err_logpow;
    }
    return coeff_normalize(out);
}

// sum_{n >= n0} u(n), closing the tail beyond N with the descending
// expansion `asym` of u via Euler-Maclaurin zeta tails. All asym terms must
// decay faster than 1/n.
inline Real accelerated_sum(const std::function<Real(long)>& u, const CoeffAsymptotics& asym,
                            long n0, long N) {
    Real head(0L);
    for (long n = n0; n <= N; ++n) head += u(n);
    Real tail(0L);
    for (const auto& t : asym.terms) {
        if (!(t.npow < Rat(-1)))
            throw HadamardError("accelerated_sum: tail term does not converge");
        if (t.logpow < 0) {
            // 1/(n log^m n) scale beyond the zeta-tail machinery; these
            // appear only below the requested accuracy in our uses
            continue;
        }
        tail += t.coeff.real() *
                zeta_log_tail(Real(-t.npow), N + 1, static_cast<unsigned>(t.logpow));
    }
    return head + tail;
}

// ------------------------------------------------------------ taylor at one

// (f (.) g)^{(j)}(1) = sum_{n>=j} f_n g_n n(n-1)...(n-j+1), convergent for
// j < a+b+1; the summand's asymptotic expansion comes from the suppliers'
// tail descriptors and is used to close the tail.
inline Real taylor_at_one(const SeriesProvider& f, const SeriesProvider& g, unsigned j,
                          Precision prec, long N = 0) {
    if (!f.tail || !g.tail)
        throw HadamardError("taylor_at_one: providers need asymptotic tail descriptors");
    PrecisionScope ps{Precision(prec.digits + 15)};
    CoeffAsymptotics prod = coeff_multiply(*f.tail, *g.tail);
    CoeffAsymptotics summand = coeff_mul_poly(prod, falling_factorial_poly(j));
    if (!summand.terms.empty() && !(summand.terms.front().npow < Rat(-1)))
        throw HadamardError("taylor_at_one: series diverges (j >= a+b+1)");
    if (N <= 0) N = 4000;
    long nmax = static_cast<long>(std::min(f.nmax(), g.nmax()));
    if (N > nmax) N = nmax;
    auto uf = [&](long n) -> Real {
        Real v = f.coeff(static_cast<std::size_t>(n)).real() *
                 g.coeff(static_cast<std::size_t>(n)).real();
        Real fall(1L);
        for (unsigned i = 0; i < j; ++i) fall *= Real(n - static_cast<long>(i));
        return v * fall;
    };
    Real s = accelerated_sum(uf, summand, static_cast<long>(j), N);
    PrecisionScope out{prec};
    return s + Real(0L);
}

// Variant with the singular part subtracted coefficientwise: computes
// (f (.) g - S)^{(j)}(1) where S is a sum of singular elements whose exact
// coefficient streams are generated by recurrence. Convergence requires S to
// carry all singular content of f (.) g through exponent j.
inline Real taylor_at_one_reduced(const SeriesProvider& f, const SeriesProvider& g,
                                  const SingularExpansion& S, unsigned j, Precision prec,
                                  long N = 0) {
    if (!f.tail || !g.tail)
        throw HadamardError("taylor_at_one_reduced: providers need tails");
    PrecisionScope ps{Precision(prec.digits + 25)};
    if (N <= 0) N = 4000;
    long nmax = static_cast<long>(std::min(f.nmax(), g.nmax()));
    if (N > nmax) N = nmax;

    // exact coefficient streams of the singular elements
    std::vector<std::vector<Value>> streams;
    std::vector<Real> coefs;
    for (const auto& t : S.terms) {
        if (t.logpow < 0)
            throw HadamardError("taylor_at_one_reduced: inverse-log element stream unsupported");
        streams.push_back(
            singular_element_series_float(t.alpha, t.logpow, static_cast<std::size_t>(N)).coeffs);
        coefs.push_back(t.coeff.real());
    }
    // summand asymptotics: (f.tail * g.tail - transfer(S)) * falling poly
    int depth = 4;
    {
        // deep enough that the residual decays well beyond n^{-j-1}: the
        // subtracted transfer reaches n^{-(lead+1)-depth}, and the zeta-tail
        // closure should leave ~10^{-digits} at the head cutoff
        Rat lead = S.terms.empty() ? Rat(0) : S.terms.front().alpha;
        double extra = 0.8 * prec.digits / std::log10(static_cast<double>(N));
        Rat span = Rat(static_cast<long>(j)) + 2 - lead;
        depth = std::max(depth, static_cast<int>(span.get_d() + extra) + 2);
    }
    CoeffAsymptotics prod = coeff_multiply(*f.tail, *g.tail);
    SingularExpansion Sdeep = S;
    Sdeep.error = ErrorBudget::exact();
    CoeffAsymptotics st = transfer(Sdeep, depth, Precision(prec.digits + 25));
    st.exp_factor = prod.exp_factor;
    CoeffAsymptotics resid = coeff_add(prod, coeff_scale(st, Value(-1L)));
    {
        // imperfect numeric cancellation leaves specks at the leading scales
        Real scale0(0L);
        for (const auto& t : prod.terms) {
            Real a = abs(t.coeff.real());
            if (a > scale0) scale0 = a;
        }
        Real tol = (scale0 + Real(1L)).scaled_by_pow10(-prec.digits - 8);
        CoeffAsymptotics cleaned;
        cleaned.exact = resid.exact;
        cleaned.err_npow = resid.err_npow;
        cleaned.err_logpow = resid.err_logpow;
        cleaned.exp_factor = resid.exp_factor;
        for (const auto& t : resid.terms)
            if (abs(t.coeff.real()) > tol) cleaned.terms.push_back(t);
        resid = coeff_normalize(cleaned);
    }
    CoeffAsymptotics summand = coeff_mul_poly(resid, falling_factorial_poly(j));
    if (!summand.terms.empty() && !(summand.terms.front().npow < Rat(-1)))
        throw HadamardError("taylor_at_one_reduced: residual series diverges");

    auto uf = [&](long n) -> Real {
        std::size_t un = static_cast<std::size_t>(n);
        Real v = f.coeff(un).real() * g.coeff(un).real();
        for (std::size_t i = 0; i < streams.size(); ++i) v -= coefs[i] * streams[i][un].real();
        Real fall(1L);
        for (unsigned i = 0; i < j; ++i) fall *= Real(n - static_cast<long>(i));
        return v * fall;
    };
    Real s = accelerated_sum(uf, summand, static_cast<long>(j), N);
    PrecisionScope out{prec};
    return s + Real(0L);
}

// ----------------------------------------------------------------- zigzag

struct ZigzagOptions {
    int depth = 4;
    ReconstructBasis basis = ReconstructBasis::Standard;
    long sum_cutoff = 4000;  // head length for the taylor-at-one sums
    int max_poly_degree = 8;
};

// singular expansion of f (.) g: reconstruct the singular part from the
// coefficient asymptotics, then fill in the hidden polynomial part from
// Taylor values at 1.
inline SingularExpansion zigzag(const SingularExpansion& f_exp, const SingularExpansion& g_exp,
                                const SeriesProvider& f_coeffs, const SeriesProvider& g_coeffs,
                                Precision prec, ZigzagOptions opt = {}) {
    if (!(f_exp.rho == ScaleFactor::one()) || !(g_exp.rho == ScaleFactor::one()))
        throw HadamardError("zigzag: inputs must be rescaled to rho = 1");
    CoeffAsymptotics af = transfer(f_exp, opt.depth, prec);
    CoeffAsymptotics ag = transfer(g_exp, opt.depth, prec);
    CoeffAsymptotics m = coeff_multiply(af, ag);
    SingularExpansion H = reconstruct(m, opt.basis, prec);

    // error exponent C = 1 + min(alpha0 + B, A + beta0) per the composition
    // theorem, limited additionally by what the depth supported
    ErrorBudget budget = H.error;
    if (!f_exp.terms.empty() && !g_exp.error.is_exact) {
        auto info = error_hadamard(f_exp.terms.front().alpha, f_exp.terms.front().logpow,
                                   g_exp.error.aexp, g_exp.error.logpow);
        budget = detail::coarser(budget, info.budget);
    }
    if (!g_exp.terms.empty() && !f_exp.error.is_exact) {
        auto info = error_hadamard(g_exp.terms.front().alpha, g_exp.terms.front().logpow,
                                   f_exp.error.aexp, f_exp.error.logpow);
        budget = detail::coarser(budget, info.budget);
    }
    if (!f_exp.error.is_exact && !g_exp.error.is_exact) {
        auto info = error_hadamard(f_exp.error.aexp, f_exp.error.logpow, g_exp.error.aexp,
                                   g_exp.error.logpow);
        budget = detail::coarser(budget, info.budget);
    }

    SingularExpansion out = H;
    out.error = budget;
    out = normalize(out);

    // hidden analytic part: P_j = ((-1)^j / j!) (f.g - H)^{(j)}(1) for
    // integer exponents j dominating the budget
    SeriesProvider fp = f_coeffs;
    fp.tail = af;
    SeriesProvider gp = g_coeffs;
    gp.tail = ag;
    for (int j = 0; j <= opt.max_poly_degree; ++j) {
        if (!budget.is_exact && !scale_dominates(Rat(j), 0, budget.aexp, budget.logpow)) break;
        Real vj = taylor_at_one_reduced(fp, gp, H, static_cast<unsigned>(j), prec,
                                        opt.sum_cutoff);
        Rat jfact(1);
        for (int q = 2; q <= j; ++q) jfact *= q;
        Value pj = Value(vj) / Value(jfact);
        if (j % 2 == 1) pj = -pj;
        if (!pj.is_zero()) out.terms.emplace_back(pj, Rat(j), 0);
    }
    return normalize(out);
}

}  // namespace asymp

#endif  // ASYMP_HADAMARD_HPP
