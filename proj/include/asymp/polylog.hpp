#ifndef ASYMP_POLYLOG_HPP
#define ASYMP_POLYLOG_HPP

// Singular expansions at z = 1 of the generalized polylogarithm
//   Li_{alpha,r}(z) = sum_{n>=1} (log n)^r n^{-alpha} z^n,
// the ordinary generating function of the tolls n^{-alpha} (log n)^r.
//
// In the variable w = -log z,
//   Li_{alpha,0}(z) ~ Gamma(1-alpha) w^{alpha-1}
//                     + sum_{j>=0} ((-1)^j/j!) zeta(alpha-j) w^j,
// and Li_{alpha,r} = (-1)^r d^r/d alpha^r Li_{alpha,0}. Differentiating and
// substituting the w series in powers of (1-z) yields the expansion below.
// Requires alpha not in {1, 2, 3, ...}.

#include "expansion.hpp"
#include "specfun.hpp"

namespace asymp {

// singular expansion of Li_{alpha,r} with error budget O((1-z)^A L^r)
inline SingularExpansion polylog_expansion(const Rat& alpha, unsigned r, const Rat& A,
                                           Precision prec) {
    if (rat_is_int(alpha) && alpha >= 1)
        throw UnsupportedError("polylog_expansion: alpha in {1,2,...} not supported");
    PrecisionScope ps{prec};

    std::vector<WTerm> wterms;
    // singular block: sum_{i<=r} binom(r,i) (-1)^i Gamma^{(r-i)}(1-alpha) w^{alpha-1} log^i w
    for (unsigned i = 0; i <= r; ++i) {
        Real gder;
        if (r - i == 0) {
            gder = gamma_real(Real(Rat(1) - alpha));
        } else {
            gder = fd_derivative([](const Real& x) { return gamma_real(x); },
                                 Real(Rat(1) - alpha), r - i, prec.digits);
        }
        Value c = Value(gder) * Value(Rat(binomial_int(r, i)));
        if (i % 2 == 1) c = -c;
        wterms.push_back(WTerm{c, alpha - 1, static_cast<int>(i)});
    }
    // regular block: (-1)^r sum_j ((-1)^j/j!) zeta^{(r)}(alpha - j) w^j
    Rat jmax = A - alpha;  // keep w^j with weight up to the budget
    Int fact(1);
    for (long j = 0; Rat(j) < A + 1; ++j) {
        if (j > 0) fact *= j;
        Rat s = alpha - j;
        if (s == 1) throw UnsupportedError("polylog_expansion: zeta pole hit");
        Real zd = (r == 0) ? zeta_real(Real(s)) : zeta_deriv(s, r, prec);
        Value c = Value(zd) / Value(Rat(fact));
        if (j % 2 == 1) c = -c;
        if (r % 2 == 1) c = -c;
        wterms.push_back(WTerm{c, Rat(j), 0});
    }
    (void)jmax;
    return w_to_oneminusz(wterms, A, static_cast<int>(r));
}

// OGF of the toll sequence t_n = n^beta (log n)^r as a singular expansion
// (beta > 0 power tolls use Li_{-beta}; the log toll uses Li_{0,1})
inline SingularExpansion toll_ogf_expansion(const Rat& beta, unsigned r, const Rat& A,
                                            Precision prec) {
    return polylog_expansion(-beta, r, A, prec);
}

}  // namespace asymp

#endif  // ASYMP_POLYLOG_HPP
