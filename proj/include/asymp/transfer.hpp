#ifndef ASYMP_TRANSFER_HPP
#define ASYMP_TRANSFER_HPP

// Coefficient asymptotics: the transfer from singular expansions at z=1 to
// descending expansions of [z^n], its inverse (reconstruction), and
// arithmetic on coefficient expansions.
//
// The engine behind a single term is the descending expansion
//   binom(n-a-1, -a-1) = n^{-a-1} sum_j F_j(a) n^{-j},
//   F_j(a) = e_j(a) / Gamma(-a),
// with the e_j obtained by expanding Gamma(n-a)/Gamma(n+1) through the
// Stirling series. Logarithmic factors come from differentiation with
// respect to the exponent, performed numerically by central differences at
// boosted precision. Negative powers of L (alpha = 0 only) map onto the
// scale 1/(n log^m n) through the Taylor row of 1/Gamma at 0.

#include "expansion.hpp"
#include "polylog.hpp"
#include "specfun.hpp"

#include <functional>
#include <vector>

namespace asymp {

struct TransferError : std::logic_error {
    explicit TransferError(const std::string& m) : std::logic_error(m) {}
};

struct CoeffTerm {
    Value coeff;
    Rat npow;
    int logpow = 0;

    CoeffTerm() = default;
    CoeffTerm(Value c, Rat b, int k) : coeff(std::move(c)), npow(std::move(b)), logpow(k) {}
};

// dominance as n -> infinity
inline bool coeff_scale_dominates(const Rat& b1, int k1, const Rat& b2, int k2) {
    if (b1 != b2) return b1 > b2;
    return k1 > k2;
}

struct CoeffAsymptotics {
    std::vector<CoeffTerm> terms;  // sorted by descending dominance
    bool exact = true;             // exact (terminating) or big-O error below
    Rat err_npow;
    int err_logpow = 0;
    ScaleFactor exp_factor;  // coefficients carry exp_factor^n

    bool is_zero() const { return terms.empty(); }

    static CoeffAsymptotics zero_exact() { return {}; }
};

inline CoeffAsymptotics coeff_normalize(const CoeffAsymptotics& a) {
    std::map<std::pair<Rat, int>, Value> acc;
    for (const auto& t : a.terms) {
        auto key = std::make_pair(-t.npow, -t.logpow);
        auto it = acc.find(key);
        if (it == acc.end()) acc.emplace(key, t.coeff);
        else it->second += t.coeff;
    }
    CoeffAsymptotics out;
    out.exact = a.exact;
    out.err_npow = a.err_npow;
    out.err_logpow = a.err_logpow;
    out.exp_factor = a.exp_factor;
    for (auto& [key, c] : acc) {
        if (c.is_zero()) continue;
        Rat npow = -key.first;
        int logpow = -key.second;
        if (!a.exact && !coeff_scale_dominates(npow, logpow, a.err_npow, a.err_logpow)) continue;
        out.terms.emplace_back(c, npow, logpow);
    }
    return out;
}

namespace detail {

inline CoeffAsymptotics coeff_coarser_error(const CoeffAsymptotics& out, bool e1, const Rat& b1,
                                            int k1, bool e2, const Rat& b2, int k2) {
    CoeffAsymptotics r = out;
    if (e1 && e2) {
        r.exact = true;
        return r;
    }
    r.exact = false;
    if (e1) { r.err_npow = b2; r.err_logpow = k2; return r; }
    if (e2) { r.err_npow = b1; r.err_logpow = k1; return r; }
    if (coeff_scale_dominates(b1, k1, b2, k2)) { r.err_npow = b1; r.err_logpow = k1; }
    else { r.err_npow = b2; r.err_logpow = k2; }
    return r;
}

}  // namespace detail

// -------------------------------------------------- binomial ratio row e_j

// e_j(a) with binom(n-a-1,-a-1) * Gamma(-a) = n^{-a-1} sum_j e_j(a) n^{-j};
// exact rationals for rational a, Real coefficients for perturbed arguments.
// Derived from log Gamma(n-a) - log Gamma(n+1) expanded in v = 1/n via the
// Stirling series.
inline std::vector<Value> binom_ratio_row(const Value& a, std::size_t depth) {
    std::size_t M = depth + 1;
    TSeries S(M);  // series in v with S[0] = 0 after cancellation

    // n log(1-a v) + 1/v-aligned parts:
    // (n - a - 1/2) log(1-a v) - (n + 1/2) log(1+v) + (1 + a)
    // n log(1-a v) = -a - a^2 v/2 - a^3 v^2/3 - ...
    // n log(1+v)   =  1 - v/2 + v^2/3 - ...
    TSeries log1mav(M + 1), log1pv(M + 1);
    {
        Value ap = Value(1L);
        for (std::size_t i = 1; i <= M; ++i) {
            ap = ap * a;  // a^i
            log1mav[i] = -(ap / Value(Rat(static_cast<long>(i))));
            Value c = Value(Rat(1, static_cast<long>(i)));
            log1pv[i] = (i % 2 == 1) ? c : -c;
        }
    }
    // n*log(1-av) contributes shifted coefficients: coefficient of v^i in
    // (1/v)*log(1-av) is log1mav[i+1]
    TSeries part(M);
    for (std::size_t i = 0; i < M; ++i) {
        Value acc(0L);
        if (i + 1 <= M) acc += log1mav[i + 1] - log1pv[i + 1];  // from n*(...)
        if (i >= 1) {
            acc += (-a - Value(Rat(1, 2))) * log1mav[i];
            acc += -Value(Rat(1, 2)) * log1pv[i];
        }
        part[i] = acc;
    }
    // constant check: part[0] = -a - 1; add (1 + a) to cancel
    part[0] += Value(1L) + a;

    // Bernoulli block: sum_j B_{2j}/(2j(2j-1)) v^{2j-1} [(1-av)^{1-2j} - (1+v)^{1-2j}]
    for (std::size_t j = 1; 2 * j - 1 <= M; ++j) {
        Value coef = Value(bernoulli(2 * static_cast<unsigned>(j))) /
                     Value(Rat(static_cast<long>(2 * j) * static_cast<long>(2 * j - 1)));
        long e = 1 - 2 * static_cast<long>(j);
        // (1-av)^e and (1+v)^e as truncated series
        TSeries u1(M), u2(M);
        if (M > 1) {
            u1[1] = -a;
            u2[1] = Value(1L);
        }
        TSeries p1 = u1.pow1p(Value(Rat(e)));
        TSeries p2 = u2.pow1p(Value(Rat(e)));
        TSeries diff = p1 - p2;
        std::size_t shift = 2 * j - 1;
        for (std::size_t i = 0; i + shift < M; ++i) part[i + shift] += coef * diff[i];
    }

    TSeries es = part.exp_of();
    std::vector<Value> out(depth);
    for (std::size_t i = 0; i < depth; ++i) out[i] = es[i];
    return out;
}

// F_j(a) = e_j(a)/Gamma(-a) evaluated as a vector, callable at Real a for
// numerical alpha-differentiation.
inline std::vector<Real> binom_asym_row_real(const Real& a, std::size_t depth) {
    std::vector<Value> ej = binom_ratio_row(Value(a), depth);
    Real rg = recip_gamma_real(-a);
    std::vector<Real> out;
    out.reserve(depth);
    for (auto& e : ej) out.push_back(e.real() * rg);
    return out;
}

// ------------------------------------------------------------ binomial_asym

// descending expansion of binom(n-a-1, -a-1) to `depth` n-orders
inline CoeffAsymptotics binomial_asym(const Rat& alpha, int depth, Precision prec) {
    if (depth < 1) throw TransferError("binomial_asym: depth >= 1 required");
    CoeffAsymptotics out;
    if (rat_is_int(alpha)) {
        long m = rat_to_long(alpha);
        if (m >= 0) return CoeffAsymptotics::zero_exact();  // null contribution
        // binom(n+|m|-1, |m|-1) is a polynomial in n: prod_{i=1}^{|m|-1}(n+i)/(|m|-1)!
        long mm = -m;
        std::vector<Rat> poly{Rat(1)};  // coefficients in ascending n powers
        for (long i = 1; i <= mm - 1; ++i) {
            std::vector<Rat> next(poly.size() + 1, Rat(0));
            for (std::size_t q = 0; q < poly.size(); ++q) {
                next[q + 1] += poly[q];
                next[q] += poly[q] * Rat(i);
            }
            poly = std::move(next);
        }
        Rat fact(1);
        for (long i = 2; i <= mm - 1; ++i) fact *= i;
        for (std::size_t q = 0; q < poly.size(); ++q)
            out.terms.emplace_back(Value(poly[q] / fact), Rat(static_cast<long>(q)), 0);
        out.exact = true;
        std::sort(out.terms.begin(), out.terms.end(), [](const CoeffTerm& x, const CoeffTerm& y) {
            return coeff_scale_dominates(x.npow, x.logpow, y.npow, y.logpow);
        });
        return out;
    }
    PrecisionScope ps{prec};
    std::vector<Value> ej = binom_ratio_row(Value(alpha), static_cast<std::size_t>(depth));
    Real rg = recip_gamma_real(Real(-alpha));
    for (int j = 0; j < depth; ++j) {
        Value c = Value(ej[static_cast<std::size_t>(j)].real() * rg);
        if (c.is_zero()) continue;
        out.terms.emplace_back(c, -alpha - 1 - j, 0);
    }
    out.exact = false;
    out.err_npow = -alpha - 1 - depth;
    out.err_logpow = 0;
    return out;
}

// ---------------------------------------------------------------- transfer

// cap for the descending 1/log scale
inline constexpr int kInverseLogDepth = 6;

inline CoeffAsymptotics transfer(const SingularExpansion& f, int depth, Precision prec) {
    if (depth < 1) throw TransferError("transfer: depth >= 1 required");
    PrecisionScope ps{prec};
    CoeffAsymptotics out;
    out.exp_factor = f.rho.inverse();
    bool have_err = false;
    Rat err_npow;
    int err_logpow = 0;
    auto push_err = [&](const Rat& b, int k) {
        if (!have_err || coeff_scale_dominates(b, k, err_npow, err_logpow)) {
            err_npow = b;
            err_logpow = k;
        }
        have_err = true;
    };

    for (const auto& t : f.terms) {
        if (t.logpow == 0) {
            if (rat_is_int(t.alpha) && t.alpha >= 0) continue;  // null contribution
            CoeffAsymptotics b = binomial_asym(t.alpha, depth, prec);
            for (auto& bt : b.terms)
                out.terms.emplace_back(bt.coeff * t.coeff, bt.npow, bt.logpow);
            if (!b.exact) push_err(b.err_npow, b.err_logpow);
            continue;
        }
        if (t.logpow < 0) {
            if (t.alpha != 0)
                throw TransferError("transfer: negative log power requires alpha = 0");
            // c L^{-m}: (1/n) sum_{i>=1} rising(m,i) a_i (-1)^i / log^{m+i} n
            int m = -t.logpow;
            auto arow = recip_gamma_taylor(static_cast<std::size_t>(kInverseLogDepth) + 2);
            for (int i = 1; i <= kInverseLogDepth; ++i) {
                Value c = t.coeff * Value(rising(Rat(m), static_cast<unsigned>(i))) *
                          Value(arow[static_cast<std::size_t>(i)]);
                if (i % 2 == 1) c = -c;
                if (c.is_zero()) continue;
                out.terms.emplace_back(c, Rat(-1), -(m + i));
            }
            push_err(Rat(-1), -(m + kInverseLogDepth + 1));
            continue;
        }
        // positive log powers: alpha-differentiation of the asymptotic row
        unsigned k = static_cast<unsigned>(t.logpow);
        for (int j = 0; j < depth; ++j) {
            for (unsigned i = 0; i <= k; ++i) {
                unsigned dorder = k - i;
                std::size_t jj = static_cast<std::size_t>(j);
                Real Fderiv = fd_derivative(
                    [jj](const Real& x) {
                        auto row = binom_asym_row_real(x, jj + 1);
                        return row[jj];
                    },
                    Real(t.alpha), dorder, prec.digits);
                Value c = t.coeff * Value(Rat(binomial_int(k, i))) * Value(Fderiv);
                if ((k - i) % 2 == 1) c = -c;
                if (c.is_zero()) continue;
                out.terms.emplace_back(c, -t.alpha - 1 - j, static_cast<int>(i));
            }
        }
        push_err(-t.alpha - 1 - depth, static_cast<int>(k));
    }

    if (!f.error.is_exact) push_err(-f.error.aexp - 1, f.error.logpow);
    out.exact = !have_err;
    if (have_err) {
        out.err_npow = err_npow;
        out.err_logpow = err_logpow;
    }
    return coeff_normalize(out);
}

// ------------------------------------------------------- coeff arithmetic

inline CoeffAsymptotics coeff_add(const CoeffAsymptotics& a, const CoeffAsymptotics& b) {
    if (!(a.exp_factor == b.exp_factor))
        throw TransferError("coeff_add: mismatched exponential factors");
    CoeffAsymptotics out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    out = detail::coeff_coarser_error(out, a.exact, a.err_npow, a.err_logpow, b.exact, b.err_npow,
                                      b.err_logpow);
    return coeff_normalize(out);
}

inline CoeffAsymptotics coeff_scale(const CoeffAsymptotics& a, const Value& c) {
    CoeffAsymptotics out = a;
    for (auto& t : out.terms) t.coeff = t.coeff * c;
    return coeff_normalize(out);
}

inline CoeffAsymptotics coeff_multiply(const CoeffAsymptotics& a, const CoeffAsymptotics& b) {
    CoeffAsymptotics out;
    out.exp_factor = a.exp_factor * b.exp_factor;
    for (const auto& s : a.terms)
        for (const auto& t : b.terms)
            out.terms.emplace_back(s.coeff * t.coeff, s.npow + t.npow, s.logpow + t.logpow);
    bool have = false;
    Rat eb;
    int el = 0;
    auto push = [&](const Rat& x, int y) {
        if (!have || coeff_scale_dominates(x, y, eb, el)) { eb = x; el = y; }
        have = true;
    };
    if (!b.exact)
        for (const auto& s : a.terms) push(s.npow + b.err_npow, s.logpow + b.err_logpow);
    if (!a.exact)
        for (const auto& t : b.terms) push(t.npow + a.err_npow, t.logpow + a.err_logpow);
    if (!a.exact && !b.exact) push(a.err_npow + b.err_npow, a.err_logpow + b.err_logpow);
    out.exact = !have;
    if (have) { out.err_npow = eb; out.err_logpow = el; }
    return coeff_normalize(out);
}

// 1/a as a descending expansion; dominant term must be log-free
inline CoeffAsymptotics coeff_reciprocal(const CoeffAsymptotics& a_in, int order) {
    CoeffAsymptotics a = coeff_normalize(a_in);
    if (a.is_zero()) throw TransferError("coeff_reciprocal: zero dominant");
    const CoeffTerm dom = a.terms.front();
    if (dom.logpow != 0)
        throw TransferError("coeff_reciprocal: dominant term carries a log factor");
    CoeffAsymptotics u;  // (a - dom)/dom, scale-relative
    for (std::size_t i = 1; i < a.terms.size(); ++i)
        u.terms.emplace_back(a.terms[i].coeff / dom.coeff, a.terms[i].npow - dom.npow,
                             a.terms[i].logpow);
    u.exact = a.exact;
    if (!a.exact) { u.err_npow = a.err_npow - dom.npow; u.err_logpow = a.err_logpow; }
    u = coeff_normalize(u);

    bool have_cut = !u.exact;
    Rat cut_b = u.err_npow;
    int cut_l = u.err_logpow;
    if (!u.is_zero()) {
        Rat delta = u.terms.front().npow;                   // < 0
        int dl = u.terms.front().logpow;
        Rat oc = delta * (order + 1);
        int ol = dl * (order + 1);
        if (!have_cut || coeff_scale_dominates(oc, ol, cut_b, cut_l)) { cut_b = oc; cut_l = ol; }
        have_cut = true;
    }

    CoeffAsymptotics geom;
    geom.terms.emplace_back(Value(1L), Rat(0), 0);
    geom.exact = !have_cut;
    if (have_cut) { geom.err_npow = cut_b; geom.err_logpow = cut_l; }
    geom = coeff_normalize(geom);
    if (!u.is_zero()) {
        CoeffAsymptotics upow;
        upow.terms.emplace_back(Value(1L), Rat(0), 0);
        upow.exact = geom.exact;
        upow.err_npow = geom.err_npow;
        upow.err_logpow = geom.err_logpow;
        for (int m = 1; m <= order + 1; ++m) {
            upow = coeff_multiply(upow, u);
            upow = detail::coeff_coarser_error(upow, upow.exact, upow.err_npow, upow.err_logpow,
                                               geom.exact, geom.err_npow, geom.err_logpow);
            upow = coeff_normalize(upow);
            if (upow.is_zero()) break;
            geom = coeff_add(geom, coeff_scale(upow, Value(m % 2 == 1 ? -1L : 1L)));
        }
    }
    CoeffAsymptotics out;
    out.exp_factor = a.exp_factor.inverse();
    for (const auto& t : geom.terms)
        out.terms.emplace_back(t.coeff / dom.coeff, t.npow - dom.npow, t.logpow);
    out.exact = geom.exact;
    if (!geom.exact) { out.err_npow = geom.err_npow - dom.npow; out.err_logpow = geom.err_logpow; }
    return coeff_normalize(out);
}

// numeric evaluation of the term sum at a concrete n (without exp_factor)
inline Real coeff_eval(const CoeffAsymptotics& a, long n) {
    Real nr(n);
    Real ln = log(nr);
    Real acc(0L);
    for (const auto& t : a.terms) {
        Real v = t.coeff.real();
        if (t.npow != 0) v *= pow(nr, Real(t.npow));
        if (t.logpow != 0) v *= pow(ln, static_cast<long>(t.logpow));
        acc += v;
    }
    return acc;
}

// value of the error-term scale at n (for ratio predictions)
inline Real coeff_error_scale(const CoeffAsymptotics& a, long n) {
    if (a.exact) return Real(0L);
    Real nr(n);
    Real v = pow(nr, Real(a.err_npow));
    if (a.err_logpow != 0) v *= pow(log(nr), static_cast<long>(a.err_logpow));
    return v;
}

// --------------------------------------------------------------- reconstruct

enum class ReconstructBasis { Standard, Polylog };

// In the polylog basis the peeling is exact: [z^n] Li_{-b,k} = n^b log^k n
// for n >= 1, so each coefficient term maps onto one Li element whose
// singular expansion is then emitted.
inline SingularExpansion reconstruct_polylog(const CoeffAsymptotics& a_in, Precision prec) {
    PrecisionScope ps{prec};
    CoeffAsymptotics a = coeff_normalize(a_in);
    Rat A = Rat(3);
    if (!a.exact) A = -a.err_npow - 1;
    SingularExpansion out = SingularExpansion::zero(
        a.exact ? ErrorBudget::exact() : ErrorBudget::big_o(-a.err_npow - 1, a.err_logpow));
    out.rho = a.exp_factor.inverse();
    for (const auto& t : a.terms) {
        if (t.logpow < 0)
            throw TransferError("reconstruct: inverse-log terms have no polylog element");
        SingularExpansion li =
            polylog_expansion(-t.npow, static_cast<unsigned>(t.logpow), A, prec);
        li.rho = out.rho;
        li.error = out.error;
        out = add(out, scale(li, t.coeff));
    }
    return normalize(out);
}

// Greedy triangular peeling back to a singular expansion. The result carries
// no polynomial part (integer powers of (1-z) are invisible here).
inline SingularExpansion reconstruct(const CoeffAsymptotics& a_in, ReconstructBasis basis,
                                     Precision prec) {
    if (basis == ReconstructBasis::Polylog) return reconstruct_polylog(a_in, prec);
    PrecisionScope ps{prec};
    CoeffAsymptotics rem = coeff_normalize(a_in);
    SingularExpansion out;
    // the output lives at the same rescaled singularity
    out.rho = rem.exp_factor.inverse();
    if (!rem.exact)
        out.error = ErrorBudget::big_o(-rem.err_npow - 1, rem.err_logpow);
    Real scale0(0L);
    for (const auto& t : rem.terms) scale0 = std::max(scale0, abs(t.coeff.real()),
                                                      [](const Real& x, const Real& y) { return x < y; });
    Real tol = (scale0 + Real(1L)).scaled_by_pow10(-prec.digits + 10);

    int guard = 0;
    while (!rem.is_zero() && guard++ < 400) {
        CoeffTerm t = rem.terms.front();
        SingularTerm elem;
        Real lead;
        if (t.logpow <= -2 && t.npow == Rat(-1)) {
            // inverse log scale: basis L^{-m} leads at -m a_1... / (n log^{m+1})
            int m = -t.logpow - 1;
            elem = SingularTerm(Value(1L), Rat(0), -m);
            // leading coefficient of transfer(L^{-m}) at (n^{-1} log^{-(m+1)}): -m
            lead = Real(-m);
        } else if (t.logpow >= 0) {
            Rat alpha = -t.npow - 1;
            bool alpha_nonneg_int = rat_is_int(alpha) && alpha >= 0;
            int k = alpha_nonneg_int ? t.logpow + 1 : t.logpow;
            elem = SingularTerm(Value(1L), alpha, k);
            if (k == 0) {
                lead = binom_asym_row_real(Real(alpha), 1)[0];
            } else {
                // leading log^{t.logpow} coefficient of transfer((1-z)^alpha L^k):
                // binom(k, t.logpow) (-1)^{k-t.logpow} F_0^{(k-t.logpow)}(alpha)
                unsigned d = static_cast<unsigned>(k - t.logpow);
                Real F0d = fd_derivative(
                    [](const Real& x) { return binom_asym_row_real(x, 1)[0]; }, Real(alpha), d,
                    prec.digits);
                lead = Real(Rat(binomial_int(static_cast<unsigned>(k),
                                             static_cast<unsigned>(t.logpow)))) *
                       F0d;
                if (d % 2 == 1) lead = -lead;
            }
            if (lead.is_zero()) throw TransferError("reconstruct: non-matchable term");
        } else {
            throw TransferError("reconstruct: term outside the transferable scale");
        }
        Value q = t.coeff / Value(lead);
        SingularExpansion piece;
        piece.rho = out.rho;
        piece.terms.push_back(SingularTerm(q, elem.alpha, elem.logpow));
        out.terms.push_back(piece.terms[0]);

        // subtract this element's transfer deep enough to cover the remainder
        int span = 3;
        if (!rem.exact) {
            Rat gap = t.npow - rem.err_npow;
            span = 2 + (rat_is_int(gap) ? static_cast<int>(rat_to_long(gap))
                                        : static_cast<int>(gap.get_d()) + 1);
            if (span < 1) span = 1;
        }
        piece.error = ErrorBudget::exact();
        CoeffAsymptotics sub = transfer(piece, span, prec);
        sub.exp_factor = rem.exp_factor;
        rem = coeff_add(rem, coeff_scale(sub, Value(-1L)));
        // threshold tiny residuals
        CoeffAsymptotics cleaned;
        cleaned.exact = rem.exact;
        cleaned.err_npow = rem.err_npow;
        cleaned.err_logpow = rem.err_logpow;
        cleaned.exp_factor = rem.exp_factor;
        for (const auto& rt : rem.terms)
            if (abs(rt.coeff.real()) > tol) cleaned.terms.push_back(rt);
        rem = coeff_normalize(cleaned);
    }
    if (guard >= 400) throw TransferError("reconstruct: did not terminate");
    return normalize(out);
}

// ------------------------------------------------- Stirling series helper

// n! e^n / (n^n sqrt(2 pi n)) = exp(sum B_{2k}/(2k(2k-1)) n^{1-2k}) as a
// descending coefficient expansion: 1 + 1/(12 n) + 1/(288 n^2) - ...
inline CoeffAsymptotics stirling_factorial_correction(int depth) {
    TSeries s(static_cast<std::size_t>(depth));
    for (unsigned k = 1; 2 * k - 1 < static_cast<unsigned>(depth); ++k)
        s[2 * k - 1] = Value(bernoulli(2 * k) / (Rat(2L * k) * Rat(2L * k - 1)));
    TSeries e = s.exp_of();
    CoeffAsymptotics out;
    for (int j = 0; j < depth; ++j)
        if (!e[static_cast<std::size_t>(j)].is_zero())
            out.terms.emplace_back(e[static_cast<std::size_t>(j)], Rat(-j), 0);
    out.exact = false;
    out.err_npow = Rat(-depth);
    out.err_logpow = 0;
    return coeff_normalize(out);
}

}  // namespace asymp

#endif  // ASYMP_TRANSFER_HPP
