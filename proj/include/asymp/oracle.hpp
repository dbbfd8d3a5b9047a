#ifndef ASYMP_ORACLE_HPP
#define ASYMP_ORACLE_HPP

// Ground truth at desk scale: exact evaluation of the three tree recurrences,
// the joint moment recurrences, and the random-walk first-return sequence.
// Exact mode runs in rational arithmetic; Float mode runs on raw mpfr arrays
// at the caller's precision (callers double the target digits; an O(N^2)
// recurrence accumulates at most ~N^2 ulp of relative error).

#include "series.hpp"

#include <functional>

namespace asymp {

enum class OracleMode { Exact, Float };

struct TollSpec {
    enum class Kind { Power, Log };
    Kind kind = Kind::Power;
    Rat alpha = Rat(1);

    static TollSpec power(const Rat& a) {
        if (!(a > 0)) throw std::invalid_argument("TollSpec: power toll needs alpha > 0");
        TollSpec t;
        t.kind = Kind::Power;
        t.alpha = a;
        return t;
    }
    static TollSpec log_toll() {
        TollSpec t;
        t.kind = Kind::Log;
        return t;
    }

    bool is_log() const { return kind == Kind::Log; }
    bool exact_rational() const { return kind == Kind::Power && rat_is_int(alpha); }

    std::string to_string() const {
        return is_log() ? "log" : "power:" + rat_to_string(alpha);
    }

    // t_n at the active precision; t_0 = 0
    Value at(long n) const {
        if (n <= 0) return Value(0L);
        if (kind == Kind::Log) return n == 1 ? Value(0L) : Value(log(Real(n)));
        if (rat_is_int(alpha)) {
            Int v;
            mpz_pow_ui(v.get_mpz_t(), Int(n).get_mpz_t(),
                       static_cast<unsigned long>(rat_to_long(alpha)));
            return Value(Rat(v));
        }
        return Value(pow(Real(n), Real(alpha)));
    }
};

using TollFn = std::function<Value(long)>;

inline TollFn toll_fn(const TollSpec& t) {
    return [t](long n) { return t.at(n); };
}

// ----------------------------------------------------------------- helpers

namespace detail {

class MpfrVec {
  public:
    MpfrVec(std::size_t n, mpfr_prec_t prec) : v_(n) {
        for (auto& x : v_) { mpfr_init2(x, prec); mpfr_set_zero(x, 1); }
    }
    ~MpfrVec() {
        for (auto& x : v_) mpfr_clear(x);
    }
    MpfrVec(const MpfrVec&) = delete;
    MpfrVec& operator=(const MpfrVec&) = delete;
    mpfr_ptr operator[](std::size_t i) { return v_[i]; }

  private:
    std::vector<mpfr_t> v_;
};

}  // namespace detail

// ---------------------------------------------------------------- BST

// f_n = t_n + (2/n) sum_{k<n} f_k,  f_0 = t_0 = 0
inline SeriesProvider exact_bst(const TollFn& toll, std::size_t N, OracleMode mode) {
    std::vector<Value> f(N + 1, Value(0L));
    if (mode == OracleMode::Exact) {
        Value S(0L);
        for (std::size_t n = 1; n <= N; ++n) {
            S += f[n - 1];
            f[n] = toll(static_cast<long>(n)) + Value(Rat(2, static_cast<long>(n))) * S;
        }
        return SeriesProvider(std::move(f));
    }
    // float: same O(N) loop in Real
    Real S(0L);
    std::vector<Value> out(N + 1, Value(0L));
    Real prev(0L);
    for (std::size_t n = 1; n <= N; ++n) {
        S += prev;
        Real fn = toll(static_cast<long>(n)).real() + Real(2L) * S / Real(static_cast<long>(n));
        out[n] = Value(fn);
        prev = fn;
    }
    return SeriesProvider(std::move(out));
}

// -------------------------------------------------------------- Catalan

// f_n = t_n + sum_{k=0}^{n-1} (C_k C_{n-1-k}/C_n)(f_k + f_{n-1-k}); the
// scaled sequence g_n = C_n f_n obeys g_n = C_n t_n + 2 sum C_{n-1-k} g_k.
inline SeriesProvider exact_catalan(const TollFn& toll, std::size_t N, OracleMode mode) {
    const auto& C = catalan_numbers(N);
    if (mode == OracleMode::Exact) {
        std::vector<Value> g(N + 1, Value(0L)), f(N + 1, Value(0L));
        for (std::size_t n = 1; n <= N; ++n) {
            Value acc = toll(static_cast<long>(n)) * Value(Rat(C[n]));
            Value conv(0L);
            for (std::size_t k = 0; k < n; ++k) conv += Value(Rat(C[n - 1 - k])) * g[k];
            acc += Value(2L) * conv;
            g[n] = acc;
            f[n] = g[n] / Value(Rat(C[n]));
        }
        return SeriesProvider(std::move(f));
    }
    mpfr_prec_t prec = Real::active_bits();
    detail::MpfrVec g(N + 1, prec), Cf(N + 1, prec);
    for (std::size_t n = 0; n <= N; ++n) mpfr_set_z(Cf[n], C[n].get_mpz_t(), MPFR_RNDN);
    std::vector<Value> f(N + 1, Value(0L));
    mpfr_t acc, tmp;
    mpfr_init2(acc, prec);
    mpfr_init2(tmp, prec);
    for (std::size_t n = 1; n <= N; ++n) {
        Real tn = toll(static_cast<long>(n)).real();
        mpfr_mul(acc, tn.raw(), Cf[n], MPFR_RNDN);
        mpfr_set_zero(tmp, 1);
        for (std::size_t k = 1; k < n; ++k)  // g_0 = 0
            mpfr_fma(tmp, Cf[n - 1 - k], g[k], tmp, MPFR_RNDN);
        mpfr_mul_ui(tmp, tmp, 2, MPFR_RNDN);
        mpfr_add(acc, acc, tmp, MPFR_RNDN);
        mpfr_set(g[n], acc, MPFR_RNDN);
        Real fn;
        mpfr_div(fn.raw(), acc, Cf[n], MPFR_RNDN);
        f[n] = Value(fn);
    }
    mpfr_clear(acc);
    mpfr_clear(tmp);
    return SeriesProvider(std::move(f));
}

// Catalan splitting probabilities p_{n,k} = C_k C_{n-1-k} / C_n, exact
inline std::vector<Rat> catalan_split_probs(std::size_t n) {
    const auto& C = catalan_numbers(n);
    std::vector<Rat> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = Rat(C[k] * C[n - 1 - k]) / Rat(C[n]);
    return p;
}

// ------------------------------------------------------------ union-find

// p_{n,k} = binom(n,k) k^{k-1} (n-k)^{n-k-1} / (2(n-1) n^{n-2}), n >= 2
inline std::vector<Rat> unionfind_split_probs(std::size_t n) {
    if (n < 2) throw std::invalid_argument("unionfind_split_probs: n >= 2");
    std::vector<Rat> p(n);  // k = 1..n-1 meaningful
    Int D = Int(2) * Int(static_cast<long>(n) - 1);
    Int npow;
    mpz_pow_ui(npow.get_mpz_t(), Int(static_cast<long>(n)).get_mpz_t(),
               static_cast<unsigned long>(n - 2));
    D *= npow;
    for (std::size_t k = 1; k < n; ++k) {
        Int a, b;
        mpz_pow_ui(a.get_mpz_t(), Int(static_cast<long>(k)).get_mpz_t(),
                   static_cast<unsigned long>(k - 1));
        mpz_pow_ui(b.get_mpz_t(), Int(static_cast<long>(n - k)).get_mpz_t(),
                   static_cast<unsigned long>(n - k - 1));
        p[k] = Rat(binomial_int(static_cast<unsigned>(n), static_cast<unsigned>(k)) * a * b) /
               Rat(D);
    }
    return p;
}

// f_1 = t_1; f_n = t_n + sum_{k=1}^{n-1} p_{n,k} (f_k + f_{n-k})
inline SeriesProvider exact_unionfind(const TollFn& toll, std::size_t N, OracleMode mode) {
    std::vector<Value> f(N + 1, Value(0L));
    if (N >= 1) f[1] = toll(1);
    if (mode == OracleMode::Exact) {
        for (std::size_t n = 2; n <= N; ++n) {
            auto p = unionfind_split_probs(n);
            Value acc = toll(static_cast<long>(n));
            for (std::size_t k = 1; k < n; ++k) acc += Value(p[k] * 2) * f[k];
            f[n] = acc;
        }
        return SeriesProvider(std::move(f));
    }
    mpfr_prec_t prec = Real::active_bits();
    // a_k = k^{k-1}
    detail::MpfrVec a(N + 1, prec), fv(N + 1, prec);
    for (std::size_t k = 1; k <= N; ++k) {
        Real kk(static_cast<long>(k));
        Real v = pow(kk, static_cast<long>(k) - 1);
        mpfr_set(a[k], v.raw(), MPFR_RNDN);
    }
    if (N >= 1) {
        Real t1 = f[1].real();
        mpfr_set(fv[1], t1.raw(), MPFR_RNDN);
    }
    mpfr_t b, acc, tmp, D;
    mpfr_init2(b, prec);
    mpfr_init2(acc, prec);
    mpfr_init2(tmp, prec);
    mpfr_init2(D, prec);
    for (std::size_t n = 2; n <= N; ++n) {
        // D = (n-1) n^{n-2} = (n-1) a_n / n ; sum 2 p f = (1/D) sum binom a_k a_{n-k} f_k
        mpfr_mul_ui(D, a[n], static_cast<unsigned long>(n - 1), MPFR_RNDN);
        mpfr_div_ui(D, D, static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_set_zero(acc, 1);
        mpfr_set_ui(b, static_cast<unsigned long>(n), MPFR_RNDN);  // binom(n,1)
        for (std::size_t k = 1; k < n; ++k) {
            mpfr_mul(tmp, b, a[k], MPFR_RNDN);
            mpfr_mul(tmp, tmp, a[n - k], MPFR_RNDN);
            mpfr_fma(acc, tmp, fv[k], acc, MPFR_RNDN);
            // binom(n,k+1) = binom(n,k) (n-k)/(k+1)
            mpfr_mul_ui(b, b, static_cast<unsigned long>(n - k), MPFR_RNDN);
            mpfr_div_ui(b, b, static_cast<unsigned long>(k + 1), MPFR_RNDN);
        }
        mpfr_div(acc, acc, D, MPFR_RNDN);
        Real tn = toll(static_cast<long>(n)).real();
        mpfr_add(acc, acc, tn.raw(), MPFR_RNDN);
        mpfr_set(fv[n], acc, MPFR_RNDN);
        Real out;
        mpfr_set(out.raw(), acc, MPFR_RNDN);
        f[n] = Value(out);
    }
    mpfr_clear(b);
    mpfr_clear(acc);
    mpfr_clear(tmp);
    mpfr_clear(D);
    return SeriesProvider(std::move(f));
}

// ---------------------------------------------------------------- moments

enum class ModelKind { BST, Catalan, UnionFind };

inline std::string model_name(ModelKind m) {
    switch (m) {
        case ModelKind::BST: return "bst";
        case ModelKind::Catalan: return "catalan";
        default: return "unionfind";
    }
}

// mu^{(j)} for j = 0..s jointly; mu^{(1)} coincides with the mean oracle.
// Split: BST/Catalan subtrees (k, n-1-k) with k = 0..n-1; union-find
// subtrees (k, n-k) with k = 1..n-1 and f_1 = t_1.
inline std::vector<SeriesProvider> exact_moments(ModelKind model, const TollFn& toll, unsigned s,
                                                 std::size_t N, OracleMode mode) {
    if (s > 3) throw UnsupportedError("exact_moments: s <= 3");
    std::vector<std::vector<Value>> mu(s + 1, std::vector<Value>(N + 1, Value(0L)));
    for (std::size_t n = 0; n <= N; ++n) mu[0][n] = Value(1L);

    auto weights = [&](std::size_t n) -> std::vector<Value> {
        std::vector<Value> w(n + 1, Value(0L));
        switch (model) {
            case ModelKind::BST:
                for (std::size_t k = 0; k < n; ++k) w[k] = Value(Rat(1, static_cast<long>(n)));
                break;
            case ModelKind::Catalan: {
                auto p = catalan_split_probs(n);
                for (std::size_t k = 0; k < n; ++k)
                    w[k] = (mode == OracleMode::Exact) ? Value(p[k]) : Value(Real(p[k]));
                break;
            }
            case ModelKind::UnionFind: {
                if (n < 2) break;
                auto p = unionfind_split_probs(n);
                for (std::size_t k = 1; k < n; ++k)
                    w[k] = (mode == OracleMode::Exact) ? Value(p[k]) : Value(Real(p[k]));
                break;
            }
        }
        return w;
    };
    auto complement = [&](std::size_t n, std::size_t k) {
        return model == ModelKind::UnionFind ? n - k : n - 1 - k;
    };
    std::size_t n_start = model == ModelKind::UnionFind ? 2 : 1;
    if (model == ModelKind::UnionFind && N >= 1)
        for (unsigned j = 1; j <= s; ++j) {
            Value t1 = toll(1);
            Value v(1L);
            for (unsigned q = 0; q < j; ++q) v = v * t1;
            mu[j][1] = v;
        }

    for (std::size_t n = n_start; n <= N; ++n) {
        auto w = weights(n);
        Value tn = toll(static_cast<long>(n));
        for (unsigned j = 1; j <= s; ++j) {
            // r_n^{(j)} = sum over (j1,j2,j3), j2 != j, j3 != j
            Value r(0L);
            for (unsigned j1 = 0; j1 <= j; ++j1)
                for (unsigned j2 = 0; j1 + j2 <= j; ++j2) {
                    unsigned j3 = j - j1 - j2;
                    if (j2 == j || j3 == j) continue;
                    // multinomial j!/(j1! j2! j3!)
                    Rat mult(factorial_int(j));
                    mult /= Rat(factorial_int(j1) * factorial_int(j2) * factorial_int(j3));
                    Value tpow(1L);
                    for (unsigned q = 0; q < j1; ++q) tpow = tpow * tn;
                    Value conv(0L);
                    for (std::size_t k = 0; k < n; ++k) {
                        if (w[k].is_zero()) continue;
                        conv += w[k] * mu[j2][k] * mu[j3][complement(n, k)];
                    }
                    r += Value(mult) * tpow * conv;
                }
            Value self(0L);
            for (std::size_t k = 0; k < n; ++k) {
                if (w[k].is_zero()) continue;
                self += w[k] * (mu[j][k] + mu[j][complement(n, k)]);
            }
            mu[j][n] = self + r;
        }
    }
    std::vector<SeriesProvider> out;
    for (unsigned j = 0; j <= s; ++j) out.emplace_back(std::move(mu[j]));
    return out;
}

// -------------------------------------------------------------- Polya walk

// q_n^{(d)} = (binom(2n,n)/4^n)^d; p from (1 - sum p z^n)^{-1} = sum q z^n,
// i.e. p_n = q_n - sum_{k=1}^{n-1} p_k q_{n-k}
inline SeriesProvider polya_first_return(unsigned d, std::size_t N, OracleMode mode) {
    if (d < 1 || d > 4) throw UnsupportedError("polya_first_return: d in 1..4");
    if (mode == OracleMode::Exact) {
        auto c = central_binomial_over4n(N);
        std::vector<Value> q(N + 1), p(N + 1, Value(0L));
        for (std::size_t n = 0; n <= N; ++n) {
            Value v(1L);
            for (unsigned i = 0; i < d; ++i) v = v * c.coeff(n);
            q[n] = v;
        }
        for (std::size_t n = 1; n <= N; ++n) {
            Value acc = q[n];
            for (std::size_t k = 1; k < n; ++k) acc -= p[k] * q[n - k];
            p[n] = acc;
        }
        return SeriesProvider(std::move(p));
    }
    mpfr_prec_t prec = Real::active_bits();
    detail::MpfrVec q(N + 1, prec), p(N + 1, prec);
    mpfr_t r, tmp, acc;
    mpfr_init2(r, prec);
    mpfr_init2(tmp, prec);
    mpfr_init2(acc, prec);
    mpfr_set_ui(r, 1, MPFR_RNDN);
    mpfr_set_ui(q[0], 1, MPFR_RNDN);
    for (std::size_t n = 1; n <= N; ++n) {
        mpfr_mul_ui(r, r, static_cast<unsigned long>(2 * n - 1), MPFR_RNDN);
        mpfr_div_ui(r, r, static_cast<unsigned long>(2 * n), MPFR_RNDN);
        mpfr_set(q[n], r, MPFR_RNDN);
        for (unsigned i = 1; i < d; ++i) mpfr_mul(q[n], q[n], r, MPFR_RNDN);
    }
    std::vector<Value> out(N + 1, Value(0L));
    for (std::size_t n = 1; n <= N; ++n) {
        mpfr_set(acc, q[n], MPFR_RNDN);
        for (std::size_t k = 1; k < n; ++k) {
            mpfr_mul(tmp, p[k], q[n - k], MPFR_RNDN);
            mpfr_sub(acc, acc, tmp, MPFR_RNDN);
        }
        mpfr_set(p[n], acc, MPFR_RNDN);
        Real v;
        mpfr_set(v.raw(), acc, MPFR_RNDN);
        out[n] = Value(v);
    }
    mpfr_clear(r);
    mpfr_clear(tmp);
    mpfr_clear(acc);
    return SeriesProvider(std::move(out));
}

}  // namespace asymp

#endif  // ASYMP_ORACLE_HPP
