#ifndef ASYMP_REAL_HPP
#define ASYMP_REAL_HPP

// Arbitrary-precision scalar types used throughout the library.
//
// Real is a value-semantic wrapper over mpfr_t. Every arithmetic result is
// rounded to the thread-local *active* precision, which is set with a
// PrecisionScope guard; precision therefore travels as an argument down the
// call stack rather than living in mutable global state of the library
// objects themselves.
//
// Value is a coefficient type that stays an exact rational as long as the
// math is exact and silently promotes to Real once an inexact quantity
// enters. Expansion algebra on rational data (the common case in the tree
// models) thus round-trips exactly.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace asymp {

using Rat = mpq_class;
using Int = mpz_class;

struct Precision {
    int digits = 50;  // decimal significant digits, >= 16

    explicit Precision(int d = 50) : digits(d) {
        if (d < 16) throw std::invalid_argument("Precision: digits must be >= 16");
    }
    // mpfr working precision in bits, with guard digits
    long bits() const { return static_cast<long>((digits + 10) * 3.3219280948873623) + 16; }
};

namespace detail {
inline thread_local long g_active_bits = Precision(50).bits();
}

class Real {
  public:
    Real() { mpfr_init2(v_, detail::g_active_bits); mpfr_set_zero(v_, 1); }
    explicit Real(long n) { mpfr_init2(v_, detail::g_active_bits); mpfr_set_si(v_, n, MPFR_RNDN); }
    explicit Real(unsigned long n) { mpfr_init2(v_, detail::g_active_bits); mpfr_set_ui(v_, n, MPFR_RNDN); }
    explicit Real(int n) : Real(static_cast<long>(n)) {}
    explicit Real(double d) { mpfr_init2(v_, detail::g_active_bits); mpfr_set_d(v_, d, MPFR_RNDN); }
    explicit Real(const Rat& q) { mpfr_init2(v_, detail::g_active_bits); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
    explicit Real(const Int& z) { mpfr_init2(v_, detail::g_active_bits); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    // raw access for hot loops
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    static long active_bits() { return detail::g_active_bits; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    Real operator-() const { Real r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend Real operator+(const Real& a, long b) { Real r; mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, long b) { Real r; mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, long b) { Real r; mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, long b) { Real r; mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real operator-(long a, const Real& b) { Real r; mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN); return r; }
    friend Real operator/(long a, const Real& b) { Real r; mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN); return r; }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

    friend Real abs(const Real& a) { Real r; mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real sqrt(const Real& a) { Real r; mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real exp(const Real& a) { Real r; mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real log(const Real& a) { Real r; mpfr_log(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real log1p(const Real& a) { Real r; mpfr_log1p(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real sin(const Real& a) { Real r; mpfr_sin(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real cos(const Real& a) { Real r; mpfr_cos(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real pow(const Real& a, const Real& b) { Real r; mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real pow(const Real& a, long b) { Real r; mpfr_pow_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
    friend Real cosh(const Real& a) { Real r; mpfr_cosh(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real sinh(const Real& a) { Real r; mpfr_sinh(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real tanh(const Real& a) { Real r; mpfr_tanh(r.v_, a.v_, MPFR_RNDN); return r; }

    static Real pi() { Real r; mpfr_const_pi(r.v_, MPFR_RNDN); return r; }
    static Real euler_e() { Real r; mpfr_set_ui(r.v_, 1, MPFR_RNDN); mpfr_exp(r.v_, r.v_, MPFR_RNDN); return r; }

    // scale by 10^k without going through a rounded power
    Real scaled_by_pow10(long k) const {
        Real t(10L);
        Real p = pow(t, k < 0 ? -k : k);
        Real r;
        if (k < 0) mpfr_div(r.v_, v_, p.v_, MPFR_RNDN);
        else mpfr_mul(r.v_, v_, p.v_, MPFR_RNDN);
        return r;
    }

    // Canonical decimal string, scientific form "d.ddd...e<exp>" with the
    // requested number of significant digits.
    std::string to_decimal(int digits) const;

    static Real parse(const std::string& s) {
        Real r;
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw std::invalid_argument("Real::parse: bad numeric literal '" + s + "'");
        return r;
    }

  private:
    mpfr_t v_;
};

inline std::string Real::to_decimal(int digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
    std::string m(s);
    mpfr_free_str(s);
    bool neg = m[0] == '-';
    std::string digs = neg ? m.substr(1) : m;
    // mpfr exponent convention: value = 0.digs * 10^e
    std::string out = (neg ? "-" : "");
    out += digs.substr(0, 1);
    if (digs.size() > 1) out += "." + digs.substr(1);
    out += "e" + std::to_string(static_cast<long>(e - 1));
    return out;
}

// RAII guard: computations inside the scope round to `p` (plus guard bits).
class PrecisionScope {
  public:
    explicit PrecisionScope(Precision p) : old_(detail::g_active_bits) { detail::g_active_bits = p.bits(); }
    explicit PrecisionScope(long bits) : old_(detail::g_active_bits) { detail::g_active_bits = bits; }
    ~PrecisionScope() { detail::g_active_bits = old_; }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

  private:
    long old_;
};

// Exact-rational-or-real coefficient. Arithmetic keeps exactness whenever
// both operands are rational.
class Value {
  public:
    Value() : exact_(true), q_(0) {}
    Value(long n) : exact_(true), q_(n) {}
    Value(const Rat& q) : exact_(true), q_(q) { q_.canonicalize(); }
    Value(Rat&& q) : exact_(true), q_(std::move(q)) { q_.canonicalize(); }
    Value(const Real& r) : exact_(false), r_(r) {}
    Value(Real&& r) : exact_(false), r_(std::move(r)) {}

    bool exact() const { return exact_; }
    const Rat& rat() const {
        if (!exact_) throw std::logic_error("Value: not exact");
        return q_;
    }
    Real real() const { return exact_ ? Real(q_) : r_; }

    bool is_zero() const { return exact_ ? q_ == 0 : r_.is_zero(); }
    int sign() const { return exact_ ? sgn(q_) : r_.sign(); }
    double to_double() const { return exact_ ? q_.get_d() : r_.to_double(); }

    friend Value operator+(const Value& a, const Value& b) {
        if (a.exact_ && b.exact_) return Value(Rat(a.q_ + b.q_));
        return Value(a.real() + b.real());
    }
    friend Value operator-(const Value& a, const Value& b) {
        if (a.exact_ && b.exact_) return Value(Rat(a.q_ - b.q_));
        return Value(a.real() - b.real());
    }
    friend Value operator*(const Value& a, const Value& b) {
        if (a.exact_ && b.exact_) return Value(Rat(a.q_ * b.q_));
        return Value(a.real() * b.real());
    }
    friend Value operator/(const Value& a, const Value& b) {
        if (a.exact_ && b.exact_) {
            if (b.q_ == 0) throw std::domain_error("Value: division by zero");
            return Value(Rat(a.q_ / b.q_));
        }
        return Value(a.real() / b.real());
    }
    Value operator-() const { return exact_ ? Value(Rat(-q_)) : Value(-r_); }

    Value& operator+=(const Value& o) { *this = *this + o; return *this; }
    Value& operator-=(const Value& o) { *this = *this - o; return *this; }
    Value& operator*=(const Value& o) { *this = *this * o; return *this; }

    friend bool operator==(const Value& a, const Value& b) {
        if (a.exact_ && b.exact_) return a.q_ == b.q_;
        return a.real() == b.real();
    }

    std::string to_decimal(int digits) const {
        if (exact_) {
            PrecisionScope ps{Precision(digits + 10 > 16 ? digits + 10 : 16)};
            return Real(q_).to_decimal(digits);
        }
        return r_.to_decimal(digits);
    }

  private:
    bool exact_;
    Rat q_;
    Real r_;
};

inline Real abs_real(const Value& v) { return abs(v.real()); }

// parse "p/q", integer, or decimal ("0.25", "1e-3") into an exact rational
inline Rat parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    if (s.find('/') != std::string::npos) {
        Rat q(s);
        q.canonicalize();
        return q;
    }
    // decimal / scientific form
    std::string t = s;
    long expo = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
        expo = std::stol(t.substr(epos + 1));
        t = t.substr(0, epos);
    }
    auto dot = t.find('.');
    std::string digitsonly = t;
    if (dot != std::string::npos) {
        digitsonly = t.substr(0, dot) + t.substr(dot + 1);
        expo -= static_cast<long>(t.size() - dot - 1);
    }
    if (digitsonly.empty() || digitsonly == "-" || digitsonly == "+")
        throw std::invalid_argument("parse_rational: bad literal '" + s + "'");
    Rat q(digitsonly);
    Rat ten(10);
    for (long i = 0; i < (expo < 0 ? -expo : expo); ++i) {
        if (expo < 0) q /= ten;
        else q *= ten;
    }
    q.canonicalize();
    return q;
}

inline std::string rat_to_string(const Rat& q) {
    std::string s = q.get_num().get_str();
    if (q.get_den() != 1) s += "/" + q.get_den().get_str();
    return s;
}

inline bool rat_is_int(const Rat& q) { return q.get_den() == 1; }

inline long rat_to_long(const Rat& q) {
    if (!rat_is_int(q)) throw std::logic_error("rat_to_long: not an integer");
    if (!q.get_num().fits_slong_p()) throw std::overflow_error("rat_to_long: overflow");
    return q.get_num().get_si();
}

}  // namespace asymp

#endif  // ASYMP_REAL_HPP
