#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <string>
#include <utility>

#include "bilattice/errors.hpp"

namespace bilattice {

/// Exact rational number (GMP mpq_t, RAII).
///
/// Family parameters enter the library as exact rationals and are converted
/// to working precision exactly once per context, so a run at 60 digits and
/// its doubling run at 120 digits start from the same mathematical input.
class Rational {
  public:
    Rational() { mpq_init(q_); }
    Rational(long num, long den = 1) {
        mpq_init(q_);
        if (den == 0) throw ValidityError("rational with zero denominator");
        mpq_set_si(q_, num, 1);
        mpq_t d;
        mpq_init(d);
        mpq_set_si(d, den, 1);
        mpq_div(q_, q_, d);
        mpq_clear(d);
        mpq_canonicalize(q_);
    }
    Rational(const Rational& o) {
        mpq_init(q_);
        mpq_set(q_, o.q_);
    }
    Rational(Rational&& o) noexcept {
        mpq_init(q_);
        mpq_swap(q_, o.q_);
    }
    Rational& operator=(const Rational& o) {
        if (this != &o) mpq_set(q_, o.q_);
        return *this;
    }
    Rational& operator=(Rational&& o) noexcept {
        if (this != &o) mpq_swap(q_, o.q_);
        return *this;
    }
    ~Rational() { mpq_clear(q_); }

    /// Parses "3", "-7", "1/3", "0.25", "2.5e-3".  Decimal strings convert
    /// exactly (digits over a power of ten), never through binary floats.
    static Rational parse(const std::string& text);

    std::string to_string() const {
        char* s = mpq_get_str(nullptr, 10, q_);
        std::string out(s);
        void (*freefunc)(void*, size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefunc);
        freefunc(s, std::strlen(s) + 1);
        return out;
    }

    bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }
    int sign() const { return mpq_sgn(q_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        Rational r;
        mpq_add(r.q_, a.q_, b.q_);
        return r;
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        Rational r;
        mpq_sub(r.q_, a.q_, b.q_);
        return r;
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        Rational r;
        mpq_mul(r.q_, a.q_, b.q_);
        return r;
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (mpq_sgn(b.q_) == 0) throw ValidityError("rational division by zero");
        Rational r;
        mpq_div(r.q_, a.q_, b.q_);
        return r;
    }
    friend Rational operator-(const Rational& a) {
        Rational r;
        mpq_neg(r.q_, a.q_);
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_) != 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) < 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) > 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) <= 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) >= 0; }

    bool operator==(long v) const { return mpq_cmp_si(q_, v, 1) == 0; }
    bool operator!=(long v) const { return !(*this == v); }
    bool operator<(long v) const { return mpq_cmp_si(q_, v, 1) < 0; }
    bool operator>(long v) const { return mpq_cmp_si(q_, v, 1) > 0; }
    bool operator<=(long v) const { return mpq_cmp_si(q_, v, 1) <= 0; }
    bool operator>=(long v) const { return mpq_cmp_si(q_, v, 1) >= 0; }

    mpq_srcptr raw() const { return q_; }

  private:
    mpq_t q_;
};

inline Rational Rational::parse(const std::string& text) {
    std::string s = text;
    // strip whitespace
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; }), s.end());
    if (s.empty()) throw ValidityError("empty rational literal");

    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos && s.find('/') == std::string::npos) {
        try {
            exp10 = std::stol(s.substr(epos + 1));
        } catch (const std::exception&) {
            throw ValidityError("bad exponent in rational literal: " + text);
        }
        s = s.substr(0, epos);
    }

    Rational r;
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        long frac_len = static_cast<long>(s.size() - dot - 1);
        if (digits.empty() || digits == "-" || digits == "+") throw ValidityError("bad rational literal: " + text);
        if (mpq_set_str(r.q_, digits.c_str(), 10) != 0)
            throw ValidityError("bad rational literal: " + text);
        exp10 -= frac_len;
    } else {
        if (mpq_set_str(r.q_, s.c_str(), 10) != 0 || mpz_cmp_ui(mpq_denref(r.q_), 0) == 0)
            throw ValidityError("bad rational literal: " + text);
    }
    mpq_canonicalize(r.q_);
    if (exp10 != 0) {
        mpq_t p;
        mpq_init(p);
        mpz_ui_pow_ui(mpq_numref(p), 10, static_cast<unsigned long>(exp10 > 0 ? exp10 : -exp10));
        mpz_set_ui(mpq_denref(p), 1);
        if (exp10 > 0)
            mpq_mul(r.q_, r.q_, p);
        else
            mpq_div(r.q_, r.q_, p);
        mpq_clear(p);
    }
    return r;
}

/// Arbitrary-precision real value.  Each value carries the precision it was
/// created with; binary operations round correctly (MPFR, round-to-nearest)
/// at the larger of the two operand precisions.  Exact zero is representable
/// and comparisons act on stored values.
class Real {
  public:
    Real() : Real(kMinPrec) {}
    explicit Real(mpfr_prec_t prec) {
        mpfr_init2(v_, std::max<mpfr_prec_t>(prec, kMinPrec));
        mpfr_set_nan(v_);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, kMinPrec);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real zero(mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_zero(r.v_, 1);
        return r;
    }
    static Real from_long(long v, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_si(r.v_, v, MPFR_RNDN);
        return r;
    }
    static Real from_rational(const Rational& q, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_q(r.v_, q.raw(), MPFR_RNDN);
        return r;
    }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_integer() const { return mpfr_integer_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    /// Integer value; caller must have checked is_integer() and range.
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Decimal string with `sig` significant digits, scientific form.
    /// Deterministic for identical inputs.
    std::string to_string(long sig = 20) const {
        if (sig < 2) sig = 2;
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Re", static_cast<int>(sig - 1), v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
    friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
    friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
    friend Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }

    friend Real operator+(const Real& a, long b) { return binary_si(a, b, mpfr_add_si); }
    friend Real operator-(const Real& a, long b) { return binary_si(a, b, mpfr_sub_si); }
    friend Real operator*(const Real& a, long b) { return binary_si(a, b, mpfr_mul_si); }
    friend Real operator/(const Real& a, long b) { return binary_si(a, b, mpfr_div_si); }
    friend Real operator+(long a, const Real& b) { return b + a; }
    friend Real operator*(long a, const Real& b) { return b * a; }
    friend Real operator-(long a, const Real& b) {
        Real r(b.precision());
        mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(long a, const Real& b) {
        Real r(b.precision());
        mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a) {
        Real r(a.precision());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    Real& operator+=(const Real& o) {
        grow_to(o.precision());
        mpfr_add(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator-=(const Real& o) {
        grow_to(o.precision());
        mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator*=(const Real& o) {
        grow_to(o.precision());
        mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator/=(const Real& o) {
        grow_to(o.precision());
        mpfr_div(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    Real& operator+=(long v) {
        mpfr_add_si(v_, v_, v, MPFR_RNDN);
        return *this;
    }
    Real& operator-=(long v) {
        mpfr_sub_si(v_, v_, v, MPFR_RNDN);
        return *this;
    }
    Real& operator*=(long v) {
        mpfr_mul_si(v_, v_, v, MPFR_RNDN);
        return *this;
    }
    Real& operator/=(long v) {
        mpfr_div_si(v_, v_, v, MPFR_RNDN);
        return *this;
    }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) == 0; }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

    friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
    friend bool operator!=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) != 0; }
    friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }

    friend Real sqrt(const Real& a) { return unary(a, mpfr_sqrt); }
    friend Real exp(const Real& a) { return unary(a, mpfr_exp); }
    friend Real log(const Real& a) { return unary(a, mpfr_log); }
    friend Real abs(const Real& a) { return unary(a, mpfr_abs); }
    friend Real floor(const Real& a) {
        Real r(a.precision());
        mpfr_floor(r.v_, a.v_);
        return r;
    }
    friend Real pow(const Real& a, const Real& b) { return binary(a, b, mpfr_pow); }
    friend Real pow(const Real& a, unsigned long b) {
        Real r(a.precision());
        mpfr_pow_ui(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
    friend Real min(const Real& a, const Real& b) { return a <= b ? a : b; }

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

    static constexpr mpfr_prec_t kMinPrec = 24;

  private:
    void grow_to(mpfr_prec_t p) {
        if (p > precision()) {
            Real tmp(p);
            mpfr_set(tmp.v_, v_, MPFR_RNDN);
            mpfr_swap(v_, tmp.v_);
        }
    }
    template <typename F>
    static Real binary(const Real& a, const Real& b, F fn) {
        Real r(std::max(a.precision(), b.precision()));
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    template <typename F>
    static Real binary_si(const Real& a, long b, F fn) {
        Real r(a.precision());
        fn(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    template <typename F>
    static Real unary(const Real& a, F fn) {
        Real r(a.precision());
        fn(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

/// Working-precision contract shared by every evaluation: decimal digits,
/// relative tolerance for certified series tails, and a hard term budget so
/// that no series can silently truncate.
class PrecisionContext {
  public:
    explicit PrecisionContext(long digits, long max_terms = 500000)
        : digits_(digits), max_terms_(max_terms), prec_(bits_for(digits)), tail_eps_(prec_) {
        if (digits < 30) throw ValidityError("working precision below 30 digits");
        if (max_terms < 1) throw ValidityError("max_terms must be positive");
        // default tail tolerance: two digits below working precision
        mpfr_set_si(tail_eps_.raw(), 10, MPFR_RNDN);
        mpfr_pow_si(tail_eps_.raw(), tail_eps_.raw(), -(digits + 2), MPFR_RNDN);
    }
    PrecisionContext(long digits, const Rational& tail_eps, long max_terms = 500000)
        : PrecisionContext(digits, max_terms) {
        Real e = Real::from_rational(tail_eps, prec_);
        if (!(e > 0) || !(e < 1)) throw ValidityError("tail_eps must lie in (0,1)");
        tail_eps_ = e;
    }

    long digits() const { return digits_; }
    long max_terms() const { return max_terms_; }
    mpfr_prec_t prec() const { return prec_; }
    const Real& tail_eps() const { return tail_eps_; }

    Real real(long v) const { return Real::from_long(v, prec_); }
    Real real(const Rational& q) const { return Real::from_rational(q, prec_); }
    Real zero() const { return Real::zero(prec_); }
    Real pi() const {
        Real r(prec_);
        mpfr_const_pi(r.raw(), MPFR_RNDN);
        return r;
    }
    /// 10^e at working precision.
    Real pow10(long e) const {
        Real r(prec_);
        mpfr_set_si(r.raw(), 10, MPFR_RNDN);
        mpfr_pow_si(r.raw(), r.raw(), e, MPFR_RNDN);
        return r;
    }

    static mpfr_prec_t bits_for(long digits) {
        // ceil(digits * log2(10)) plus guard bits
        return static_cast<mpfr_prec_t>((digits * 3321928095LL) / 1000000000LL) + 34;
    }

  private:
    long digits_;
    long max_terms_;
    mpfr_prec_t prec_;
    Real tail_eps_;
};

}  // namespace bilattice
