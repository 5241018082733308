#pragma once

#include "bilattice/real.hpp"

namespace bilattice {

namespace detail {

inline bool is_nonpositive_integer(const Real& x) { return x.is_integer() && x <= 0; }

/// Shared guard-bit policy for series summation: accumulate a little wider
/// than the target so the final rounding, not term accumulation, sets the
/// error at the stated precision.
inline mpfr_prec_t series_prec(const Real& a, const PrecisionContext& ctx) {
    return std::max(a.precision(), ctx.prec()) + 64;
}

}  // namespace detail

/// Gamma function at real x (x not a nonpositive integer).
inline Real gamma(const Real& x, const PrecisionContext& ctx) {
    if (detail::is_nonpositive_integer(x))
        throw PoleError("gamma evaluated at nonpositive integer " + x.to_string(8));
    Real r(std::max(x.precision(), ctx.prec()));
    mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN);
    if (!r.is_finite()) throw PrecisionError("gamma overflowed at working precision");
    return r;
}

/// Rising factorial (x)_k = x(x+1)...(x+k-1), with (x)_0 = 1.
inline Real pochhammer(const Real& x, unsigned long k, const PrecisionContext& ctx) {
    Real r = Real::from_long(1, std::max(x.precision(), ctx.prec()));
    for (unsigned long j = 0; j < k; ++j) r *= x + static_cast<long>(j);
    return r;
}

/// Modified Bessel function of the first kind,
///   I_nu(z) = sum_k (z/2)^{2k+nu} / (k! Gamma(k+nu+1)),
/// summed with a certified geometric tail bound: once all remaining term
/// ratios are positive and below 1/2, the tail is at most twice the first
/// omitted term.  Negative integer orders use I_{-m} = I_m (the terms whose
/// Gamma argument is a nonpositive integer vanish under the reciprocal-gamma
/// convention, shifting the series start).
inline Real bessel_i(const Real& nu_in, const Real& z, const PrecisionContext& ctx) {
    if (z < 0) throw ValidityError("bessel_i requires z >= 0");
    Real nu = nu_in;
    if (nu.is_integer() && nu < 0) nu = -nu;
    if (z.is_zero()) {
        if (nu.is_zero()) return Real::from_long(1, ctx.prec());
        if (nu > 0) return ctx.zero();
        throw PoleError("bessel_i(nu<0, 0) is singular");
    }

    const mpfr_prec_t wp = detail::series_prec(z, ctx);
    Real half_z(wp);
    mpfr_div_si(half_z.raw(), z.raw(), 2, MPFR_RNDN);
    Real q = half_z * half_z;
    Real nu_w(wp);
    mpfr_set(nu_w.raw(), nu.raw(), MPFR_RNDN);

    Real term = pow(half_z, nu_w) / gamma(nu_w + 1, PrecisionContext(ctx.digits() + 20, ctx.max_terms()));
    Real sum = term;
    Real half = Real::from_long(1, wp) / 2;

    for (long k = 0; k < ctx.max_terms(); ++k) {
        Real den = (nu_w + (k + 1)) * (k + 1);
        if (den.is_zero())
            throw PoleError("bessel_i term denominator vanished for order " + nu_in.to_string(8));
        term = term * q / den;
        sum += term;
        // geometric certificate: next ratio q/((k+2)(nu+k+2)) must be in (0, 1/2]
        Real next_den = (nu_w + (k + 2)) * (k + 2);
        if (next_den > 0) {
            Real ratio = q / next_den;
            if (ratio <= half) {
                Real tail_bound = 2 * abs(term) * ratio;
                if (tail_bound <= ctx.tail_eps() * abs(sum)) break;
            }
        }
        if (k + 1 == ctx.max_terms())
            throw PrecisionError("bessel_i series did not meet tail tolerance within term budget");
    }
    Real out(std::max(z.precision(), ctx.prec()));
    mpfr_set(out.raw(), sum.raw(), MPFR_RNDN);
    return out;
}

/// Confluent hypergeometric function M(p, q, z) = sum_k (p)_k/((q)_k k!) z^k.
/// Terminates exactly when p is a nonpositive integer; a nonpositive-integer
/// q reached before termination is a pole.
inline Real kummer_m(const Real& p, const Real& q, const Real& z, const PrecisionContext& ctx) {
    const bool terminating = detail::is_nonpositive_integer(p);
    if (detail::is_nonpositive_integer(q) && (!terminating || q > p))
        throw PoleError("kummer_m with nonpositive-integer second parameter " + q.to_string(8));

    const mpfr_prec_t wp = detail::series_prec(z, ctx);
    Real pw(wp), qw(wp);
    mpfr_set(pw.raw(), p.raw(), MPFR_RNDN);
    mpfr_set(qw.raw(), q.raw(), MPFR_RNDN);
    Real term = Real::from_long(1, wp);
    Real sum = term;
    Real half = Real::from_long(1, wp) / 2;

    for (long k = 0; k < ctx.max_terms(); ++k) {
        Real num = pw + k;
        if (num.is_zero()) break;  // terminated: all later terms vanish
        Real den = qw + k;
        if (den.is_zero()) throw PoleError("kummer_m series hit pole of (q)_k");
        term = term * z * num / (den * (k + 1));
        sum += term;
        // certificate applies once the remaining ratios are bounded by 1/2 in magnitude
        Real next_num = pw + (k + 1);
        Real next_den = qw + (k + 1);
        if (next_num > 0 && next_den > 0) {
            Real ratio = abs(z) * next_num / (next_den * (k + 2));
            if (ratio <= half) {
                Real tail_bound = 2 * abs(term) * ratio;
                if (tail_bound <= ctx.tail_eps() * abs(sum)) break;
            }
        }
        if (k + 1 == ctx.max_terms())
            throw PrecisionError("kummer_m series did not meet tail tolerance within term budget");
    }
    Real out(std::max(z.precision(), ctx.prec()));
    mpfr_set(out.raw(), sum.raw(), MPFR_RNDN);
    return out;
}

}  // namespace bilattice
