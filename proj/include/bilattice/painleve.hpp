#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bilattice/real.hpp"

namespace bilattice {

/// Monic three-term recurrence coefficients a_n^2 (n = 0..N, a_0^2 = 0) and
/// b_n (n = 0..N).  For a genuine orthogonality solution a_n^2 > 0 for n >= 1
/// and b_n > min(0, 1-beta); violations are recorded, never silently dropped.
struct CoeffSeq {
    std::vector<Real> a_sq;
    std::vector<Real> b;
    std::vector<long> positivity_violations;

    long order() const { return static_cast<long>(b.size()) - 1; }
};

/// Symmetrized variables of the generalized Meixner recurrence system,
/// linked to the coefficients by a_n^2 = na - (gamma-1)u_n and
/// b_n = n + gamma - beta + a - (gamma-1)v_n/a.
struct UVSeq {
    std::vector<Real> u;  // 0..N+1
    std::vector<Real> v;  // 0..N
};

/// beta = 1 reduction: a_n^2 = a(1-c_n^2), c_0 = 1, |c_n| < 1 for n >= 1.
struct DP2Seq {
    std::vector<Real> c;             // 0..N
    std::vector<Real> dp2_residual;  // n = 1..N-1: sqrt(a)(c_{n+1}+c_{n-1}) - n c_n/(1-c_n^2)
    std::vector<Real> b_residual;    // n = 0..N-1: b_n - n - sqrt(a) c_n c_{n+1}
    CoeffSeq coeffs;
};

namespace detail {

inline Real singular_threshold(const PrecisionContext& ctx, const Real& scale) {
    return max(abs(scale), ctx.real(1)) * ctx.pow10(-(ctx.digits() - 10));
}

inline void check_not_singular(const Real& value, const Real& scale, long index, const char* what,
                               const PrecisionContext& ctx) {
    if (abs(value) <= singular_threshold(ctx, scale))
        throw SingularityError(std::string(what) + " vanished at index " + std::to_string(index), index);
}

inline void record_positivity(CoeffSeq& s, const Real& beta) {
    const Real floor_b = min(Real::zero(beta.precision()), 1 - beta);
    for (std::size_t n = 1; n < s.a_sq.size(); ++n)
        if (!(s.a_sq[n] > 0)) s.positivity_violations.push_back(static_cast<long>(n));
    for (std::size_t n = 0; n < s.b.size(); ++n)
        if (!(s.b[n] > floor_b)) s.positivity_violations.push_back(static_cast<long>(n));
}

}  // namespace detail

/// Forward iteration of the generalized Charlier recurrence system
///   b_n + b_{n-1} - n + beta = a n / a_n^2
///   (a_{n+1}^2 - a)(a_n^2 - a) = a (b_n - n)(b_n - n + beta - 1)
/// from a_0^2 = 0 and the supplied b_0.  b_n is always obtained from the
/// first (linear) equation and a_{n+1}^2 from the second, so the forward
/// flow is deterministic; the root ambiguity lives entirely in b_0.  The
/// seed a_1^2 = a - b_0(b_0 + beta - 1) comes from the moment identity
/// d_0^2 + (beta-1) d_0 + a_1^2 = a.
///
/// Confined passage: when a_n^2 - a and (b_n - n)(b_n - n + beta - 1)
/// vanish together at context precision (the equally spaced beta = 1/2
/// lattice with integer sqrt(a) hits this exactly at n = a_n^2), the second
/// update is 0/0 and the flow continues through the equivalent relation
///   n a (b_n - b_{n-1} - 1) = a_n^2 (a_{n-1}^2 - a_{n+1}^2),
/// which is regular there.  A vanishing denominator with non-vanishing
/// numerator is a movable singularity and remains a hard error.
inline CoeffSeq charlier_iterate(const Real& a, const Real& beta, const Real& b0, long N,
                                 const PrecisionContext& ctx) {
    if (!(a > 0)) throw ValidityError("charlier_iterate requires a > 0");
    if (N < 1) throw ValidityError("charlier_iterate requires N >= 1");

    CoeffSeq s;
    s.a_sq.reserve(N + 1);
    s.b.reserve(N + 1);
    s.a_sq.push_back(Real::zero(a.precision()));
    s.a_sq.push_back(a - b0 * (b0 + beta - 1));
    s.b.push_back(b0);

    const Real thr = detail::singular_threshold(ctx, a);
    for (long n = 1; n <= N; ++n) {
        detail::check_not_singular(s.a_sq[n], a, n, "a_n^2", ctx);
        Real bn = a * n / s.a_sq[n] - s.b[n - 1] + n - beta;
        s.b.push_back(bn);
        if (n < N) {
            Real dn = bn - n;
            Real den = s.a_sq[n] - a;
            Real num = a * dn * (dn + beta - 1);
            if (abs(den) > thr) {
                s.a_sq.push_back(a + num / den);
            } else if (abs(num) <= thr * a) {
                // confined 0/0 passage
                s.a_sq.push_back(s.a_sq[n - 1] - n * a * (bn - s.b[n - 1] - 1) / s.a_sq[n]);
            } else {
                throw SingularityError("a_n^2 - a vanished at index " + std::to_string(n), n);
            }
        }
    }
    detail::record_positivity(s, beta);
    return s;
}

/// Forward iteration of the generalized Meixner system in the symmetrized
/// (u, v) variables:
///   (u_n + v_n)(u_{n+1} + v_n) = (gamma-1)/a^2 v_n (v_n - a)(v_n - a(gamma-beta)/(gamma-1))
///   (u_n + v_n)(u_n + v_{n-1}) = u_n/(u_n - an/(gamma-1)) (u_n + a)(u_n + a(gamma-beta)/(gamma-1))
/// seeded by u_0 = 0 and v_0 = a/(gamma-1) (gamma - beta + a - b_0).  Both
/// updates are linear solves; the returned CoeffSeq is derived through the
/// substitution above.
inline std::pair<UVSeq, CoeffSeq> meixner_iterate(const Real& a, const Real& beta, const Real& gamma_p,
                                                  const Real& b0, long N, const PrecisionContext& ctx) {
    if (!(a > 0)) throw ValidityError("meixner_iterate requires a > 0");
    if (N < 1) throw ValidityError("meixner_iterate requires N >= 1");
    if (gamma_p == beta)
        throw DegenerateError(
            "gamma = beta is the classical Charlier weight: a_n^2 = n a, b_n = n + a in closed form");
    if (gamma_p == 1) throw DegenerateError("gamma = 1 degenerates the (u,v) substitution");

    const Real gm1 = gamma_p - 1;
    const Real shift = a * (gamma_p - beta) / gm1;

    auto rhs1 = [&](const Real& v) { return gm1 / (a * a) * v * (v - a) * (v - shift); };
    auto rhs2 = [&](const Real& u, long n) {
        return u / (u - a * n / gm1) * (u + a) * (u + shift);
    };

    UVSeq uv;
    uv.u.reserve(N + 2);
    uv.v.reserve(N + 1);
    uv.u.push_back(Real::zero(a.precision()));
    uv.v.push_back(a / gm1 * (gamma_p - beta + a - b0));

    detail::check_not_singular(uv.u[0] + uv.v[0], a, 0, "u_n + v_n", ctx);
    uv.u.push_back(rhs1(uv.v[0]) / (uv.u[0] + uv.v[0]) - uv.v[0]);

    for (long n = 1; n <= N; ++n) {
        detail::check_not_singular(uv.u[n] - a * n / gm1, a, n, "u_n - an/(gamma-1)", ctx);
        detail::check_not_singular(uv.u[n] + uv.v[n - 1], a, n, "u_n + v_{n-1}", ctx);
        uv.v.push_back(rhs2(uv.u[n], n) / (uv.u[n] + uv.v[n - 1]) - uv.u[n]);
        detail::check_not_singular(uv.u[n] + uv.v[n], a, n, "u_n + v_n", ctx);
        uv.u.push_back(rhs1(uv.v[n]) / (uv.u[n] + uv.v[n]) - uv.v[n]);
    }

    CoeffSeq s;
    s.a_sq.reserve(N + 1);
    s.b.reserve(N + 1);
    for (long n = 0; n <= N; ++n) {
        s.a_sq.push_back(n * a - gm1 * uv.u[n]);
        s.b.push_back(n + gamma_p - beta + a - gm1 * uv.v[n] / a);
    }
    detail::record_positivity(s, beta);
    return {std::move(uv), std::move(s)};
}

/// beta = 1 reduction of the Charlier system.  Extracts c_n from the
/// computed coefficients via c_0 = 1, |c_n| = sqrt(1 - a_n^2/a) with
/// sign(c_{n+1}) = sign((b_n - n)/c_n), and reports per-index residuals of
/// the relations the reduced sequence satisfies,
///   b_n = n + sqrt(a) c_n c_{n+1},
///   sqrt(a)(c_{n+1} + c_{n-1}) = n c_n / (1 - c_n^2),
/// which is a discrete Painleve II equation for c_n.
inline DP2Seq dp2_reduce(const Real& a, const Real& b0, long N, const PrecisionContext& ctx) {
    DP2Seq out;
    const Real one = Real::from_long(1, a.precision());
    out.coeffs = charlier_iterate(a, one, b0, N, ctx);
    const Real sa = sqrt(a);

    out.c.push_back(one);
    for (long n = 1; n <= N; ++n) {
        Real s = 1 - out.coeffs.a_sq[n] / a;
        if (!(s > 0))
            throw SingularityError("a_n^2 >= a: no real c_n at index " + std::to_string(n), n);
        if (out.c[n - 1].is_zero())
            throw SingularityError("sign rule broke at index " + std::to_string(n), n);
        Real mag = sqrt(s);
        Real selector = (out.coeffs.b[n - 1] - (n - 1)) / out.c[n - 1];
        out.c.push_back(selector >= 0 ? mag : -mag);
    }

    out.b_residual.reserve(N);
    for (long n = 0; n < N; ++n)
        out.b_residual.push_back(out.coeffs.b[n] - n - sa * out.c[n] * out.c[n + 1]);

    out.dp2_residual.assign(1, ctx.zero());
    for (long n = 1; n < N; ++n) {
        Real one_minus = 1 - out.c[n] * out.c[n];
        out.dp2_residual.push_back(sa * (out.c[n + 1] + out.c[n - 1]) - n * out.c[n] / one_minus);
    }
    return out;
}

/// Closed-form coefficients on the equally spaced beta = 1/2 bi-lattice with
/// t = 1 (half-integer lattice, Charlier weights with parameter 2 sqrt(a)):
/// a_n^2 = n sqrt(a)/2 and b_n = n/2 + sqrt(a).
inline std::pair<Real, Real> beta_half_closed_form(const Real& a, long n) {
    if (!(a > 0)) throw ValidityError("beta_half_closed_form requires a > 0");
    const Real sa = sqrt(a);
    return {n * sa / 2, Real::from_long(n, a.precision()) / 2 + sa};
}

/// Elementwise comparison of two coefficient sequences.
struct CoeffComparison {
    Real max_abs_da_sq;
    Real max_abs_db;
    long argmax_a_sq = 0;
    long argmax_b = 0;
};

inline CoeffComparison compare_coeffs(const CoeffSeq& x, const CoeffSeq& y) {
    if (x.a_sq.size() != y.a_sq.size() || x.b.size() != y.b.size())
        throw LengthError("compare_coeffs: sequences of different length");
    CoeffComparison c;
    c.max_abs_da_sq = Real::zero(x.a_sq.empty() ? Real::kMinPrec : x.a_sq[0].precision());
    c.max_abs_db = c.max_abs_da_sq;
    for (std::size_t n = 0; n < x.a_sq.size(); ++n) {
        Real d = abs(x.a_sq[n] - y.a_sq[n]);
        if (d > c.max_abs_da_sq) {
            c.max_abs_da_sq = d;
            c.argmax_a_sq = static_cast<long>(n);
        }
    }
    for (std::size_t n = 0; n < x.b.size(); ++n) {
        Real d = abs(x.b[n] - y.b[n]);
        if (d > c.max_abs_db) {
            c.max_abs_db = d;
            c.argmax_b = static_cast<long>(n);
        }
    }
    return c;
}

/// First index at which two sequences differ by more than tol (in a_n^2 or
/// b_n), or -1 when they agree everywhere.
inline long first_divergence_index(const CoeffSeq& x, const CoeffSeq& y, const Real& tol) {
    if (x.a_sq.size() != y.a_sq.size() || x.b.size() != y.b.size())
        throw LengthError("first_divergence_index: sequences of different length");
    for (std::size_t n = 0; n < x.b.size(); ++n) {
        if (n < x.a_sq.size() && abs(x.a_sq[n] - y.a_sq[n]) > tol) return static_cast<long>(n);
        if (abs(x.b[n] - y.b[n]) > tol) return static_cast<long>(n);
    }
    return -1;
}

/// Digit-escalation policy for the forward iterations: the discrete Painleve
/// flow off the exact orbit separates exponentially, so working precision is
/// sized linearly in N and the result is certified by agreement between a
/// run at D digits and one at 2D digits.
struct PrecisionPolicy {
    long base_digits = 60;     // floor on the working precision
    long loss_rate = 12;       // extra digits per computed index
    long agree_exponent = 20;  // certificate: |difference| <= 10^{-agree_exponent}
    std::optional<Rational> tail_eps;  // overrides the context default when set

    long working_digits(long N) const { return std::max(base_digits, 60 + loss_rate * N); }
    PrecisionContext context(long digits) const {
        return tail_eps ? PrecisionContext(digits, *tail_eps) : PrecisionContext(digits);
    }
};

struct CertifiedRun {
    CoeffSeq coeffs;   // from the higher-precision member of the pair
    bool certified = false;
    long digits = 0;   // base working digits D of the (D, 2D) pair
    long first_uncertified = -1;
    Real max_disagreement;
};

namespace detail {

template <typename RunFn>
CertifiedRun certify_by_doubling(RunFn&& run, const PrecisionPolicy& pol, long digits) {
    CertifiedRun out;
    out.digits = digits;
    CoeffSeq low = run(pol.context(digits));
    PrecisionContext high_ctx = pol.context(2 * digits);
    out.coeffs = run(high_ctx);
    const Real tol = high_ctx.pow10(-pol.agree_exponent);
    out.first_uncertified = first_divergence_index(low, out.coeffs, tol);
    CoeffComparison cmp = compare_coeffs(low, out.coeffs);
    out.max_disagreement = max(cmp.max_abs_da_sq, cmp.max_abs_db);
    out.certified = out.first_uncertified < 0;
    return out;
}

}  // namespace detail

/// Runs charlier_iterate at D and 2D digits with b0 recomputed at each
/// precision (b0_at: PrecisionContext -> Real) and certifies agreement.
template <typename B0Fn>
CertifiedRun charlier_certified(const Rational& a, const Rational& beta, B0Fn&& b0_at, long N,
                                const PrecisionPolicy& pol = {}) {
    return detail::certify_by_doubling(
        [&](const PrecisionContext& ctx) {
            return charlier_iterate(ctx.real(a), ctx.real(beta), b0_at(ctx), N, ctx);
        },
        pol, pol.working_digits(N));
}

template <typename B0Fn>
CertifiedRun meixner_certified(const Rational& a, const Rational& beta, const Rational& gamma_p,
                               B0Fn&& b0_at, long N, const PrecisionPolicy& pol = {}) {
    return detail::certify_by_doubling(
        [&](const PrecisionContext& ctx) {
            return meixner_iterate(ctx.real(a), ctx.real(beta), ctx.real(gamma_p), b0_at(ctx), N, ctx)
                .second;
        },
        pol, pol.working_digits(N));
}

}  // namespace bilattice
