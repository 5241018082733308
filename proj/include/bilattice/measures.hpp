#pragma once

#include <optional>
#include <vector>

#include "bilattice/special.hpp"

namespace bilattice {

enum class Family { GeneralizedCharlier, GeneralizedMeixner };
enum class LatticeKind { Plain, Shifted, Bi };

/// Weight-family parameters, kept as exact rationals.
/// GeneralizedCharlier: w(x) = Gamma(beta) a^x / (Gamma(beta+x) Gamma(x+1)).
/// GeneralizedMeixner:  w(x) = Gamma(beta) Gamma(gamma+x) a^x
///                             / (Gamma(gamma) Gamma(beta+x) Gamma(x+1)).
struct FamilyParams {
    Family family;
    Rational a;
    Rational beta;
    Rational gamma;  // Meixner only

    static FamilyParams charlier(Rational a, Rational beta) {
        return {Family::GeneralizedCharlier, std::move(a), std::move(beta), Rational(0)};
    }
    static FamilyParams meixner(Rational a, Rational beta, Rational gamma) {
        return {Family::GeneralizedMeixner, std::move(a), std::move(beta), std::move(gamma)};
    }
};

/// Support lattice: N, N+1-beta, or their union with mixture weights (1, t).
/// t may be infinite, which selects the shifted measure alone.
struct LatticeSpec {
    LatticeKind kind = LatticeKind::Plain;
    Rational t;       // Bi only
    bool t_inf = false;

    static LatticeSpec plain() { return {LatticeKind::Plain, Rational(0), false}; }
    static LatticeSpec shifted() { return {LatticeKind::Shifted, Rational(0), false}; }
    static LatticeSpec bi(Rational t) {
        if (t < 0) throw ValidityError("bi-lattice mixture parameter t must be >= 0");
        return {LatticeKind::Bi, std::move(t), false};
    }
    static LatticeSpec bi_infinite_t() { return {LatticeKind::Bi, Rational(0), true}; }
};

/// Parameter ranges under which the measure on the requested lattice is positive.
inline void validate(const FamilyParams& p, const LatticeSpec& lat) {
    if (p.a <= 0) throw ValidityError("parameter a must be positive");
    const bool meixner = p.family == Family::GeneralizedMeixner;
    switch (lat.kind) {
        case LatticeKind::Plain:
            if (p.beta <= 0) throw ValidityError("plain lattice requires beta > 0");
            if (meixner && p.gamma <= 0) throw ValidityError("plain lattice requires gamma > 0");
            break;
        case LatticeKind::Shifted:
            if (p.beta >= 2) throw ValidityError("shifted lattice requires beta < 2");
            if (meixner && p.gamma <= p.beta - Rational(1))
                throw ValidityError("shifted lattice requires gamma > beta - 1");
            break;
        case LatticeKind::Bi:
            if (p.beta <= 0 || p.beta >= 2) throw ValidityError("bi-lattice requires 0 < beta < 2");
            if (meixner && (p.gamma <= 0 || p.gamma <= p.beta - Rational(1)))
                throw ValidityError("bi-lattice requires gamma > max(0, beta-1)");
            break;
    }
}

/// Weight function w(x) at a real point.  Returns exact zero on the zero set
/// (negative integers and -beta - N); Meixner numerator poles are errors.
inline Real weight_at(const FamilyParams& p, const Real& x, const PrecisionContext& ctx) {
    const Real a = ctx.real(p.a);
    const Real beta = ctx.real(p.beta);

    if (p.family == Family::GeneralizedMeixner) {
        if (p.gamma == p.beta) {
            // the Gamma(gamma+x)/Gamma(beta+x) ratio cancels; only Gamma(x+1) zeros remain
            if (x.is_integer() && x <= -1) return ctx.zero();
            return pow(a, x) / gamma(x + 1, ctx);
        }
        const Real gamma_p = ctx.real(p.gamma);
        Real num_arg = gamma_p + x;
        if (detail::is_nonpositive_integer(num_arg))
            throw PoleError("Meixner weight pole at x = " + x.to_string(8));
        if ((x.is_integer() && x <= -1) || detail::is_nonpositive_integer(beta + x)) return ctx.zero();
        return gamma(beta, ctx) * gamma(num_arg, ctx) * pow(a, x) /
               (gamma(gamma_p, ctx) * gamma(beta + x, ctx) * gamma(x + 1, ctx));
    }

    if ((x.is_integer() && x <= -1) || detail::is_nonpositive_integer(beta + x)) return ctx.zero();
    return gamma(beta, ctx) * pow(a, x) / (gamma(beta + x, ctx) * gamma(x + 1, ctx));
}

/// Truncated discrete measure.  `tail_bound` is a certified bound on the
/// omitted mass inflated by the largest point power that will ever be used
/// (moment orders up to `max_moment_order`).
struct DiscreteMeasure {
    std::vector<Real> points;   // strictly ascending after merging duplicates
    std::vector<Real> weights;  // positive
    Real tail_bound;
    long max_moment_order = 0;

    std::size_t size() const { return points.size(); }
};

namespace detail {

// Weight ratio w_{k+1}/w_k on one sub-lattice (index k counts lattice steps).
inline Real sublattice_ratio(const FamilyParams& p, bool shifted, long k, const PrecisionContext& ctx) {
    const Real a = ctx.real(p.a);
    const Real beta = ctx.real(p.beta);
    Real den = (shifted ? (2 - beta) + k : beta + k) * (k + 1);
    if (p.family == Family::GeneralizedCharlier) return a / den;
    const Real gamma_p = ctx.real(p.gamma);
    Real num = shifted ? gamma_p + 1 - beta + k : gamma_p + k;
    return a * num / den;
}

struct SubLatticePoints {
    std::vector<Real> points;
    std::vector<Real> weights;
    Real tail_bound;
};

// Extends one sub-lattice until the J-inflated geometric tail certificate
// holds: majorant g_k = w_k (k+2)^J decays with ratio <= 1/2 and the first
// omitted g is below tail_eps times the accumulated mass.
inline SubLatticePoints build_sublattice(const FamilyParams& p, bool shifted, const Real& scale,
                                         long J, const PrecisionContext& ctx, long extra_points) {
    SubLatticePoints out;
    const Real beta = ctx.real(p.beta);
    const Real offset = shifted ? 1 - beta : ctx.zero();
    Real w = shifted ? scale * weight_at(p, offset, ctx) : scale;
    Real mass = ctx.zero();
    const Real half = ctx.real(1) / 2;
    long stop_k = -1;
    out.tail_bound = ctx.zero();
    for (long k = 0;; ++k) {
        if (k > ctx.max_terms())
            throw PrecisionError("measure truncation did not converge within term budget");
        out.points.push_back(offset + k);
        out.weights.push_back(w);
        mass += w;
        Real ratio = sublattice_ratio(p, shifted, k, ctx);
        Real w_next = w * ratio;
        if (stop_k < 0 && k >= 4) {
            Real g_ratio = ratio * pow(ctx.real(k + 3) / (k + 2), static_cast<unsigned long>(J));
            if (g_ratio <= half) {
                Real g_next = w_next * pow(ctx.real(k + 3), static_cast<unsigned long>(J));
                if (2 * g_next <= ctx.tail_eps() * mass) {
                    out.tail_bound = 2 * g_next;
                    stop_k = k;
                }
            }
        }
        if (stop_k >= 0 && k >= stop_k + extra_points) break;
        w = w_next;
    }
    return out;
}

}  // namespace detail

/// Builds the truncated measure for (family, lattice) with certified tails
/// for all moments of order <= max_moment_order.  `extra_points` extends the
/// truncation beyond the certified index (used by stability checks).
inline DiscreteMeasure build_measure(const FamilyParams& p, const LatticeSpec& lat, long max_moment_order,
                                     const PrecisionContext& ctx, long extra_points = 0) {
    validate(p, lat);
    const long J = std::max(max_moment_order, 1L);
    DiscreteMeasure m;
    m.max_moment_order = max_moment_order;

    const bool want_plain = lat.kind == LatticeKind::Plain ||
                            (lat.kind == LatticeKind::Bi && !lat.t_inf);
    const bool want_shifted = lat.kind == LatticeKind::Shifted ||
                              (lat.kind == LatticeKind::Bi && (lat.t_inf || lat.t > 0));

    Real plain_scale = ctx.real(1);
    Real shift_scale = ctx.real(1);
    if (lat.kind == LatticeKind::Bi && !lat.t_inf) shift_scale = ctx.real(lat.t);

    detail::SubLatticePoints plain, shifted;
    if (want_plain) plain = detail::build_sublattice(p, false, plain_scale, J, ctx, extra_points);
    if (want_shifted) shifted = detail::build_sublattice(p, true, shift_scale, J, ctx, extra_points);

    m.tail_bound = ctx.zero();
    if (want_plain) m.tail_bound += plain.tail_bound;
    if (want_shifted) m.tail_bound += shifted.tail_bound;

    // merge ascending; coincident points (beta = 1 makes the lattices equal) get summed weights
    std::size_t i = 0, j = 0;
    while (i < plain.points.size() || j < shifted.points.size()) {
        bool take_plain;
        if (i == plain.points.size())
            take_plain = false;
        else if (j == shifted.points.size())
            take_plain = true;
        else if (plain.points[i] == shifted.points[j]) {
            m.points.push_back(plain.points[i]);
            m.weights.push_back(plain.weights[i] + shifted.weights[j]);
            ++i;
            ++j;
            continue;
        } else
            take_plain = plain.points[i] < shifted.points[j];
        if (take_plain) {
            m.points.push_back(plain.points[i]);
            m.weights.push_back(plain.weights[i]);
            ++i;
        } else {
            m.points.push_back(shifted.points[j]);
            m.weights.push_back(shifted.weights[j]);
            ++j;
        }
    }
    return m;
}

/// j-th power moment of the truncated measure.
inline Real moment(const DiscreteMeasure& m, long j) {
    if (j < 0 || j > m.max_moment_order)
        throw ValidityError("moment order exceeds the truncation contract of this measure");
    if (m.points.empty()) throw ValidityError("moment of empty measure");
    Real s = Real::zero(m.weights[0].precision());
    for (std::size_t i = 0; i < m.points.size(); ++i)
        s += pow(m.points[i], static_cast<unsigned long>(j)) * m.weights[i];
    return s;
}

/// First two moments in closed form (Bessel for Charlier, Kummer for Meixner).
inline std::pair<Real, Real> closed_moments(const FamilyParams& p, const LatticeSpec& lat,
                                            const PrecisionContext& ctx) {
    validate(p, lat);
    const Real a = ctx.real(p.a);
    const Real beta = ctx.real(p.beta);

    if (p.family == Family::GeneralizedCharlier) {
        const Real sa = sqrt(a);
        const Real z = 2 * sa;
        const Real c = gamma(beta, ctx) * pow(sa, 1 - beta);
        auto plain = [&] { return std::pair<Real, Real>{c * bessel_i(beta - 1, z, ctx), c * sa * bessel_i(beta, z, ctx)}; };
        auto shifted = [&] { return std::pair<Real, Real>{c * bessel_i(1 - beta, z, ctx), c * sa * bessel_i(-beta, z, ctx)}; };
        switch (lat.kind) {
            case LatticeKind::Plain: return plain();
            case LatticeKind::Shifted: return shifted();
            case LatticeKind::Bi: {
                if (lat.t_inf) return shifted();
                auto [m0, m1] = plain();
                auto [h0, h1] = shifted();
                const Real t = ctx.real(lat.t);
                return {m0 + t * h0, m1 + t * h1};
            }
        }
    }

    const Real g = ctx.real(p.gamma);
    auto plain = [&] {
        return std::pair<Real, Real>{kummer_m(g, beta, a, ctx),
                                     g * a / beta * kummer_m(g + 1, beta + 1, a, ctx)};
    };
    if (p.beta == Rational(1)) {
        // the shift 1-beta vanishes: both lattices are N itself
        auto [m0, m1] = plain();
        switch (lat.kind) {
            case LatticeKind::Plain:
            case LatticeKind::Shifted: return {m0, m1};
            case LatticeKind::Bi: {
                if (lat.t_inf) return {m0, m1};
                const Real s = 1 + ctx.real(lat.t);
                return {s * m0, s * m1};
            }
        }
    }
    auto shifted = [&] {
        const Real c = gamma(beta, ctx) * gamma(g - beta + 1, ctx) / gamma(g, ctx) * pow(a, 1 - beta);
        return std::pair<Real, Real>{c / gamma(2 - beta, ctx) * kummer_m(g - beta + 1, 2 - beta, a, ctx),
                                     c / gamma(1 - beta, ctx) * kummer_m(g - beta + 1, 1 - beta, a, ctx)};
    };
    switch (lat.kind) {
        case LatticeKind::Plain: return plain();
        case LatticeKind::Shifted: return shifted();
        case LatticeKind::Bi: {
            if (lat.t_inf) return shifted();
            auto [m0, m1] = plain();
            auto [h0, h1] = shifted();
            const Real t = ctx.real(lat.t);
            return {m0 + t * h0, m1 + t * h1};
        }
    }
    throw ValidityError("unreachable lattice kind");
}

/// Closed-form initial condition b_0 = m_1/m_0 for the recurrence systems,
/// written with the constant prefactors cancelled:
///   Charlier:  sqrt(a) I_beta / I_{beta-1}          (plain)
///              sqrt(a) I_{-beta} / I_{1-beta}       (shifted)
///              sqrt(a) (I_beta + t I_{-beta}) / (I_{beta-1} + t I_{1-beta})
///   Meixner:   (gamma a/beta) M(gamma+1,beta+1,a)/M(gamma,beta,a)   (plain)
///              (1-beta) M(gamma-beta+1,1-beta,a)/M(gamma-beta+1,2-beta,a)
///              moment-mixture ratio on the bi-lattice.
inline Real b0_initial(const FamilyParams& p, const LatticeSpec& lat, const PrecisionContext& ctx) {
    validate(p, lat);
    const Real a = ctx.real(p.a);
    const Real beta = ctx.real(p.beta);

    auto checked_ratio = [](const Real& num, const Real& den) {
        if (den.is_zero() || !den.is_finite())
            throw DegenerateError("b0 denominator vanished at working precision");
        return num / den;
    };

    if (p.family == Family::GeneralizedCharlier) {
        const Real sa = sqrt(a);
        const Real z = 2 * sa;
        switch (lat.kind) {
            case LatticeKind::Plain:
                return sa * checked_ratio(bessel_i(beta, z, ctx), bessel_i(beta - 1, z, ctx));
            case LatticeKind::Shifted:
                return sa * checked_ratio(bessel_i(-beta, z, ctx), bessel_i(1 - beta, z, ctx));
            case LatticeKind::Bi: {
                if (lat.t_inf)
                    return sa * checked_ratio(bessel_i(-beta, z, ctx), bessel_i(1 - beta, z, ctx));
                const Real t = ctx.real(lat.t);
                return sa * checked_ratio(bessel_i(beta, z, ctx) + t * bessel_i(-beta, z, ctx),
                                          bessel_i(beta - 1, z, ctx) + t * bessel_i(1 - beta, z, ctx));
            }
        }
    }

    const Real g = ctx.real(p.gamma);
    auto plain_b0 = [&] {
        return g * a / beta *
               checked_ratio(kummer_m(g + 1, beta + 1, a, ctx), kummer_m(g, beta, a, ctx));
    };
    auto shifted_b0 = [&] {
        return (1 - beta) * checked_ratio(kummer_m(g - beta + 1, 1 - beta, a, ctx),
                                          kummer_m(g - beta + 1, 2 - beta, a, ctx));
    };
    if (p.beta == Rational(1)) return plain_b0();  // coincident lattices, mixture cancels in the ratio
    switch (lat.kind) {
        case LatticeKind::Plain: return plain_b0();
        case LatticeKind::Shifted: return shifted_b0();
        case LatticeKind::Bi: {
            if (lat.t_inf) return shifted_b0();
            auto [m0, m1] = closed_moments(p, lat, ctx);
            return checked_ratio(m1, m0);
        }
    }
    throw ValidityError("unreachable lattice kind");
}

/// Residual of the first-order difference equation satisfied by the
/// generalized Charlier weight:
///   w(x) - w(x-1) - ((a - x(beta-1) - x^2)/a) w(x),
/// identically zero in x wherever the weight is defined.
inline Real pearson_residual(const FamilyParams& p, const Real& x, const PrecisionContext& ctx) {
    if (p.family != Family::GeneralizedCharlier)
        throw ValidityError("pearson_residual applies to the generalized Charlier weight");
    const Real a = ctx.real(p.a);
    const Real beta = ctx.real(p.beta);
    const Real wx = weight_at(p, x, ctx);
    const Real wxm1 = weight_at(p, x - 1, ctx);
    return wx - wxm1 - (a - x * (beta - 1) - x * x) / a * wx;
}

/// Ladder potential u(x) = -1 + w(x-1)/w(x) for the generalized Meixner
/// weight, in rational form: u(x) = -1 + x(x+beta-1)/(a(x+gamma-1)).
inline Real ladder_potential(const FamilyParams& p, const Real& x, const PrecisionContext& ctx) {
    if (p.family != Family::GeneralizedMeixner)
        throw ValidityError("ladder_potential applies to the generalized Meixner weight");
    const Real a = ctx.real(p.a);
    const Real beta = ctx.real(p.beta);
    const Real g = ctx.real(p.gamma);
    const Real den = x + g - 1;
    if (den.is_zero()) throw PoleError("ladder potential pole at x = 1 - gamma");
    return -ctx.real(1) + x * (x + beta - 1) / (a * den);
}

}  // namespace bilattice
