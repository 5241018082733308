#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bilattice/oracle.hpp"

namespace bilattice {

/// One verification check: residual against threshold, machine-readable.
struct CheckResult {
    std::string group;
    std::string name;
    bool pass = false;
    std::string residual;   // decimal string of the measured magnitude
    std::string threshold;  // decimal string of the bound applied
    std::string detail;     // indices, certificates, free-form context
};

struct VerifyOptions {
    long N = 15;        // coefficient range driven through the checks
    long digits = 60;   // base working digits for identity thresholds
    PrecisionPolicy policy{};  // painleve escalation policy
};

namespace detail {

class CheckRecorder {
  public:
    explicit CheckRecorder(std::vector<CheckResult>& sink) : sink_(sink) {}

    void residual_check(const std::string& group, const std::string& name, const Real& residual,
                        const Real& threshold, const std::string& detail = "") {
        CheckResult r;
        r.group = group;
        r.name = name;
        r.pass = abs(residual) <= threshold;
        r.residual = abs(residual).to_string(3);
        r.threshold = threshold.to_string(3);
        r.detail = detail;
        sink_.push_back(std::move(r));
    }

    void flag_check(const std::string& group, const std::string& name, bool pass,
                    const std::string& detail = "") {
        CheckResult r;
        r.group = group;
        r.name = name;
        r.pass = pass;
        r.residual = pass ? "0" : "1";
        r.threshold = "boolean";
        r.detail = detail;
        sink_.push_back(std::move(r));
    }

  private:
    std::vector<CheckResult>& sink_;
};

inline Real rel_residual(const Real& lhs, const Real& rhs) {
    Real scale = max(max(abs(lhs), abs(rhs)), Real::from_long(1, lhs.precision()));
    return abs(lhs - rhs) / scale;
}

}  // namespace detail

/// Special-function identities, independent of family parameters.
inline void verify_special(detail::CheckRecorder& rec, const PrecisionContext& ctx) {
    const Real tol = ctx.pow10(-(ctx.digits() - 5));

    // Legendre duplication: Gamma(2x) = Gamma(x) Gamma(x+1/2) 2^{2x-1} / sqrt(pi)
    {
        Real worst = ctx.zero();
        for (const char* xs : {"3/10", "7/10", "19/10"}) {
            Real x = ctx.real(Rational::parse(xs));
            Real lhs = gamma(2 * x, ctx);
            Real rhs = gamma(x, ctx) * gamma(x + ctx.real(Rational(1, 2)), ctx) *
                       pow(ctx.real(2), 2 * x - 1) / sqrt(ctx.pi());
            worst = max(worst, detail::rel_residual(lhs, rhs));
        }
        rec.residual_check("special", "gamma_legendre_duplication", worst, tol);
    }

    // I_{nu-1}(z) - I_{nu+1}(z) = (2 nu / z) I_nu(z)
    {
        Real worst = ctx.zero();
        const Rational nus[] = {Rational(1, 3), Rational(-1, 3), Rational(1, 2), Rational(-1, 2),
                                Rational(2, 3)};
        Real z_grid[] = {ctx.real(1), 2 * sqrt(ctx.real(3)), ctx.real(10)};
        for (const auto& nuq : nus) {
            Real nu = ctx.real(nuq);
            for (const Real& z : z_grid) {
                Real lhs = bessel_i(nu - 1, z, ctx) - bessel_i(nu + 1, z, ctx);
                Real rhs = 2 * nu / z * bessel_i(nu, z, ctx);
                worst = max(worst, abs(lhs - rhs) / max(abs(bessel_i(nu, z, ctx)), ctx.real(1)));
            }
        }
        rec.residual_check("special", "bessel_three_term_recurrence", worst, tol);
    }

    // (p z / q) M(p+1, q+1, z) = (1-q)(M(p, q, z) - M(p, q-1, z))
    {
        Real worst = ctx.zero();
        struct Grid {
            Rational p, q;
            long z;
        } grid[] = {{Rational(9, 10), Rational(2, 3), 3},
                    {Rational(1, 3), Rational(5, 4), 2},
                    {Rational(7, 4), Rational(1, 2), 1}};
        for (const auto& g : grid) {
            Real p = ctx.real(g.p), q = ctx.real(g.q), z = ctx.real(g.z);
            Real lhs = p * z / q * kummer_m(p + 1, q + 1, z, ctx);
            Real rhs = (1 - q) * (kummer_m(p, q, z, ctx) - kummer_m(p, q - 1, z, ctx));
            worst = max(worst, detail::rel_residual(lhs, rhs));
        }
        rec.residual_check("special", "kummer_contiguous_relation", worst, tol);
    }

    // recomputation at doubled digits moves results by less than 10^{-(digits-5)}
    {
        PrecisionContext twice(2 * ctx.digits());
        Real z = 2 * sqrt(ctx.real(3));
        Real z2 = 2 * sqrt(twice.real(3));
        Real worst = detail::rel_residual(gamma(ctx.real(Rational(7, 10)), ctx),
                                          gamma(twice.real(Rational(7, 10)), twice));
        worst = max(worst, detail::rel_residual(bessel_i(ctx.real(Rational(1, 3)), z, ctx),
                                                bessel_i(twice.real(Rational(1, 3)), z2, twice)));
        worst = max(worst, detail::rel_residual(
                               kummer_m(ctx.real(Rational(9, 10)), ctx.real(Rational(2, 3)), ctx.real(3), ctx),
                               kummer_m(twice.real(Rational(9, 10)), twice.real(Rational(2, 3)),
                                        twice.real(3), twice)));
        rec.residual_check("special", "precision_doubling", worst, tol);
    }
}

/// Measure-level identities for one (family, lattice) configuration.
inline void verify_measures(detail::CheckRecorder& rec, const FamilyParams& p, const LatticeSpec& lat,
                            const PrecisionContext& ctx) {
    const Real tol = ctx.pow10(-(ctx.digits() - 10));
    const bool charlier = p.family == Family::GeneralizedCharlier;

    // b0 closed form against summed moments
    {
        DiscreteMeasure m = build_measure(p, lat, 2, ctx);
        Real m0 = moment(m, 0), m1 = moment(m, 1);
        Real b0 = b0_initial(p, lat, ctx);
        rec.residual_check("measures", "b0_closed_form_vs_summed_moments",
                           detail::rel_residual(b0, m1 / m0), tol);
        auto [c0, c1] = closed_moments(p, lat, ctx);
        Real worst = max(detail::rel_residual(c0, m0), detail::rel_residual(c1, m1));
        rec.residual_check("measures", "closed_moments_vs_summed", worst, tol);

        // truncation stability: ten extra support points move no moment by more than tail_eps
        DiscreteMeasure longer = build_measure(p, lat, 2, ctx, 10);
        Real drift = max(detail::rel_residual(moment(longer, 0), m0),
                         detail::rel_residual(moment(longer, 1), m1));
        rec.residual_check("measures", "truncation_stability", drift, ctx.tail_eps());
    }

    if (charlier) {
        // Pearson difference equation residual, on- and off-lattice
        Real worst = ctx.zero();
        const Real beta = ctx.real(p.beta);
        // deterministic scan of (-beta, 20): half-integer offsets plus named points
        std::vector<Real> sample = {ctx.real(3), ctx.real(Rational(5, 2)), 1 - beta};
        for (long i = 0; i < 20; ++i)
            sample.push_back(-beta + (beta + 20) * ctx.real(Rational(2 * i + 1, 40)) + ctx.real(Rational(1, 7)));
        for (const Real& x : sample) {
            Real r = pearson_residual(p, x, ctx);
            Real scale = max(abs(weight_at(p, x, ctx)), ctx.real(1));
            worst = max(worst, abs(r) / scale);
        }
        rec.residual_check("measures", "pearson_residual", worst, tol);

        // shifted-lattice b0 simplification: sqrt(a) I_{2-b} + (1-b) I_{1-b} = sqrt(a) I_{-b}
        Real a = ctx.real(p.a);
        Real z = 2 * sqrt(a);
        Real lhs = sqrt(a) * bessel_i(2 - beta, z, ctx) + (1 - beta) * bessel_i(1 - beta, z, ctx);
        Real rhs = sqrt(a) * bessel_i(-beta, z, ctx);
        rec.residual_check("measures", "bessel_shift_simplification", detail::rel_residual(lhs, rhs), tol);
    } else {
        // ladder potential: u(0) = -1 and the difference-quotient identity
        Real a = ctx.real(p.a), beta = ctx.real(p.beta), g = ctx.real(p.gamma);
        Real worst = abs(ladder_potential(p, ctx.zero(), ctx) + 1);
        struct Pt {
            Rational x, l;
        } pts[] = {{Rational(23, 10), Rational(4)}, {Rational(1, 2), Rational(2)}, {Rational(7, 3), Rational(1)}};
        for (const auto& q : pts) {
            Real x = ctx.real(q.x), l = ctx.real(q.l);
            Real lhs = (ladder_potential(p, x + 1, ctx) - ladder_potential(p, l, ctx)) / (x + 1 - l);
            Real rhs = (l + (g - 1) * (x + beta) / (g + x)) / (a * (g + l - 1));
            worst = max(worst, detail::rel_residual(lhs, rhs));
        }
        rec.residual_check("measures", "ladder_potential_difference_quotient", worst, tol);
    }

    // b0(t) monotone in t on the bi-lattice, direction set by beta
    if (lat.kind == LatticeKind::Bi) {
        const bool increasing = p.beta < Rational(1);
        std::vector<LatticeSpec> grid;
        for (const char* ts : {"0", "1/10", "1", "10", "100"}) grid.push_back(LatticeSpec::bi(Rational::parse(ts)));
        grid.push_back(LatticeSpec::bi_infinite_t());
        bool ok = true;
        std::string bad;
        if (p.beta == Rational(1)) {
            // coincident lattices: b0 is t-independent
            Real first = b0_initial(p, grid[0], ctx);
            for (auto& gl : grid) ok = ok && abs(b0_initial(p, gl, ctx) - first) <= tol;
        } else {
            Real prev = b0_initial(p, grid[0], ctx);
            for (std::size_t i = 1; i < grid.size(); ++i) {
                Real cur = b0_initial(p, grid[i], ctx);
                bool step_ok = increasing ? cur > prev : cur < prev;
                if (!step_ok) {
                    ok = false;
                    bad = "step " + std::to_string(i);
                }
                prev = cur;
            }
        }
        rec.flag_check("measures", "b0_monotone_in_t", ok, bad);
    }
}

/// Cross-pipeline equivalence and the recurrence-system identity chains.
inline void verify_pipelines(detail::CheckRecorder& rec, const FamilyParams& p, const LatticeSpec& lat,
                             const VerifyOptions& opt) {
    const long N = opt.N;
    const bool charlier = p.family == Family::GeneralizedCharlier;
    PrecisionContext ctx(opt.digits);
    const Real tol_id = ctx.pow10(-(opt.digits - 10));
    const Real tol_eq = ctx.pow10(-opt.policy.agree_exponent);

    auto b0_at = [&](const PrecisionContext& c) { return b0_initial(p, lat, c); };

    CertifiedRun painleve = charlier
                                ? charlier_certified(p.a, p.beta, b0_at, N, opt.policy)
                                : meixner_certified(p.a, p.beta, p.gamma, b0_at, N, opt.policy);
    rec.flag_check("painleve", "doubling_certificate", painleve.certified,
                   "digits=" + std::to_string(painleve.digits) +
                       " max_disagreement=" + painleve.max_disagreement.to_string(3));

    OracleRun oracle = stieltjes_certified(p, lat, N, opt.digits);
    rec.flag_check("oracle", "doubling_certificate", oracle.certified,
                   "digits=" + std::to_string(oracle.digits) +
                       " max_disagreement=" + oracle.max_disagreement.to_string(3));

    CoeffComparison cmp = compare_coeffs(painleve.coeffs, oracle.basis.coeffs);
    rec.residual_check("painleve", "cross_pipeline_equivalence", max(cmp.max_abs_da_sq, cmp.max_abs_db),
                       tol_eq,
                       "argmax a_sq at n=" + std::to_string(cmp.argmax_a_sq) + ", b at n=" +
                           std::to_string(cmp.argmax_b));

    // negative control: a 1e-3 shift of b0 must break equivalence early
    {
        long div_index = -1;
        try {
            auto b0_pert = [&](const PrecisionContext& c) {
                return b0_initial(p, lat, c) + c.real(Rational(1, 1000));
            };
            CertifiedRun bad = charlier ? charlier_certified(p.a, p.beta, b0_pert, N, opt.policy)
                                        : meixner_certified(p.a, p.beta, p.gamma, b0_pert, N, opt.policy);
            div_index = first_divergence_index(bad.coeffs, oracle.basis.coeffs, tol_eq);
        } catch (const SingularityError& e) {
            div_index = e.index;
        }
        rec.flag_check("painleve", "negative_control_divergence", div_index >= 0 && div_index <= 15,
                       "divergence index " + std::to_string(div_index));
    }

    const CoeffSeq& seq = painleve.coeffs;
    const PrecisionContext wctx(2 * painleve.digits);
    const Real a = wctx.real(p.a);
    const Real beta = wctx.real(p.beta);

    if (charlier) {
        // (A1): a_1^2 (b_1 + b_0 + beta - 1) = a
        rec.residual_check("painleve", "identity_a1",
                           detail::rel_residual(seq.a_sq[1] * (seq.b[1] + seq.b[0] + beta - 1), a), tol_id);
        // na(b_n - b_{n-1} - 1) = a_n^2 (a_{n-1}^2 - a_{n+1}^2)
        Real worst2 = wctx.zero();
        Real worst12 = wctx.zero();
        Real d0 = seq.b[0];
        for (long n = 1; n < N; ++n) {
            Real lhs = n * a * (seq.b[n] - seq.b[n - 1] - 1);
            Real rhs = seq.a_sq[n] * (seq.a_sq[n - 1] - seq.a_sq[n + 1]);
            worst2 = max(worst2, detail::rel_residual(lhs, rhs));
            Real dn = seq.b[n] - n;
            Real l12 = -dn * dn + d0 * d0 + seq.a_sq[n] * seq.a_sq[n + 1] / a - (beta - 1) * (dn - d0);
            Real r12 = seq.a_sq[n + 1] + seq.a_sq[n] - seq.a_sq[1];
            worst12 = max(worst12, detail::rel_residual(l12, r12));
        }
        rec.residual_check("painleve", "identity_rec2", worst2, tol_id);
        rec.residual_check("painleve", "identity_rec12", worst12, tol_id);
    } else {
        // derived ladder views: t_n = (gamma-1) u_n / (gamma-beta), T_n = (gamma-1) v_n / (a (gamma-beta))
        auto uvrun = meixner_iterate(a, beta, wctx.real(p.gamma), b0_initial(p, lat, wctx), N, wctx);
        const UVSeq& uv = uvrun.first;
        const CoeffSeq& mseq = uvrun.second;
        const Real g = wctx.real(p.gamma);
        Real worst_b = wctx.zero(), worst_a = wctx.zero(), worst_da = wctx.zero();
        for (long n = 0; n <= N; ++n) {
            Real tn = (g - 1) * uv.u[n] / (g - beta);
            Real Tn = (g - 1) * uv.v[n] / (a * (g - beta));
            worst_b = max(worst_b, detail::rel_residual(mseq.b[n], g - (g - beta) * Tn + a + n - beta));
            worst_a = max(worst_a, detail::rel_residual(mseq.a_sq[n], n * a - (g - beta) * tn));
            if (n < N) {
                Real tn1 = (g - 1) * uv.u[n + 1] / (g - beta);
                worst_da = max(worst_da, detail::rel_residual(mseq.a_sq[n + 1] - mseq.a_sq[n],
                                                              (g - beta) * (tn - tn1) + a));
            }
        }
        rec.residual_check("painleve", "identity_b_from_T", worst_b, tol_id);
        rec.residual_check("painleve", "identity_a_from_t", worst_a, tol_id);
        rec.residual_check("painleve", "identity_a_difference", worst_da, tol_id);
    }

    // oracle-side diagnostics on a basis at identity precision
    PrecisionContext octx(opt.digits + 2 * N);
    DiscreteMeasure m = build_measure(p, lat, 2 * N + 2, octx);
    OrthoBasis basis = stieltjes_coeffs(m, N, octx);
    const Real otol = octx.pow10(-(opt.digits - 10));

    {
        bool exact = true;
        for (long n = 1; n <= N; ++n)
            exact = exact && basis.coeffs.a_sq[n] == basis.norms[n] / basis.norms[n - 1];
        rec.flag_check("oracle", "norm_ratio_identity", exact);
    }
    {
        bool pos = basis.coeffs.positivity_violations.empty();
        Real floor_b = min(octx.zero(), 1 - octx.real(p.beta));
        for (long n = 1; n <= N; ++n) pos = pos && basis.coeffs.a_sq[n] > 0;
        for (long n = 0; n <= N; ++n) pos = pos && basis.coeffs.b[n] > floor_b;
        rec.flag_check("oracle", "positivity", pos);
    }

    if (charlier) {
        Real worstB = octx.zero(), worstA = octx.zero(), worstPt = octx.zero();
        const Real oa = octx.real(p.a);
        for (long n = 2; n <= std::min<long>(12, N); ++n) {
            StructureCoeffs sc = structure_b_coeff(basis, m, n, octx);
            worstA = max(worstA, abs(sc.A - n));
            worstB = max(worstB, detail::rel_residual(sc.B, basis.coeffs.a_sq[n] * basis.coeffs.a_sq[n - 1] / oa));
            for (long i = 0; i < 5; ++i) {
                Real x = octx.real(Rational(2 * i + 1, 3));
                Real lhs = eval_monic(basis, n, x + 1) - eval_monic(basis, n, x);
                Real rhs = n * eval_monic(basis, n - 1, x) + sc.B * eval_monic(basis, n - 2, x);
                worstPt = max(worstPt, detail::rel_residual(lhs, rhs));
            }
        }
        rec.residual_check("oracle", "structure_leading_coefficient", worstA, otol);
        rec.residual_check("oracle", "structure_B_closed_form", worstB, otol);
        rec.residual_check("oracle", "structure_pointwise", worstPt, otol);
    } else {
        Real worst1 = octx.zero(), worst4 = octx.zero(), worstb = octx.zero(), worsta = octx.zero();
        const Real oa = octx.real(p.a), ob = octx.real(p.beta), og = octx.real(p.gamma);
        for (long n = 1; n <= std::min<long>(15, N); ++n) {
            LadderDiagnostics d = ladder_diagnostics(basis, m, p, n, octx);
            worst1 = max(worst1, abs(d.R + d.T - 1));
            worst4 = max(worst4, abs(d.r + d.t));
            worstb = max(worstb, detail::rel_residual(basis.coeffs.b[n], og - (og - ob) * d.T + oa + n - ob));
            worsta = max(worsta, detail::rel_residual(basis.coeffs.a_sq[n], n * oa - (og - ob) * d.t));
        }
        rec.residual_check("oracle", "ladder_R_plus_T", worst1, otol);
        rec.residual_check("oracle", "ladder_r_plus_t", worst4, otol);
        rec.residual_check("oracle", "ladder_b_identity", worstb, otol);
        rec.residual_check("oracle", "ladder_a_identity", worsta, otol);
    }

    // Hankel-determinant cross-check of the Stieltjes coefficients, n <= 8
    {
        long hN = std::min<long>(8, N);
        std::vector<Real> mom;
        for (long j = 0; j <= 2 * hN + 1; ++j) mom.push_back(moment(m, j));
        Real worst = octx.zero();
        Real sum_b = octx.zero();
        for (long n = 1; n <= hN; ++n) {
            Real Hn = hankel_det(mom, n), Hm1 = hankel_det(mom, n - 1), Hm2 = hankel_det(mom, n - 2);
            worst = max(worst, detail::rel_residual(Hn * Hm2 / (Hm1 * Hm1), basis.coeffs.a_sq[n]));
        }
        for (long n = 0; n <= hN; ++n) {
            sum_b += basis.coeffs.b[n];
            worst = max(worst, detail::rel_residual(hankel_det(mom, n, true) / hankel_det(mom, n), sum_b));
        }
        rec.residual_check("oracle", "hankel_cross_check", worst, otol);
    }

    // zero sums, interlacing, partial-sum inequality
    {
        Real worst_trace = octx.zero();
        bool interlaced = true;
        std::string bad;
        for (long n = 2; n <= std::min<long>(12, N); ++n) {
            std::vector<Real> zs = zeros(basis, m, n, octx);
            Real sum_z = octx.zero(), sum_b = octx.zero();
            for (const Real& z : zs) sum_z += z;
            for (long k = 0; k < n; ++k) sum_b += basis.coeffs.b[k];
            worst_trace = max(worst_trace, detail::rel_residual(sum_z, sum_b));
            for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
                bool found = false;
                for (const Real& y : m.points)
                    if (y > zs[i] && y < zs[i + 1]) {
                        found = true;
                        break;
                    }
                if (!found) {
                    interlaced = false;
                    bad = "gap after zero " + std::to_string(i) + " of degree " + std::to_string(n);
                }
            }
        }
        rec.residual_check("oracle", "trace_zero_sum", worst_trace, otol);
        rec.flag_check("oracle", "lattice_interlacing", interlaced, bad);

        bool sums_ok = true;
        std::string sdetail;
        for (long n = 1; 2 * n - 1 <= N; ++n)
            if (!partial_sum_check(basis.coeffs, p.beta, n)) {
                sums_ok = false;
                sdetail = "n=" + std::to_string(n);
            }
        rec.flag_check("oracle", "partial_sum_inequality", sums_ok, sdetail);
    }
}

/// Full verification battery for one configuration.
inline std::vector<CheckResult> run_verification(const FamilyParams& p, const LatticeSpec& lat,
                                                 const VerifyOptions& opt) {
    validate(p, lat);
    std::vector<CheckResult> results;
    detail::CheckRecorder rec(results);
    PrecisionContext ctx(opt.digits);
    verify_special(rec, ctx);
    verify_measures(rec, p, lat, ctx);
    verify_pipelines(rec, p, lat, opt);
    return results;
}

}  // namespace bilattice
