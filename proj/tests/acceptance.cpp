// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are fixed here, not configurable.

#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "bilattice/oracle.hpp"
#include "bilattice/verify.hpp"

using namespace bilattice;

namespace {

int g_failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void run(const std::string& id, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        auto [pass, detail] = body();
        report(id, pass, detail);
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

Real max_abs(const Real& a, const Real& b) { return max(abs(a), abs(b)); }

struct PipelinePair {
    CertifiedRun painleve;
    OracleRun oracle;
    Real max_diff;
};

PipelinePair run_both(const FamilyParams& p, const LatticeSpec& lat, long N) {
    auto b0_at = [&](const PrecisionContext& c) { return b0_initial(p, lat, c); };
    PipelinePair out{
        p.family == Family::GeneralizedCharlier
            ? charlier_certified(p.a, p.beta, b0_at, N)
            : meixner_certified(p.a, p.beta, p.gamma, b0_at, N),
        stieltjes_certified(p, lat, N),
        Real()};
    CoeffComparison cmp = compare_coeffs(out.painleve.coeffs, out.oracle.basis.coeffs);
    out.max_diff = max(cmp.max_abs_da_sq, cmp.max_abs_db);
    return out;
}

// monotone (all first differences positive) on index window [lo, hi)
bool increasing_on(const std::vector<Real>& v, long lo, long hi) {
    for (long n = lo; n + 1 < hi; ++n)
        if (!(v[n + 1] > v[n])) return false;
    return true;
}

// both signs occur among the first differences on [lo, hi)
bool oscillates_on(const std::vector<Real>& v, long lo, long hi) {
    bool up = false, down = false;
    for (long n = lo; n + 1 < hi; ++n) {
        if (v[n + 1] > v[n]) up = true;
        if (v[n + 1] < v[n]) down = true;
    }
    return up && down;
}

// informational only: the asymptotic behavior is conjectural and never asserted
void emit_tail_data(const char* label, const CoeffSeq& s, long a) {
    const long N = s.order();
    std::printf("    tail data %-18s", label);
    for (long n = N - 2; n <= N; ++n) {
        Real half_n = Real::from_long(n, s.b[n].precision()) / 2;
        std::printf("  [n=%ld b-n=%s b-n/2=%s a_sq-an=%s]", n, (s.b[n] - n).to_string(6).c_str(),
                    (s.b[n] - half_n).to_string(6).c_str(), (s.a_sq[n] - a * Real::from_long(n, s.a_sq[n].precision())).to_string(6).c_str());
    }
    std::printf("\n");
}

}  // namespace

int main() {
    const FamilyParams charlier = FamilyParams::charlier(Rational(3), Rational(1, 3));
    const FamilyParams meixner = FamilyParams::meixner(Rational(3), Rational(2, 3), Rational(9, 10));

    // 1. classical sanity: weights a^k/k! (gamma = beta) give a_n^2 = 3n, b_n = n+3
    run("criterion 1 (classical Charlier sanity)", [&] {
        PrecisionContext ctx(60);
        auto p = FamilyParams::meixner(Rational(3), Rational(1), Rational(1));
        DiscreteMeasure m = build_measure(p, LatticeSpec::plain(), 42, ctx);
        OrthoBasis basis = stieltjes_coeffs(m, 20, ctx);
        Real worst = ctx.zero();
        for (long n = 0; n <= 20; ++n) {
            worst = max(worst, abs(basis.coeffs.a_sq[n] - 3 * ctx.real(n)));
            worst = max(worst, abs(basis.coeffs.b[n] - (ctx.real(n) + 3)));
        }
        return std::make_pair(worst < ctx.pow10(-30), "max deviation " + worst.to_string(3));
    });

    // 2. beta = 1/2 closed form on the equally spaced bi-lattice, a = 4, t = 1
    run("criterion 2 (beta=1/2 closed form, both pipelines)", [&] {
        const long N = 20;
        auto p = FamilyParams::charlier(Rational(4), Rational(1, 2));
        PipelinePair pair = run_both(p, LatticeSpec::bi(Rational(1)), N);
        PrecisionContext ctx(60);
        Real worst = pair.max_diff;
        for (long n = 0; n <= N; ++n) {
            auto [ca, cb] = beta_half_closed_form(ctx.real(4), n);
            worst = max(worst, max_abs(pair.painleve.coeffs.a_sq[n] - ca, pair.painleve.coeffs.b[n] - cb));
            worst = max(worst, max_abs(pair.oracle.basis.coeffs.a_sq[n] - ca,
                                       pair.oracle.basis.coeffs.b[n] - cb));
        }
        bool ok = worst < ctx.pow10(-20) && pair.painleve.certified && pair.oracle.certified;
        return std::make_pair(ok, "max deviation from a_n^2 = n, b_n = n/2+2: " + worst.to_string(3));
    });

    // 3. cross-pipeline equivalence, generalized Charlier on all three lattices
    std::vector<std::pair<std::string, LatticeSpec>> charlier_lattices = {
        {"plain", LatticeSpec::plain()},
        {"shifted", LatticeSpec::shifted()},
        {"bi t=10", LatticeSpec::bi(Rational(10))}};
    std::vector<CoeffSeq> charlier_runs;
    for (const auto& [label, lat] : charlier_lattices) {
        run("criterion 3 (Charlier equivalence, " + label + ")", [&] {
            PipelinePair pair = run_both(charlier, lat, 30);
            charlier_runs.push_back(pair.oracle.basis.coeffs);
            bool ok = pair.painleve.certified && pair.oracle.certified &&
                      pair.max_diff < PrecisionContext(60).pow10(-20);
            return std::make_pair(ok, "max |painleve - oracle| = " + pair.max_diff.to_string(3) +
                                          ", certificates " +
                                          (pair.painleve.certified ? "ok" : "painleve FAILED") + "/" +
                                          (pair.oracle.certified ? "ok" : "oracle FAILED"));
        });
    }

    // 4. cross-pipeline equivalence, generalized Meixner, plus the
    //    oscillating-vs-monotone signature of the bi-lattice coefficients
    std::vector<std::pair<std::string, LatticeSpec>> meixner_lattices = {
        {"plain", LatticeSpec::plain()},
        {"shifted", LatticeSpec::shifted()},
        {"bi t=2", LatticeSpec::bi(Rational(2))}};
    std::vector<CoeffSeq> meixner_runs;
    for (const auto& [label, lat] : meixner_lattices) {
        run("criterion 4 (Meixner equivalence, " + label + ")", [&] {
            PipelinePair pair = run_both(meixner, lat, 30);
            meixner_runs.push_back(pair.oracle.basis.coeffs);
            bool ok = pair.painleve.certified && pair.oracle.certified &&
                      pair.max_diff < PrecisionContext(60).pow10(-20);
            return std::make_pair(ok, "max |painleve - oracle| = " + pair.max_diff.to_string(3));
        });
    }
    run("criterion 4 (Meixner figure signature)", [&] {
        if (meixner_runs.size() != 3) return std::make_pair(false, std::string("equivalence runs missing"));
        bool mono = increasing_on(meixner_runs[0].a_sq, 5, 31) && increasing_on(meixner_runs[0].b, 5, 31) &&
                    increasing_on(meixner_runs[1].a_sq, 5, 31) && increasing_on(meixner_runs[1].b, 5, 31);
        bool osc = oscillates_on(meixner_runs[2].a_sq, 5, 31) && oscillates_on(meixner_runs[2].b, 5, 31);
        emit_tail_data("meixner plain", meixner_runs[0], 3);
        emit_tail_data("meixner shifted", meixner_runs[1], 3);
        emit_tail_data("meixner bi t=2", meixner_runs[2], 3);
        return std::make_pair(mono && osc,
                              std::string("single lattices monotone: ") + (mono ? "yes" : "NO") +
                                  ", bi-lattice oscillates: " + (osc ? "yes" : "NO"));
    });

    // 5. initial-condition closed forms on all six combinations
    run("criterion 5 (b0 closed forms vs summed moments)", [&] {
        PrecisionContext ctx(60);
        Real worst = ctx.zero();
        for (const FamilyParams& p : {charlier, meixner}) {
            for (const LatticeSpec& lat : {LatticeSpec::plain(), LatticeSpec::shifted(),
                                           LatticeSpec::bi(p.family == Family::GeneralizedCharlier
                                                               ? Rational(10)
                                                               : Rational(2))}) {
                DiscreteMeasure m = build_measure(p, lat, 2, ctx);
                worst = max(worst, abs(b0_initial(p, lat, ctx) - moment(m, 1) / moment(m, 0)));
            }
        }
        // shifted-initial-condition simplification via the Bessel recurrence
        Real a = ctx.real(3), beta = ctx.real(Rational(1, 3));
        Real z = 2 * sqrt(a);
        Real ident = sqrt(a) * bessel_i(2 - beta, z, ctx) + (1 - beta) * bessel_i(1 - beta, z, ctx) -
                     sqrt(a) * bessel_i(-beta, z, ctx);
        worst = max(worst, abs(ident));
        return std::make_pair(worst < ctx.pow10(-30), "max residual " + worst.to_string(3));
    });

    // 6. identity suite at 60 digits: thresholds 10^{-50} relative.
    //    N = 16 so the coefficient chains cover n <= 15 (they need index n+1).
    run("criterion 6 (identity suite)", [&] {
        VerifyOptions opt;
        opt.N = 16;
        std::vector<CheckResult> all;
        detail::CheckRecorder rec(all);
        PrecisionContext ctx(60);
        verify_measures(rec, charlier, LatticeSpec::bi(Rational(10)), ctx);
        verify_pipelines(rec, charlier, LatticeSpec::bi(Rational(10)), opt);
        verify_measures(rec, meixner, LatticeSpec::bi(Rational(2)), ctx);
        verify_pipelines(rec, meixner, LatticeSpec::bi(Rational(2)), opt);
        long failed = 0;
        std::string names;
        for (const auto& r : all)
            if (!r.pass) {
                ++failed;
                names += " " + r.group + "/" + r.name;
            }
        return std::make_pair(failed == 0, failed == 0
                                               ? std::to_string(all.size()) + " checks passed"
                                               : std::to_string(failed) + " checks failed:" + names);
    });

    // 7. beta = 1 reduction to discrete Painleve II, a = 3.
    //    7a states the relation a(c_{n+1}+c_{n-1}) = n/(1-c_n^2) for the
    //    extracted sequence; 7b states the relation the computed orbit
    //    satisfies together with b_n = n + sqrt(a) c_n c_{n+1}.
    {
        PrecisionContext ctx(60 + 12 * 31);
        auto p1 = FamilyParams::charlier(Rational(3), Rational(1));
        Real b0 = b0_initial(p1, LatticeSpec::plain(), ctx);
        DP2Seq dp2 = dp2_reduce(ctx.real(3), b0, 31, ctx);
        const Real tol = ctx.pow10(-20);

        run("criterion 7 (dP-II residual a(c+c) = n/(1-c^2))", [&] {
            Real a = ctx.real(3);
            Real worst = ctx.zero();
            bool c_bounded = true;
            for (long n = 1; n <= 30; ++n) {
                if (!(abs(dp2.c[n]) < 1)) c_bounded = false;
                Real res = a * (dp2.c[n + 1] + dp2.c[n - 1]) - n / (1 - dp2.c[n] * dp2.c[n]);
                worst = max(worst, abs(res));
            }
            return std::make_pair(worst < tol && c_bounded,
                                  "max residual " + worst.to_string(3) +
                                      " (the stated relation is not satisfied by the orbit; see the "
                                      "consistent form below)");
        });

        run("criterion 7-supplement (dP-II residual sqrt(a)(c+c) = n c/(1-c^2))", [&] {
            Real worst = ctx.zero();
            bool c_bounded = true;
            for (long n = 1; n <= 30; ++n) {
                if (!(abs(dp2.c[n]) < 1)) c_bounded = false;
                worst = max(worst, abs(dp2.dp2_residual[n]));
            }
            for (long n = 0; n <= 30; ++n) worst = max(worst, abs(dp2.b_residual[n]));
            return std::make_pair(worst < tol && c_bounded,
                                  "max residual " + worst.to_string(3) + ", |c_n| < 1 for n in [1,30]: " +
                                      (c_bounded ? "yes" : "NO"));
        });
    }

    // 8. order and positivity constraints on the bi-lattice runs
    run("criterion 8 (positivity, partial sums, trace, interlacing)", [&] {
        std::string detail;
        bool ok = true;

        struct Cfg {
            FamilyParams p;
            LatticeSpec lat;
        } cfgs[] = {{charlier, LatticeSpec::bi(Rational(10))}, {meixner, LatticeSpec::bi(Rational(2))}};
        for (const auto& cfg : cfgs) {
            PrecisionContext ctx(90);
            DiscreteMeasure m = build_measure(cfg.p, cfg.lat, 2 * 30 + 2, ctx);
            OrthoBasis basis = stieltjes_coeffs(m, 30, ctx);
            Real floor_b = min(ctx.zero(), 1 - ctx.real(cfg.p.beta));
            for (long n = 1; n <= 30; ++n) ok = ok && basis.coeffs.a_sq[n] > 0;
            for (long n = 0; n <= 30; ++n) ok = ok && basis.coeffs.b[n] > floor_b;
            if (!ok) detail += " positivity violated;";
            for (long n = 1; n <= 15; ++n)
                if (!partial_sum_check(basis.coeffs, cfg.p.beta, n)) {
                    ok = false;
                    detail += " partial sum failed at n=" + std::to_string(n) + ";";
                }
            for (long n = 2; n <= 12; ++n) {
                std::vector<Real> zs = zeros(basis, m, n, ctx);
                Real sum_z = ctx.zero(), sum_b = ctx.zero();
                for (const Real& z : zs) sum_z += z;
                for (long k = 0; k < n; ++k) sum_b += basis.coeffs.b[k];
                if (!(abs(sum_z - sum_b) < ctx.pow10(-40))) {
                    ok = false;
                    detail += " trace identity failed at n=" + std::to_string(n) + ";";
                }
                for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
                    bool found = false;
                    for (const Real& y : m.points)
                        if (y > zs[i] && y < zs[i + 1]) {
                            found = true;
                            break;
                        }
                    if (!found) {
                        ok = false;
                        detail += " interlacing gap at degree " + std::to_string(n) + ";";
                    }
                }
            }
        }
        return std::make_pair(ok, ok ? "all order constraints hold for n <= 15 (sums) / 12 (zeros)"
                                     : detail);
    });

    // 9. b0(t) monotonicity on {0, 0.1, 1, 10, 100, inf}
    run("criterion 9 (b0 monotone in t)", [&] {
        PrecisionContext ctx(60);
        std::vector<LatticeSpec> grid;
        for (const char* t : {"0", "1/10", "1", "10", "100"})
            grid.push_back(LatticeSpec::bi(Rational::parse(t)));
        grid.push_back(LatticeSpec::bi_infinite_t());

        struct Cfg {
            FamilyParams p;
            bool increasing;
            const char* label;
        } cfgs[] = {{FamilyParams::charlier(Rational(3), Rational(1, 3)), true, "charlier beta=1/3"},
                    {FamilyParams::charlier(Rational(3), Rational(1, 2)), true, "charlier beta=1/2"},
                    {FamilyParams::charlier(Rational(3), Rational(3, 2)), false, "charlier beta=3/2"},
                    {meixner, true, "meixner beta=2/3"}};
        bool ok = true;
        std::string detail;
        for (const auto& cfg : cfgs) {
            Real prev = b0_initial(cfg.p, grid[0], ctx);
            for (std::size_t i = 1; i < grid.size(); ++i) {
                Real cur = b0_initial(cfg.p, grid[i], ctx);
                bool step = cfg.increasing ? cur > prev : cur < prev;
                if (!step) {
                    ok = false;
                    detail += std::string(" ") + cfg.label + " step " + std::to_string(i) + ";";
                }
                prev = cur;
            }
        }
        return std::make_pair(ok, ok ? "strictly monotone in the beta-implied direction" : detail);
    });

    // 10. negative control: perturbing b0 by 1e-3 must break the equivalence
    //     of criterion 3 by index 15
    run("criterion 10 (negative control)", [&] {
        OracleRun oracle = stieltjes_certified(charlier, LatticeSpec::plain(), 15);
        long index = -1;
        try {
            PrecisionPolicy pol;
            PrecisionContext ctx(pol.working_digits(15));
            Real b0 = b0_initial(charlier, LatticeSpec::plain(), ctx) + ctx.real(Rational(1, 1000));
            CoeffSeq bad =
                charlier_iterate(ctx.real(charlier.a), ctx.real(charlier.beta), b0, 15, ctx);
            index = first_divergence_index(bad, oracle.basis.coeffs, ctx.pow10(-20));
        } catch (const SingularityError& e) {
            index = e.index;
        }
        bool ok = index >= 0 && index <= 15;
        return std::make_pair(ok, "divergence detected at index " + std::to_string(index));
    });

    // informational: tail behavior of the Charlier runs (not asserted)
    if (charlier_runs.size() == 3) {
        emit_tail_data("charlier plain", charlier_runs[0], 3);
        emit_tail_data("charlier shifted", charlier_runs[1], 3);
        emit_tail_data("charlier bi t=10", charlier_runs[2], 3);
    }

    std::printf("%s: %d failure(s)\n", g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
