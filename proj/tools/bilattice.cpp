// Command-line front end: coefficient tables from both computation routes,
// the verification battery, b0(t) scans and the special-parameter tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

#include "bilattice/run_config.hpp"
#include "bilattice/verify.hpp"

namespace {

using namespace bilattice;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSingularity = 3;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
}

void write_json(std::ostream& os, const std::map<std::string, std::string>& config, const Table& t) {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : config) j["config"][k] = v;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        auto& col = j["data"][t.header[c]];
        col = nlohmann::json::array();
        for (const auto& row : t.rows) col.push_back(row[c]);
    }
    os << j.dump(2) << "\n";
}

void emit(const RunConfig& cfg, const std::map<std::string, std::string>& config_echo, const Table& t) {
    std::unique_ptr<std::ofstream> file;
    std::ostream* os = &std::cout;
    if (!cfg.out_path.empty()) {
        file = std::make_unique<std::ofstream>(cfg.out_path);
        if (!*file) throw ValidityError("cannot open output path " + cfg.out_path);
        os = file.get();
    }
    if (cfg.format == "json")
        write_json(*os, config_echo, t);
    else
        write_csv(*os, t);
}

std::map<std::string, std::string> config_echo(const RunConfig& cfg, const std::string& command) {
    std::map<std::string, std::string> m;
    m["command"] = command;
    m["family"] = cfg.params.family == Family::GeneralizedCharlier ? "charlier" : "meixner";
    m["a"] = cfg.params.a.to_string();
    m["beta"] = cfg.params.beta.to_string();
    if (cfg.params.family == Family::GeneralizedMeixner) m["gamma"] = cfg.params.gamma.to_string();
    switch (cfg.lattice.kind) {
        case LatticeKind::Plain: m["lattice"] = "plain"; break;
        case LatticeKind::Shifted: m["lattice"] = "shifted"; break;
        case LatticeKind::Bi:
            m["lattice"] = "bi";
            m["t"] = cfg.lattice.t_inf ? "inf" : cfg.lattice.t.to_string();
            break;
    }
    m["n"] = std::to_string(cfg.N);
    m["digits"] = std::to_string(cfg.digits);
    return m;
}

int cmd_coeffs(const RunConfig& cfg) {
    validate(cfg.params, cfg.lattice);
    auto b0_at = [&](const PrecisionContext& c) { return b0_initial(cfg.params, cfg.lattice, c); };
    const bool charlier = cfg.params.family == Family::GeneralizedCharlier;

    CertifiedRun painleve = charlier
                                ? charlier_certified(cfg.params.a, cfg.params.beta, b0_at, cfg.N, cfg.policy())
                                : meixner_certified(cfg.params.a, cfg.params.beta, cfg.params.gamma, b0_at,
                                                    cfg.N, cfg.policy());
    OracleRun oracle = stieltjes_certified(cfg.params, cfg.lattice, cfg.N, cfg.digits, 20, cfg.tail_eps);

    Table t;
    t.header = {"n", "a_sq_painleve", "b_painleve", "a_sq_oracle", "b_oracle", "abs_da_sq", "abs_db"};
    bool all_within = true;
    PrecisionContext tolctx(cfg.digits);
    const Real tol = tolctx.pow10(-20);
    for (long n = 0; n <= cfg.N; ++n) {
        Real da = abs(painleve.coeffs.a_sq[n] - oracle.basis.coeffs.a_sq[n]);
        Real db = abs(painleve.coeffs.b[n] - oracle.basis.coeffs.b[n]);
        if (da > tol || db > tol) all_within = false;
        t.rows.push_back({std::to_string(n), painleve.coeffs.a_sq[n].to_string(cfg.sig_digits),
                          painleve.coeffs.b[n].to_string(cfg.sig_digits),
                          oracle.basis.coeffs.a_sq[n].to_string(cfg.sig_digits),
                          oracle.basis.coeffs.b[n].to_string(cfg.sig_digits), da.to_string(3),
                          db.to_string(3)});
    }
    auto echo = config_echo(cfg, "coeffs");
    echo["painleve_certified"] = painleve.certified ? "true" : "false";
    echo["oracle_certified"] = oracle.certified ? "true" : "false";
    emit(cfg, echo, t);
    return all_within ? kExitOk : kExitVerificationFailure;
}

int cmd_verify(const RunConfig& cfg) {
    validate(cfg.params, cfg.lattice);
    VerifyOptions opt;
    opt.N = cfg.N;
    opt.digits = cfg.digits;
    opt.policy = cfg.policy();
    std::vector<CheckResult> results = run_verification(cfg.params, cfg.lattice, opt);

    Table t;
    t.header = {"group", "check", "pass", "residual", "threshold", "detail"};
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        t.rows.push_back({r.group, r.name, r.pass ? "pass" : "FAIL", r.residual, r.threshold, r.detail});
    }
    emit(cfg, config_echo(cfg, "verify"), t);
    return all_pass ? kExitOk : kExitVerificationFailure;
}

int cmd_b0_scan(const RunConfig& cfg, const std::string& t_grid) {
    if (cfg.lattice.kind != LatticeKind::Bi)
        throw ValidityError("b0-scan requires --lattice bi");
    PrecisionContext ctx = cfg.context();

    std::vector<std::pair<std::string, LatticeSpec>> grid;
    std::stringstream ss(t_grid);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        grid.emplace_back(tok, tok == "inf" || tok == "infinity"
                                   ? LatticeSpec::bi_infinite_t()
                                   : LatticeSpec::bi(Rational::parse(tok)));
    }
    if (grid.size() < 2) throw ValidityError("t grid needs at least two values");

    Table t;
    t.header = {"t", "b0"};
    std::vector<Real> values;
    for (const auto& [label, lat] : grid) {
        validate(cfg.params, lat);
        values.push_back(b0_initial(cfg.params, lat, ctx));
        t.rows.push_back({label, values.back().to_string(cfg.sig_digits)});
    }
    emit(cfg, config_echo(cfg, "b0-scan"), t);

    if (cfg.params.beta != Rational(1)) {
        const bool increasing = cfg.params.beta < Rational(1);
        for (std::size_t i = 1; i < values.size(); ++i) {
            bool ok = increasing ? values[i] > values[i - 1] : values[i] < values[i - 1];
            if (!ok)
                throw MonotonicityError("b0(t) not strictly " +
                                        std::string(increasing ? "increasing" : "decreasing") +
                                        " between t = " + grid[i - 1].first + " and t = " + grid[i].first);
        }
    }
    return kExitOk;
}

int cmd_special(const RunConfig& cfg) {
    if (cfg.params.family != Family::GeneralizedCharlier)
        throw ValidityError("special tables exist for the generalized Charlier family");
    PrecisionContext tolctx(cfg.digits);
    const Real tol = tolctx.pow10(-20);

    if (cfg.params.beta == Rational(1, 2)) {
        // equally spaced bi-lattice with t = 1: a_n^2 = n sqrt(a)/2, b_n = n/2 + sqrt(a)
        LatticeSpec lat = LatticeSpec::bi(Rational(1));
        auto b0_at = [&](const PrecisionContext& c) { return b0_initial(cfg.params, lat, c); };
        CertifiedRun run = charlier_certified(cfg.params.a, cfg.params.beta, b0_at, cfg.N, cfg.policy());
        PrecisionContext ctx(2 * run.digits);
        const Real a = ctx.real(cfg.params.a);

        Table t;
        t.header = {"n", "a_sq_closed", "b_closed", "a_sq_painleve", "b_painleve", "abs_da_sq", "abs_db"};
        bool ok = true;
        for (long n = 0; n <= cfg.N; ++n) {
            auto [ca, cb] = beta_half_closed_form(a, n);
            Real da = abs(run.coeffs.a_sq[n] - ca);
            Real db = abs(run.coeffs.b[n] - cb);
            if (da > tol || db > tol) ok = false;
            t.rows.push_back({std::to_string(n), ca.to_string(cfg.sig_digits), cb.to_string(cfg.sig_digits),
                              run.coeffs.a_sq[n].to_string(cfg.sig_digits),
                              run.coeffs.b[n].to_string(cfg.sig_digits), da.to_string(3), db.to_string(3)});
        }
        emit(cfg, config_echo(cfg, "special"), t);
        return ok ? kExitOk : kExitVerificationFailure;
    }

    if (cfg.params.beta == Rational(1)) {
        // both lattices coincide; b0 is t-independent, so any lattice choice
        // reduces to the plain run
        PrecisionPolicy pol = cfg.policy();
        const long digits = pol.working_digits(cfg.N + 1);
        PrecisionContext ctx(2 * digits);
        Real b0 = b0_initial(cfg.params, LatticeSpec::plain(), ctx);
        DP2Seq dp2 = dp2_reduce(ctx.real(cfg.params.a), b0, cfg.N + 1, ctx);

        Table t;
        t.header = {"n", "c", "a_sq", "b", "dp2_residual", "b_residual"};
        bool ok = true;
        for (long n = 0; n <= cfg.N; ++n) {
            std::string res = "", bres = "";
            if (n >= 1 && n < static_cast<long>(dp2.dp2_residual.size())) {
                res = abs(dp2.dp2_residual[n]).to_string(3);
                if (abs(dp2.dp2_residual[n]) > tol) ok = false;
                if (!(abs(dp2.c[n]) < 1)) ok = false;
            }
            if (n < static_cast<long>(dp2.b_residual.size())) {
                bres = abs(dp2.b_residual[n]).to_string(3);
                if (abs(dp2.b_residual[n]) > tol) ok = false;
            }
            t.rows.push_back({std::to_string(n), dp2.c[n].to_string(cfg.sig_digits),
                              dp2.coeffs.a_sq[n].to_string(cfg.sig_digits),
                              dp2.coeffs.b[n].to_string(cfg.sig_digits), res, bres});
        }
        emit(cfg, config_echo(cfg, "special"), t);
        return ok ? kExitOk : kExitVerificationFailure;
    }

    throw ValidityError("special tables require beta = 1/2 (closed form) or beta = 1 (dP-II reduction)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recurrence coefficients of generalized Charlier and Meixner orthogonal polynomials\n"
                 "on the lattices N, N+1-beta and their bi-lattice union, computed two independent\n"
                 "ways (nonlinear recurrence iteration and a moment-based Stieltjes procedure) with\n"
                 "certified arbitrary-precision arithmetic."};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string family = "charlier", a_text = "3", beta_text = "1/3", gamma_text, lattice = "plain",
                t_text = "1", t_grid = "0,1/10,1,10,100,inf", tail_eps_text;

    auto add_common = [&](CLI::App* sub, bool needs_n) {
        sub->add_option("--family", family, "charlier | meixner")->capture_default_str();
        sub->add_option("--a", a_text, "parameter a > 0, exact rational or decimal")->capture_default_str();
        sub->add_option("--beta", beta_text, "parameter beta, exact rational or decimal")->capture_default_str();
        sub->add_option("--gamma", gamma_text, "parameter gamma (meixner only)");
        sub->add_option("--lattice", lattice, "plain | shifted | bi")->capture_default_str();
        sub->add_option("--t", t_text, "bi-lattice mixture parameter, rational or 'inf'")->capture_default_str();
        if (needs_n) sub->add_option("--n", cfg.N, "highest coefficient index")->capture_default_str();
        sub->add_option("--digits", cfg.digits, "base working precision in decimal digits")->capture_default_str();
        sub->add_option("--loss-rate", cfg.loss_rate, "extra digits per index for the iteration")->capture_default_str();
        sub->add_option("--tail-eps", tail_eps_text, "relative series/truncation tolerance");
        sub->add_option("--sig", cfg.sig_digits, "significant digits in emitted numbers")->capture_default_str();
        sub->add_option("--format", cfg.format, "csv | json")->capture_default_str();
        sub->add_option("--out", cfg.out_path, "output path (default stdout)");
    };

    CLI::App* coeffs = app.add_subcommand("coeffs", "coefficient table from both computation routes");
    add_common(coeffs, true);
    CLI::App* verify = app.add_subcommand("verify", "run the verification battery for one configuration");
    add_common(verify, true);
    CLI::App* b0scan = app.add_subcommand("b0-scan", "initial condition b0 as a function of t");
    add_common(b0scan, false);
    b0scan->add_option("--t-grid", t_grid, "comma-separated t values, 'inf' allowed")->capture_default_str();
    CLI::App* special = app.add_subcommand("special", "beta = 1/2 closed form or beta = 1 reduction table");
    add_common(special, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        Family fam = parse_family(family);
        if (fam == Family::GeneralizedMeixner) {
            if (gamma_text.empty()) throw ValidityError("--gamma is required for the meixner family");
            cfg.params = FamilyParams::meixner(Rational::parse(a_text), Rational::parse(beta_text),
                                               Rational::parse(gamma_text));
        } else {
            cfg.params = FamilyParams::charlier(Rational::parse(a_text), Rational::parse(beta_text));
        }
        cfg.lattice = parse_lattice(lattice, t_text);
        if (!tail_eps_text.empty()) cfg.tail_eps = Rational::parse(tail_eps_text);
        if (cfg.N < 1) throw ValidityError("--n must be at least 1");

        if (coeffs->parsed()) return cmd_coeffs(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (b0scan->parsed()) return cmd_b0_scan(cfg, t_grid);
        if (special->parsed()) return cmd_special(cfg);
        return kExitUsage;
    } catch (const MonotonicityError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const SingularityError& e) {
        std::cerr << "numerical singularity: " << e.what() << "\n";
        return kExitSingularity;
    } catch (const PrecisionError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitSingularity;
    } catch (const RankError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitSingularity;
    } catch (const ZeroCountError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitSingularity;
    } catch (const Error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
