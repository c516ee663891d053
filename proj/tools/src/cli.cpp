#include "gbmsum_cli/cli.hpp"

#include "gbmsum/distributions.hpp"
#include "gbmsum/errors.hpp"
#include "gbmsum/mc.hpp"
#include "gbmsum/moments.hpp"
#include "gbmsum/pricing.hpp"
#include "gbmsum/solver.hpp"
#include "gbmsum/tails.hpp"
#include "gbmsum/version.hpp"
#include "gbmsum_cli/manifest.hpp"
#include "gbmsum_cli/serialize.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

namespace gbmsum::cli {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct Common {
    std::string out_dir;
    bool strict = false;
};

std::filesystem::path resolve_out_dir(const Common& c) {
    if (!c.out_dir.empty()) return c.out_dir;
    if (const char* env = std::getenv("GBMSUM_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

std::optional<double> opt_value(double v) {
    return std::isnan(v) ? std::nullopt : std::optional<double>(v);
}

json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return json::parse(is);
}

// A scenario file is either a bare array or {"scenarios": [...]}.
json scenario_list(const json& j) {
    if (j.is_array()) return j;
    if (j.is_object() && j.contains("scenarios")) return j.at("scenarios");
    throw std::runtime_error("scenario file must hold an array or a 'scenarios' array");
}

bool is_truncation_warning(const std::string& w) {
    return w.find("capped") != std::string::npos || w.find("truncated tail") != std::string::npos;
}

int accuracy_code(const Common& c, const Diagnostics& diag) {
    if (!c.strict) return exit_ok;
    for (const auto& w : diag.warnings) {
        if (is_truncation_warning(w)) return exit_accuracy;
    }
    return exit_ok;
}

void print_warnings(std::ostream& err, const Diagnostics& diag) {
    for (const auto& w : diag.warnings) err << "warning: " << w << '\n';
}

// Runs a command body and maps library exceptions onto exit codes. The manifest, once
// created by the body, is written whatever the outcome.
int guarded(std::ostream& err, std::unique_ptr<RunManifest>& manifest,
            const std::function<int()>& body) {
    int code = exit_ok;
    try {
        code = body();
    } catch (const InfeasibleParameters& e) {
        err << "infeasible parameters: " << e.what() << '\n';
        code = exit_infeasible;
    } catch (const NonConvergence& e) {
        err << "no convergence: " << e.what() << '\n';
        code = exit_nonconvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        code = exit_error;
    }
    if (manifest) {
        try {
            manifest->finish(code);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            if (code == exit_ok) code = exit_error;
        }
    }
    return code;
}

SolveResult solve_for(const ReducedParams& rp, const SolveOptions& o, Diagnostics* diag) {
    return rp.p == 0.0 ? solve_infinite(rp, o, diag) : solve_geometric(rp, o, diag);
}

std::optional<double> safe_mean(const GridDensity& F) {
    try {
        return expectation(F, Payoff::power(1.0));
    } catch (const DivergentExpectation&) {
        return std::nullopt;
    }
}

// Mean of X_N = sum_{k<=N} A_1...A_k for geometric N (p = 0 gives the perpetuity).
double mean_geometric_sum(const ReducedParams& rp) {
    double a = std::exp(rp.rho);
    if (!((1.0 - rp.p) * a < 1.0)) throw DivergentExpectation("E[X_N] is infinite for these parameters");
    return a / (1.0 - (1.0 - rp.p) * a);
}

// ---------------------------------------------------------------------------------------------

struct DensityArgs {
    double beta = kUnset;
    double rho = kUnset;
    double p = 0.0;
    double h = 0.01;
    double umax = kUnset;
    double tol = 1e-8;
    double tail_tol = 1e-6;
    int max_iter = 500;
    InitKind init = InitKind::inverse_gamma;
};

int cmd_density(const DensityArgs& a, const Common& c, std::ostream& out, std::ostream& err,
                std::unique_ptr<RunManifest>& manifest) {
    json params{{"beta", a.beta}, {"rho", a.rho}, {"p", a.p},
                {"h", a.h},       {"u_max", opt_value(a.umax) ? json(a.umax) : json(nullptr)},
                {"tol", a.tol},   {"tail_tol", a.tail_tol}, {"max_iter", a.max_iter},
                {"init", a.init == InitKind::inverse_gamma ? "inverse-gamma" : "lognormal"}};
    manifest = std::make_unique<RunManifest>("density", params, resolve_out_dir(c));

    ReducedParams rp = make_reduced(a.beta, a.rho, a.p);
    SolveOptions o;
    o.h = a.h;
    o.u_max = opt_value(a.umax);
    o.tol = a.tol;
    o.tail_tol = a.tail_tol;
    o.max_iter = a.max_iter;
    o.init = a.init;

    Diagnostics diag;
    SolveResult r = solve_for(rp, o, &diag);

    // Continuous-time counterpart with tau = 1: sigma^2 = beta, m = rho, lambda = p.
    std::function<double(double)> comparison;
    std::string comparison_kind;
    const double sigma = std::sqrt(rp.beta);
    if (rp.p == 1.0) {
        comparison = [rp](double x) { return multiplier_pdf(x, rp); };
        comparison_kind = "lognormal_exact";
    } else if (rp.p == 0.0) {
        comparison = [sigma, rp](double x) { return inv_gamma_pdf(x, sigma, rp.rho); };
        comparison_kind = "inverse_gamma_limit";
    } else {
        comparison = [sigma, rp](double x) { return yor_pdf(x, sigma, rp.rho, rp.p); };
        comparison_kind = "yor_limit";
    }

    std::ostringstream csv;
    write_density_csv(csv, r.density, comparison);
    manifest->write_output("density.csv", csv.str());

    int modes = count_modes(r.density.values);
    std::optional<double> mean = safe_mean(r.density);
    json notes = json::array();
    if (modes > 1) {
        notes.push_back("density has " + std::to_string(modes) +
                        " local maxima; the leftmost comes from paths stopped after the first period");
    }
    json doc{{"parameters", params},
             {"report", to_json(r.report)},
             {"tail", r.density.tail ? to_json(*r.density.tail) : json(nullptr)},
             {"mass", mass(r.density)},
             {"mean", mean ? json(*mean) : json(nullptr)},
             {"comparison_column", comparison_kind},
             {"modes", modes},
             {"notes", notes},
             {"warnings", diag.warnings}};
    manifest->write_output("density.json", doc.dump(2) + "\n");

    out << "iterations " << r.report.iterations << " (delta <= tol at "
        << r.report.iterations_to_tol << ")\n";
    out << "final_delta " << format_fixed(r.report.final_delta * 1e9, 3) << "e-9\n";
    if (mean) out << "mean " << format_fixed(*mean, 6) << '\n';
    out << "modes " << modes << '\n';
    for (const auto& n : notes) out << "note: " << n.get<std::string>() << '\n';
    print_warnings(err, diag);
    return accuracy_code(c, diag);
}

// ---------------------------------------------------------------------------------------------

struct AsianArgs {
    AsianSpec spec;
    bool put = false;
    std::size_t mc_paths = 0;
    std::uint64_t seed = 42;
    double h = 0.01;
    double umax = kUnset;
    std::string config;
};

int cmd_asian(const AsianArgs& a, const Common& c, std::ostream& out, std::ostream& err,
              std::unique_ptr<RunManifest>& manifest) {
    std::vector<AsianSpec> specs;
    json params;
    if (!a.config.empty()) {
        for (const auto& s : scenario_list(read_json_file(a.config))) {
            specs.push_back(asian_spec_from_json(s));
        }
        params = {{"config", a.config}};
    } else {
        specs.push_back(a.spec);
        params = to_json(a.spec);
    }
    params["put"] = a.put;
    params["h"] = a.h;
    if (opt_value(a.umax)) params["u_max"] = a.umax;
    params["mc_paths"] = a.mc_paths;
    manifest = std::make_unique<RunManifest>("asian", params, resolve_out_dir(c));
    if (a.mc_paths > 0) manifest->add_seed(a.seed);

    Diagnostics diag;
    std::ostringstream csv;
    csv << "n,S0," << (a.put ? "\"P(K,T)\"" : "\"C(K,T)\"") << '\n';
    json rows = json::array();
    bool any_truncation = false;
    for (const AsianSpec& s : specs) {
        AsianOptions o;
        o.h = a.h;
        o.u_max = opt_value(a.umax);
        AsianQuote q = price_asian(s, o, &diag);
        any_truncation = any_truncation || q.truncation_dominated;
        double price = a.put ? q.put : q.call;
        csv << s.n_fixings << ',' << format_fixed(s.s0, 2) << ',' << format_fixed(price, 6) << '\n';

        json row{{"spec", to_json(s)}, {"quote", to_json(q)}};
        if (a.mc_paths > 0 && s.sigma > 0.0) {
            McConfig cfg;
            cfg.n_paths = a.mc_paths;
            cfg.seed = a.seed;
            cfg.horizon = FixedHorizon{s.n_fixings};
            const double disc = std::exp(-s.rate * s.maturity);
            const double scale = s.s0 / s.n_fixings;
            const double K = s.strike;
            std::vector<Statistic> stats{
                [=](double x) { return disc * std::max(scale * x - K, 0.0); },
                [=](double x) { return disc * std::max(K - scale * x, 0.0); },
                [=](double x) { return scale * x; }};
            auto est = simulate_sum(s.reduced(), cfg, stats);
            row["mc"] = {{"call", to_json(est[0])}, {"put", to_json(est[1])},
                         {"mean", to_json(est[2])}};
        }
        rows.push_back(row);
        out << "n=" << s.n_fixings << " S0=" << format_fixed(s.s0, 2) << ' '
            << (a.put ? "put " : "call ") << format_fixed(price, 4)
            << " parity_gap " << q.parity_gap << '\n';
    }
    manifest->write_output("asian.csv", csv.str());
    manifest->write_output("asian.json", json{{"results", rows}, {"warnings", diag.warnings}}.dump(2) + "\n");
    print_warnings(err, diag);
    if (c.strict && any_truncation) return exit_accuracy;
    return exit_ok;
}

// ---------------------------------------------------------------------------------------------

struct AnnuityArgs {
    double beta = kUnset;
    double rho = kUnset;
    double p = kUnset;
    std::vector<double> q_list{0.0};
    double var_level = kUnset;
    double h = 0.01;
    std::string config;
};

int cmd_annuity(const AnnuityArgs& a, const Common& c, std::ostream& out, std::ostream& err,
                std::unique_ptr<RunManifest>& manifest) {
    std::vector<AnnuityRequest> reqs;
    json params;
    if (!a.config.empty()) {
        for (const auto& s : scenario_list(read_json_file(a.config))) {
            reqs.push_back(annuity_request_from_json(s));
        }
        params = {{"config", a.config}};
    } else {
        if (std::isnan(a.beta) || std::isnan(a.rho) || std::isnan(a.p)) {
            throw DomainError("annuity needs --beta, --rho and --p (or --config)");
        }
        AnnuityRequest r;
        r.beta = a.beta;
        r.rho = a.rho;
        r.p = a.p;
        r.q_list = a.q_list;
        r.var_level = opt_value(a.var_level);
        reqs.push_back(r);
        params = {{"beta", a.beta}, {"rho", a.rho}, {"p", a.p}, {"q_list", a.q_list}};
        if (r.var_level) params["var_level"] = *r.var_level;
    }
    params["h"] = a.h;
    manifest = std::make_unique<RunManifest>("annuity", params, resolve_out_dir(c));

    Diagnostics diag;
    std::ostringstream csv;
    csv << "beta,rho,p,E[X_N],q,(1+q)K,P_qK,P_qK^tau=0\n";
    json rows = json::array();
    for (const AnnuityRequest& req : reqs) {
        ReducedParams rp = make_reduced(req.beta, req.rho, req.p);
        double K = mean_geometric_sum(rp);
        SolveOptions o;
        o.h = a.h;
        SolveResult r = solve_for(rp, o, &diag);

        RiskRecord risk;
        risk.method_flags.push_back("grid_density");
        risk.method_flags.push_back("continuous_closed_form");
        if (r.density.tail) {
            risk.exponent = r.density.tail->exponent;
            risk.constant = r.density.tail->constant;
        }
        const double sigma = std::sqrt(rp.beta);
        for (double q : req.q_list) {
            double pd = shortfall_probability(r.density, K, q);
            double pc = shortfall_continuous(sigma, rp.rho, rp.p, K, q);
            risk.shortfall.push_back(pd);
            risk.shortfall_continuous.push_back(pc);
            csv << format_fixed(rp.beta, 4) << ',' << format_fixed(rp.rho, 4) << ','
                << format_fixed(rp.p, 4) << ',' << format_fixed(K, 6) << ','
                << format_fixed(q, 4) << ',' << format_fixed((1.0 + q) * K, 6) << ','
                << format_fixed(pd, 6) << ',' << format_fixed(pc, 6) << '\n';
            out << "beta=" << rp.beta << " rho=" << rp.rho << " p=" << rp.p << " q=" << q
                << " P_qK " << format_fixed(pd, 5) << " continuous " << format_fixed(pc, 5)
                << '\n';
        }
        if (req.var_level) {
            if (!r.density.tail) throw DomainError("VaR needs a power-law tail (p < 1)");
            VarResult v = value_at_risk(*r.density.tail, *req.var_level, r.density, &diag);
            risk.var_threshold = v.threshold;
            risk.method_flags.push_back(v.power_law_regime ? "var_power_law" : "var_grid_inversion");
            out << "VaR(" << *req.var_level << ") " << format_fixed(v.threshold, 6) << '\n';
        }
        auto mean_numeric = safe_mean(r.density);
        rows.push_back({{"parameters", {{"beta", rp.beta}, {"rho", rp.rho}, {"p", rp.p}}},
                        {"q_list", req.q_list},
                        {"mean_exact", K},
                        {"mean_numeric", mean_numeric ? json(*mean_numeric) : json(nullptr)},
                        {"risk", to_json(risk)},
                        {"report", to_json(r.report)}});
    }
    manifest->write_output("annuity.csv", csv.str());
    manifest->write_output("annuity.json",
                           json{{"results", rows}, {"warnings", diag.warnings}}.dump(2) + "\n");
    print_warnings(err, diag);
    return accuracy_code(c, diag);
}

// ---------------------------------------------------------------------------------------------

struct CalibrateArgs {
    double age = 65.0;
    MatchMethod method = MatchMethod::life_expectancy;
    MakehamMortality mk;
};

int cmd_calibrate(const CalibrateArgs& a, const Common& c, std::ostream& out,
                  std::unique_ptr<RunManifest>& manifest) {
    const char* method =
        a.method == MatchMethod::life_expectancy ? "life-expectancy" : "hazard";
    json params{{"age", a.age},
                {"method", method},
                {"makeham", {{"A", a.mk.A}, {"B", a.mk.B}, {"beta", a.mk.beta_mk}}}};
    manifest = std::make_unique<RunManifest>("calibrate", params, resolve_out_dir(c));
    double p = makeham_match_p(a.age, a.method, a.mk);
    manifest->write_output("calibrate.json", json{{"parameters", params}, {"p", p}}.dump(2) + "\n");
    out << "p " << format_fixed(p, 6) << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------------------------

struct MomentsArgs {
    double beta = kUnset;
    double rho = kUnset;
    double p = 0.0;
    int kmax = 4;
};

int cmd_moments(const MomentsArgs& a, const Common& c, std::ostream& out,
                std::unique_ptr<RunManifest>& manifest) {
    json params{{"beta", a.beta}, {"rho", a.rho}, {"p", a.p}, {"kmax", a.kmax}};
    manifest = std::make_unique<RunManifest>("moments", params, resolve_out_dir(c));
    ReducedParams rp = make_reduced(a.beta, a.rho, a.p);
    auto mm = MultiplierMoments::gbm(rp);
    auto rec = moments_geometric(a.kmax, mm, rp.p);
    std::vector<double> prod;
    if (rp.p == 0.0) prod = moments_infinite_product_form(a.kmax, mm);

    std::ostringstream csv;
    csv << "k,moment" << (prod.empty() ? "" : ",product_form") << '\n';
    char buf[64];
    for (int k = 1; k <= a.kmax; ++k) {
        std::snprintf(buf, sizeof buf, "%.12e", rec[k]);
        csv << k << ',' << buf;
        if (!prod.empty()) {
            std::snprintf(buf, sizeof buf, "%.12e", prod[k]);
            csv << ',' << buf;
        }
        csv << '\n';
        std::snprintf(buf, sizeof buf, "%.10g", rec[k]);
        out << "E[X^" << k << "] " << buf << '\n';
    }
    manifest->write_output("moments.csv", csv.str());
    return exit_ok;
}

// ---------------------------------------------------------------------------------------------

struct McArgs {
    double beta = kUnset;
    double rho = kUnset;
    double p = 0.0;
    std::size_t paths = 100000;
    std::uint64_t seed = 42;
    std::string horizon = "auto";
    int n = 1;
    int kmax = 2;
    bool no_antithetic = false;
};

int cmd_mc(const McArgs& a, const Common& c, std::ostream& out,
           std::unique_ptr<RunManifest>& manifest) {
    json params{{"beta", a.beta},   {"rho", a.rho},         {"p", a.p},
                {"paths", a.paths}, {"horizon", a.horizon}, {"n", a.n},
                {"kmax", a.kmax},   {"antithetic", !a.no_antithetic}};
    manifest = std::make_unique<RunManifest>("mc", params, resolve_out_dir(c));
    manifest->add_seed(a.seed);
    ReducedParams rp = make_reduced(a.beta, a.rho, a.p);

    McConfig cfg;
    cfg.n_paths = a.paths;
    cfg.seed = a.seed;
    cfg.antithetic = !a.no_antithetic;
    std::string kind = a.horizon;
    if (kind == "auto") kind = rp.p > 0.0 ? "geometric" : "perpetuity";
    json horizon{{"kind", kind}};
    if (kind == "fixed") {
        cfg.horizon = FixedHorizon{a.n};
        horizon["n"] = a.n;
    } else if (kind == "geometric") {
        if (!(rp.p > 0.0)) throw DomainError("geometric horizon needs --p > 0");
        cfg.horizon = GeometricHorizon{rp.p};
    } else if (kind == "perpetuity") {
        int n = perpetuity_horizon(rp);
        cfg.horizon = FixedHorizon{n};
        horizon["n"] = n;
    } else {
        throw DomainError("unknown horizon '" + kind + "'");
    }
    if (a.kmax < 1) throw DomainError("kmax must be >= 1");
    std::vector<Statistic> stats;
    for (int k = 1; k <= a.kmax; ++k) {
        stats.push_back([k](double x) { return std::pow(x, k); });
    }
    auto est = simulate_sum(rp, cfg, stats);
    json moments = json::array();
    char buf[96];
    for (int k = 1; k <= a.kmax; ++k) {
        json e = to_json(est[k - 1]);
        e["k"] = k;
        moments.push_back(e);
        std::snprintf(buf, sizeof buf, "E[X^%d] %.10g (se %.3g)", k, est[k - 1].value,
                      est[k - 1].std_error);
        out << buf << '\n';
    }
    manifest->write_output("mc.json", json{{"parameters", params},
                                           {"seed", a.seed},
                                           {"horizon", horizon},
                                           {"moments", moments}}
                                          .dump(2) + "\n");
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Distributions, tails and prices of discrete sums of geometric Brownian motions",
                 "gbmsum"};
    // --h is the grid step, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", std::string(GBMSUM_VERSION));
    app.require_subcommand(1);

    Common common;
    app.add_option("--out", common.out_dir, "Output directory (default $GBMSUM_OUTPUT_DIR or .)");
    app.add_flag("--strict", common.strict, "Exit with code 4 on truncation warnings");
    app.fallthrough();

    const std::map<std::string, InitKind> init_map{{"inverse-gamma", InitKind::inverse_gamma},
                                                   {"lognormal", InitKind::lognormal}};
    const std::map<std::string, MatchMethod> method_map{
        {"life-expectancy", MatchMethod::life_expectancy}, {"hazard", MatchMethod::hazard_rate}};

    DensityArgs da;
    auto* density = app.add_subcommand("density", "Solve for the law of X_inf or X_N on a grid");
    density->add_option("--beta", da.beta, "sigma^2 tau")->required();
    density->add_option("--rho", da.rho, "m tau")->required();
    density->add_option("--p", da.p, "Stopping probability per period (0 = perpetuity)")
        ->capture_default_str();
    density->add_option("--h", da.h, "Grid step in u = log(1+x)")->capture_default_str();
    density->add_option("--umax", da.umax, "Grid extent in u");
    density->add_option("--tol", da.tol)->capture_default_str();
    density->add_option("--tail-tol", da.tail_tol)->capture_default_str();
    density->add_option("--max-iter", da.max_iter)->capture_default_str();
    density->add_option("--init", da.init, "Starting density")
        ->transform(CLI::CheckedTransformer(init_map));

    AsianArgs aa;
    auto* asian = app.add_subcommand("asian", "Price discretely monitored arithmetic Asian options");
    asian->add_option("--s0", aa.spec.s0)->capture_default_str();
    asian->add_option("--strike", aa.spec.strike)->capture_default_str();
    asian->add_option("--rate", aa.spec.rate)->capture_default_str();
    asian->add_option("--div", aa.spec.dividend)->capture_default_str();
    asian->add_option("--sigma", aa.spec.sigma)->capture_default_str();
    asian->add_option("--maturity", aa.spec.maturity)->capture_default_str();
    asian->add_option("--fixings", aa.spec.n_fixings)->capture_default_str();
    asian->add_flag("--put", aa.put, "Report the put in the CSV");
    asian->add_option("--mc-check", aa.mc_paths, "Monte Carlo paths for a cross-check");
    asian->add_option("--seed", aa.seed)->capture_default_str();
    asian->add_option("--h", aa.h)->capture_default_str();
    asian->add_option("--umax", aa.umax, "Fixed grid extent (default: grown until truncation is negligible)");
    asian->add_option("--config", aa.config, "JSON scenario list")->check(CLI::ExistingFile);

    AnnuityArgs na;
    auto* annuity = app.add_subcommand("annuity", "Shortfall probabilities, tail and VaR of X_N");
    annuity->add_option("--beta", na.beta);
    annuity->add_option("--rho", na.rho);
    annuity->add_option("--p", na.p);
    annuity->add_option("--q-list", na.q_list, "Comma separated q values")->delimiter(',');
    annuity->add_option("--var-level", na.var_level, "Tail probability for VaR");
    annuity->add_option("--h", na.h)->capture_default_str();
    annuity->add_option("--config", na.config, "JSON scenario list")->check(CLI::ExistingFile);

    CalibrateArgs ca;
    auto* calibrate = app.add_subcommand("calibrate", "Match geometric p to Makeham mortality");
    calibrate->add_option("--age", ca.age)->capture_default_str();
    calibrate->add_option("--method", ca.method)
        ->transform(CLI::CheckedTransformer(method_map))
        ->capture_default_str();
    calibrate->add_option("--makeham-a", ca.mk.A)->capture_default_str();
    calibrate->add_option("--makeham-b", ca.mk.B)->capture_default_str();
    calibrate->add_option("--makeham-beta", ca.mk.beta_mk)->capture_default_str();

    MomentsArgs ma;
    auto* moments = app.add_subcommand("moments", "Integer moments from the recursion");
    moments->add_option("--beta", ma.beta)->required();
    moments->add_option("--rho", ma.rho)->required();
    moments->add_option("--p", ma.p)->capture_default_str();
    moments->add_option("--kmax", ma.kmax)->capture_default_str();

    McArgs mca;
    auto* mc = app.add_subcommand("mc", "Monte Carlo moments of the discrete sum");
    mc->add_option("--beta", mca.beta)->required();
    mc->add_option("--rho", mca.rho)->required();
    mc->add_option("--p", mca.p)->capture_default_str();
    mc->add_option("--paths", mca.paths)->capture_default_str();
    mc->add_option("--seed", mca.seed)->capture_default_str();
    mc->add_option("--horizon", mca.horizon, "auto, fixed, geometric or perpetuity")
        ->check(CLI::IsMember({"auto", "fixed", "geometric", "perpetuity"}))
        ->capture_default_str();
    mc->add_option("--n", mca.n, "Number of terms for the fixed horizon")->capture_default_str();
    mc->add_option("--kmax", mca.kmax)->capture_default_str();
    mc->add_flag("--no-antithetic", mca.no_antithetic);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << GBMSUM_VERSION << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return exit_error;
    }

    std::unique_ptr<RunManifest> manifest;
    if (density->parsed()) {
        return guarded(err, manifest, [&] { return cmd_density(da, common, out, err, manifest); });
    }
    if (asian->parsed()) {
        return guarded(err, manifest, [&] { return cmd_asian(aa, common, out, err, manifest); });
    }
    if (annuity->parsed()) {
        return guarded(err, manifest, [&] { return cmd_annuity(na, common, out, err, manifest); });
    }
    if (calibrate->parsed()) {
        return guarded(err, manifest, [&] { return cmd_calibrate(ca, common, out, manifest); });
    }
    if (moments->parsed()) {
        return guarded(err, manifest, [&] { return cmd_moments(ma, common, out, manifest); });
    }
    if (mc->parsed()) {
        return guarded(err, manifest, [&] { return cmd_mc(mca, common, out, manifest); });
    }
    return exit_error;
}

}  // namespace gbmsum::cli
