#include "gbmsum_cli/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace gbmsum::cli {

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void write_density_csv(std::ostream& os, const GridDensity& F,
                       const std::function<double(double)>& comparison,
                       const std::string& comparison_name) {
    os << "u,x,F,f";
    if (comparison) os << ',' << comparison_name;
    os << '\n';
    char buf[256];
    for (std::size_t j = 0; j < F.grid.n_points; ++j) {
        double x = F.grid.x(j);
        int n = std::snprintf(buf, sizeof buf, "%.6f,%.10e,%.10e,%.10e", F.grid.u(j), x,
                              F.values[j], F.values[j]);
        os.write(buf, n);
        if (comparison) {
            n = std::snprintf(buf, sizeof buf, ",%.10e", j == 0 ? 0.0 : comparison(x));
            os.write(buf, n);
        }
        os << '\n';
    }
}

json to_json(const SolveReport& r) {
    return json{{"iterations", r.iterations},
                {"iterations_to_tol", r.iterations_to_tol},
                {"final_delta", r.final_delta},
                {"normalization_drift", r.normalization_drift},
                {"quadrature_bound", r.quadrature_bound},
                {"h", r.h},
                {"u_max", r.u_max},
                {"grid_refined", r.grid_refined},
                {"delta_trace", r.delta_trace}};
}

json to_json(const TailAsymptote& t) {
    const char* regime = t.regime == TailRegime::infinite_sum    ? "infinite_sum"
                         : t.regime == TailRegime::geometric_sum ? "geometric_sum"
                                                                  : "continuous_limit";
    return json{{"exponent", t.exponent}, {"constant", t.constant}, {"regime", regime}};
}

json to_json(const McEstimate& e) {
    return json{{"value", e.value}, {"std_error", e.std_error}, {"n_paths", e.n_paths}};
}

json to_json(const AsianSpec& s) {
    return json{{"s0", s.s0},         {"strike", s.strike},     {"rate", s.rate},
                {"dividend", s.dividend}, {"sigma", s.sigma}, {"maturity", s.maturity},
                {"n_fixings", s.n_fixings}};
}

json to_json(const AsianQuote& q) {
    return json{{"call", q.call},
                {"put", q.put},
                {"mean_exact", q.mean_exact},
                {"mean_numeric", q.mean_numeric},
                {"parity_gap", q.parity_gap},
                {"parity_gap_continuous", q.parity_gap_continuous},
                {"h", q.h},
                {"u_max", q.u_max},
                {"truncation_dominated", q.truncation_dominated}};
}

AsianSpec asian_spec_from_json(const json& j) {
    AsianSpec s;
    s.s0 = j.at("s0").get<double>();
    s.strike = j.at("strike").get<double>();
    s.rate = j.value("rate", 0.0);
    s.dividend = j.value("dividend", 0.0);
    s.sigma = j.at("sigma").get<double>();
    s.maturity = j.at("maturity").get<double>();
    s.n_fixings = j.at("n_fixings").get<int>();
    return s;
}

AnnuityRequest annuity_request_from_json(const json& j) {
    AnnuityRequest r;
    r.beta = j.at("beta").get<double>();
    r.rho = j.at("rho").get<double>();
    r.p = j.at("p").get<double>();
    if (j.contains("q_list")) {
        r.q_list = j.at("q_list").get<std::vector<double>>();
    } else if (j.contains("q")) {
        r.q_list = {j.at("q").get<double>()};
    }
    if (j.contains("var_level")) r.var_level = j.at("var_level").get<double>();
    return r;
}

json to_json(const RiskRecord& r) {
    return json{{"exponent", optional_number(r.exponent)},
                {"constant", optional_number(r.constant)},
                {"shortfall", r.shortfall},
                {"shortfall_continuous", r.shortfall_continuous},
                {"var_threshold", optional_number(r.var_threshold)},
                {"method_flags", r.method_flags}};
}

int count_modes(const std::vector<double>& v) {
    if (v.size() < 3) return 0;
    double peak = *std::max_element(v.begin(), v.end());
    int modes = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > 1e-9 * peak) ++modes;
    }
    return modes;
}

}  // namespace gbmsum::cli
