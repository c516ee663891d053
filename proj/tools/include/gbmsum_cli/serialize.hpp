#pragma once

#include "gbmsum/grid.hpp"
#include "gbmsum/mc.hpp"
#include "gbmsum/pricing.hpp"
#include "gbmsum/solver.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gbmsum::cli {

using json = nlohmann::ordered_json;

// Columns u, x, F, f (density in x, equal to F at that x) and optionally a comparison column.
void write_density_csv(std::ostream& os, const GridDensity& F,
                       const std::function<double(double)>& comparison = {},
                       const std::string& comparison_name = "f_continuous");

json to_json(const SolveReport& r);
json to_json(const TailAsymptote& t);
json to_json(const McEstimate& e);
json to_json(const AsianSpec& s);
json to_json(const AsianQuote& q);

AsianSpec asian_spec_from_json(const json& j);

// One annuity-risk scenario: reduced parameters and the q values to evaluate.
struct AnnuityRequest {
    double beta = 1.0;
    double rho = 0.0;
    double p = 0.1;
    std::vector<double> q_list{0.0};
    std::optional<double> var_level;
};
AnnuityRequest annuity_request_from_json(const json& j);

struct RiskRecord {
    std::optional<double> exponent;
    std::optional<double> constant;
    std::vector<double> shortfall;
    std::vector<double> shortfall_continuous;
    std::optional<double> var_threshold;
    std::vector<std::string> method_flags;
};
json to_json(const RiskRecord& r);

// Number of strict local maxima of v that exceed 1e-9 of its peak.
int count_modes(const std::vector<double>& v);

std::string format_fixed(double v, int digits);

}  // namespace gbmsum::cli
