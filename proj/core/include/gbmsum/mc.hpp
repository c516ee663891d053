#pragma once

#include "gbmsum/distributions.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace gbmsum {

struct FixedHorizon {
    int n = 1;
};
struct GeometricHorizon {
    double p = 0.1;
};
// weights[i] = P(N = i + 1)
struct GeneralHorizon {
    std::vector<double> weights;
};
using Horizon = std::variant<FixedHorizon, GeometricHorizon, GeneralHorizon>;

struct McConfig {
    std::size_t n_paths = 100000;
    std::uint64_t seed = 42;
    bool antithetic = true;
    Horizon horizon = FixedHorizon{1};
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

using Statistic = std::function<double(double)>;

// Simulates X_N = sum_{i=1}^N prod_{j<=i} A_j. Each path (or antithetic pair) draws from its
// own generator seeded from (seed, path index), so results do not depend on evaluation order.
// With antithetic pairing the standard error is over pair averages.
McEstimate simulate_sum(const ReducedParams& rp, const McConfig& cfg, const Statistic& statistic);
std::vector<McEstimate> simulate_sum(const ReducedParams& rp, const McConfig& cfg,
                                     const std::vector<Statistic>& statistics);

// Fixed horizon standing in for X_inf: smallest n with e^{n rho} < 1e-6 (1 - e^rho). rho < 0.
int perpetuity_horizon(const ReducedParams& rp);

struct TimeHorizon {
    std::optional<double> maturity;  // fixed T
    std::optional<double> lambda;    // T ~ Exp(lambda) per path
};

// Trapezoidal approximation of int_0^T exp(sigma W_t + (m - sigma^2/2) t) dt with
// `substeps` steps per path. cfg.horizon is ignored.
std::vector<McEstimate> simulate_time_integral(double sigma, double m, const TimeHorizon& horizon,
                                               int substeps, const McConfig& cfg,
                                               const std::vector<Statistic>& statistics);
McEstimate simulate_time_integral(double sigma, double m, const TimeHorizon& horizon, int substeps,
                                  const McConfig& cfg, const Statistic& statistic);

}  // namespace gbmsum
