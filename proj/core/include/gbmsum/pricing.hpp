#pragma once

#include "gbmsum/distributions.hpp"
#include "gbmsum/errors.hpp"
#include "gbmsum/grid.hpp"
#include "gbmsum/solver.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace gbmsum {

// f_n = T^{n-1} f_1 with f_1 the multiplier density; no tail continuation.
GridDensity finite_sum_density(int n, const ReducedParams& rp, const Grid& grid);

// Same law through the alternating expansion f_n = sum_{k<n} (-1)^k/k! d_k with
// d_0 = f_1, d_1 = (1 - T) f_1, d_k = -k T d_{k-1}. k_terms < n truncates the sum.
GridDensity finite_sum_density_derivative_form(int n, const ReducedParams& rp, const Grid& grid,
                                               std::optional<int> k_terms = std::nullopt,
                                               Diagnostics* diag = nullptr);

struct AsianSpec {
    double s0 = 100.0;
    double strike = 100.0;
    double rate = 0.0;
    double dividend = 0.0;
    double sigma = 0.2;
    double maturity = 1.0;
    int n_fixings = 1;

    double tau() const { return maturity / n_fixings; }
    ReducedParams reduced() const;
};

struct AsianOptions {
    double h = 0.01;
    std::optional<double> u_max;
    double truncation_rel = 1e-6;  // grow u_max until truncated payoff <= this * price
};

struct AsianQuote {
    double call = 0.0;
    double put = 0.0;
    double mean_exact = 0.0;    // E[A_n], A_n = (1/n) sum S_{t_i}
    double mean_numeric = 0.0;  // same from the grid density
    double parity_gap = 0.0;    // (C - P) - e^{-rT}(E[A_n] - K)
    double parity_gap_continuous = 0.0;  // with the continuous-average mean instead
    double h = 0.0;
    double u_max = 0.0;
    bool truncation_dominated = false;
};

void validate(const AsianSpec& spec);
AsianQuote price_asian(const AsianSpec& spec, const AsianOptions& opts = {},
                       Diagnostics* diag = nullptr);
double asian_call(const AsianSpec& spec);
double asian_put(const AsianSpec& spec);
double put_call_parity_gap(const AsianSpec& spec);

// E[(X_N - kappa)^+] for geometric N. Requires 0 < p < 1 and a tail exponent above 1.
double geometric_maturity_option(const ReducedParams& rp, double kappa,
                                 const SolveOptions& opts = {});

struct GeometricMortality {
    double p = 0.0;
};
// weights[i] = P(N = i + 1) up to the horizon cap weights.size().
struct GeneralMortality {
    std::vector<double> weights;
};
struct MakehamMortality {
    double A = 0.0007;
    double B = 5e-5;
    double beta_mk = 0.0921;
};
using MortalityModel = std::variant<GeometricMortality, GeneralMortality, MakehamMortality>;

// Horizon weights truncated at `cap` and renormalized to sum to 1. For Makeham the horizon is
// the number of whole years survived past age a0 plus one.
GeneralMortality horizon_weights(const MortalityModel& model, int cap, double a0 = 65.0);

// sum_n p_n f_n with one running operator pass. With tail_exponent set the operator uses the
// power-law continuation beyond u_max.
GridDensity mixture_density(const GeneralMortality& mortality, const ReducedParams& rp,
                            const Grid& grid, std::optional<double> tail_exponent = std::nullopt);

enum class MatchMethod { life_expectancy, hazard_rate };

// Makeham survival probability from age a0 to age a.
double makeham_survival(double a, double a0, const MakehamMortality& mk);

// Geometric p matched to Makeham mortality at age a0: either 1/p equals the remaining life
// expectancy, or 1 - p equals the one-year survival probability.
double makeham_match_p(double a0, MatchMethod method, const MakehamMortality& mk = {});

}  // namespace gbmsum
