#pragma once

#include "gbmsum/distributions.hpp"
#include "gbmsum/errors.hpp"
#include "gbmsum/grid.hpp"

#include <optional>
#include <span>
#include <vector>

namespace gbmsum {

// Discretized operator (T F)(u) = e^{beta-rho} int N(w; w0(u), beta) F(w) dw with
// w0(u) = log(e^u - 1) + 3 beta/2 - rho, by the trapezoidal rule on a band of +-9 sqrt(beta)
// around w0. With tail_exponent set, the integral beyond u_max uses the power-law continuation
// anchored at the last grid value.
class KernelOperator {
public:
    KernelOperator(const Grid& grid, const ReducedParams& rp,
                   std::optional<double> tail_exponent = std::nullopt);

    std::vector<double> apply(std::span<const double> F) const;
    void apply(std::span<const double> F, std::span<double> out) const;

    const Grid& grid() const noexcept { return grid_; }
    // Gaussian width under-resolved: sqrt(beta) < 3h.
    bool coarse() const noexcept { return coarse_; }

private:
    struct Row {
        std::size_t first = 0;
        std::size_t count = 0;
        std::size_t offset = 0;
    };
    Grid grid_;
    bool coarse_ = false;
    std::vector<Row> rows_;
    std::vector<double> weights_;
};

// One application of the operator to F, keeping F's grid and tail model.
GridDensity apply_operator(const GridDensity& F, const ReducedParams& rp,
                           Diagnostics* diag = nullptr);

enum class InitKind { inverse_gamma, lognormal };

struct SolveOptions {
    double h = 0.01;
    std::optional<double> u_max;  // default: analytic tail mass beyond x_max below 1e-7
    double tol = 1e-8;
    // Relative change of the tail anchor between iterates. The sup-norm delta hardly sees
    // the far tail, which carries much of the mean when the tail exponent is near 1.
    double tail_tol = 1e-6;
    int max_iter = 500;
    InitKind init = InitKind::inverse_gamma;
};

struct SolveReport {
    int iterations = 0;
    int iterations_to_tol = 0;  // first n with delta_n <= tol
    double final_delta = 0.0;
    double normalization_drift = 0.0;
    double quadrature_bound = 0.0;
    double h = 0.0;
    double u_max = 0.0;
    bool grid_refined = false;
    std::vector<double> delta_trace;
};

struct SolveResult {
    GridDensity density;
    SolveReport report;
};

// Stationary law of X = A (1 + X). Requires rho < beta/2.
SolveResult solve_infinite(const ReducedParams& rp, const SolveOptions& opts = {},
                           Diagnostics* diag = nullptr);

// Law of X_N, N geometric with parameter p: F = p f_A + (1-p) T F.
SolveResult solve_geometric(const ReducedParams& rp, const SolveOptions& opts = {},
                            Diagnostics* diag = nullptr);

// Trapezoidal error bound h^{2k+1} M zeta(2k+1) / (2^{2k} pi^{2k+1}),
// M = int |d^{2k+1}/du^{2k+1} (F(u) e^u)| du by finite differences.
double quadrature_error_bound(const GridDensity& F, int k = 1, Diagnostics* diag = nullptr);

// Multiplier log-normal density on a grid, F(u) = f_A(e^u - 1).
GridDensity lognormal_density(const Grid& grid, const ReducedParams& rp);
// Inverse-gamma approximation of X_inf (shape 1 - 2 rho/beta, scale 2/beta).
GridDensity inverse_gamma_density(const Grid& grid, const ReducedParams& rp);

// Continuous-time (Yor) approximation of X_N, used to start the geometric iteration.
GridDensity yor_density(const Grid& grid, const ReducedParams& rp);

// Step h after the sqrt(beta) >= 3h guard.
double guarded_step(double h, double beta);

}  // namespace gbmsum
