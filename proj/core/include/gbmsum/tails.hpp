#pragma once

#include "gbmsum/distributions.hpp"
#include "gbmsum/errors.hpp"
#include "gbmsum/grid.hpp"

namespace gbmsum {

// alpha = 1 - 2 rho / beta; requires rho < beta/2.
double exponent_infinite(const ReducedParams& rp);
// mu = (-rho + beta/2 + sqrt((rho - beta/2)^2 - 2 beta log(1-p))) / beta, for 0 <= p < 1.
double exponent_geometric(const ReducedParams& rp);

// Goldie constant c of P(X_inf > x) ~ c x^{-alpha}, from a solved X_inf density.
double tail_constant_infinite(const GridDensity& F, const ReducedParams& rp);
// Constant c+ of P(X_N > x) ~ c+ x^{-mu}, from a solved X_N density.
double tail_constant_geometric(const GridDensity& F, const ReducedParams& rp);

// Rough (exponent, constant) from the continuous-time limit; used to size grids.
TailAsymptote tail_estimate(const ReducedParams& rp);

enum class SumKind { infinite, geometric, finite };

// Limit of log P(X <= eps) / (log eps)^2 as eps -> 0.
double left_tail_coefficient(SumKind kind, const ReducedParams& rp);
// Limit of log P(X_n > x) / (log x)^2 as x -> inf for the n-term sum.
double right_tail_coefficient_finite(int n, const ReducedParams& rp);

// P(X <= eps) for X = A (1 + X') with X' ~ F (and, for p > 0, X = A with probability p).
// Uses the multiplier's analytic CDF, so it stays accurate far below the grid resolution.
double left_tail_cdf(const GridDensity& F, const ReducedParams& rp, double eps);

// Least-squares slope of log P(X <= eps) against (log eps)^2 on log-spaced eps in [lo, hi].
double fit_left_tail_slope(const GridDensity& F, const ReducedParams& rp, double eps_lo = 1e-4,
                           double eps_hi = 1e-2, int n_points = 21);

struct PlateauFit {
    double exponent = 0.0;   // fitted -d log S / d log x
    double constant = 0.0;   // mean of S(x) x^{exponent_ref}
    double variation = 0.0;  // (max - min) / mean of S(x) x^{exponent_ref}
};

// Fits the survival tail over the last decade of the grid (at least 20 points).
PlateauFit fit_tail_plateau(const GridDensity& F, double exponent_ref);
// Same fit over grid points with x in [x_lo, x_hi].
PlateauFit fit_tail_plateau(const GridDensity& F, double exponent_ref, double x_lo, double x_hi);

double shortfall_probability(const GridDensity& F, double K, double q);
// Continuous-time analogue: survival of the Yor law at K (1+q).
double shortfall_continuous(double sigma, double m, double lambda, double K, double q);

// K with constant K^{-exponent} = p_level.
double value_at_risk(const TailAsymptote& ta, double p_level);

struct VarResult {
    double threshold = 0.0;
    bool power_law_regime = true;  // false: K fell inside the body, grid inversion used
};

VarResult value_at_risk(const TailAsymptote& ta, double p_level, const GridDensity& F,
                        Diagnostics* diag = nullptr);

}  // namespace gbmsum
