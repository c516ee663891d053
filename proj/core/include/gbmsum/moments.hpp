#pragma once

#include "gbmsum/distributions.hpp"

#include <functional>
#include <vector>

namespace gbmsum {

// k -> E[A^k] for the one-period multiplier.
class MultiplierMoments {
public:
    static MultiplierMoments gbm(const ReducedParams& rp);
    // Exponential Levy multiplier: E[A^k] = exp(kappa(k) tau + m k tau). Requires kappa(0) = 0.
    static MultiplierMoments levy(std::function<double(double)> kappa, double m, double tau);

    double operator()(int k) const { return fn_(k); }

private:
    explicit MultiplierMoments(std::function<double(int)> fn) : fn_(std::move(fn)) {}
    std::function<double(int)> fn_;
};

// (1-p) E[A^k] < 1.
bool moment_exists(int k, const MultiplierMoments& mm, double p);

// E[X_N^k] for k = 0..kmax; p = 0 gives the perpetuity X_inf.
std::vector<double> moments_geometric(int kmax, const MultiplierMoments& mm, double p);

// E[X_inf^k], k = 0..kmax, as a sum over increasing index chains 0 = i_0 < ... < i_m = k.
std::vector<double> moments_infinite_product_form(int kmax, const MultiplierMoments& mm);

// Upper bound exp(beta n (n+1)/2 - n rho) on E[X_inf^{-n}].
double inverse_moment_bound(int n, const ReducedParams& rp);

// sum_{i=1}^n s0 e^{r tau i}
double mean_finite_sum(int n, double r, double tau, double s0);

}  // namespace gbmsum
