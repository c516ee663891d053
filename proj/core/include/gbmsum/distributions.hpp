#pragma once

namespace gbmsum {

struct ModelParams {
    double sigma = 0.0;   // volatility per sqrt(time)
    double m = 0.0;       // drift per unit time
    double tau = 1.0;     // time step
    double lambda = 0.0;  // mortality intensity per unit time
};

// Dimensionless parameters beta = sigma^2 tau, rho = m tau, p = per-period stopping probability.
struct ReducedParams {
    double beta = 0.0;
    double rho = 0.0;
    double p = 0.0;

    bool perpetuity_feasible() const noexcept { return rho < 0.5 * beta; }
};

// Validating constructor for ReducedParams.
ReducedParams make_reduced(double beta, double rho, double p = 0.0);

ReducedParams reduce(const ModelParams& params);

// Log-normal law of the one-period multiplier: log-mean rho - beta/2, log-variance beta.
double multiplier_pdf(double x, const ReducedParams& rp);
double multiplier_cdf(double x, const ReducedParams& rp);
// E[A^k] = exp(beta k (k-1)/2 + k rho), any real k.
double multiplier_moment(double k, const ReducedParams& rp);

// Inverse-gamma law of int_0^inf exp(sigma W_t + (m - sigma^2/2) t) dt:
// shape 1 - 2m/sigma^2, scale 2/sigma^2.
double inv_gamma_pdf(double z, double sigma, double m);
double inv_gamma_cdf(double x, double sigma, double m);

struct YorParams {
    double alpha = 0.0;   // Beta(1, alpha) shape
    double beta_g = 0.0;  // Gamma shape
};

YorParams yor_params(double sigma, double m, double lambda);

// Law of the GBM time integral up to an independent Exp(lambda) time.
double yor_pdf(double z, double sigma, double m, double lambda);
double yor_survival(double z, double sigma, double m, double lambda);

// Density and survival of Y = B/G in the standard scaling (y = sigma^2 z / 2).
double yor_std_pdf(double y, const YorParams& yp);
double yor_std_survival(double y, const YorParams& yp);

// (2 theta^2 + 2 theta mu - lambda) E[Y^theta] + theta E[Y^{theta-1}] for the
// time integral with sigma = 2, m = 2 mu + 2.
double yor_moment_residual(double theta, double mu, double lambda);

}  // namespace gbmsum
