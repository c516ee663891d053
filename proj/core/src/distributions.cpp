#include "gbmsum/distributions.hpp"

#include "gbmsum/errors.hpp"
#include "gbmsum/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace gbmsum {

namespace {

bool finite(double v) { return std::isfinite(v); }

// Switch point for the analytic tail of yor_std_survival. The next correction is
// O(y^{-2}) relative, i.e. below 1e-6 here.
constexpr double kYorTailStart = 1e4;

}  // namespace

ReducedParams make_reduced(double beta, double rho, double p) {
    if (!(beta > 0.0) || !finite(beta)) throw DomainError("beta must be positive and finite");
    if (!finite(rho)) throw DomainError("rho must be finite");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
    return ReducedParams{beta, rho, p};
}

ReducedParams reduce(const ModelParams& params) {
    if (!(params.sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(params.tau > 0.0)) throw DomainError("tau must be positive");
    if (!(params.lambda >= 0.0)) throw DomainError("lambda must be non-negative");
    double p = params.lambda * params.tau;
    if (p > 1.0) throw DomainError("lambda * tau exceeds 1; not a probability");
    return make_reduced(params.sigma * params.sigma * params.tau, params.m * params.tau, p);
}

double multiplier_pdf(double x, const ReducedParams& rp) {
    if (!(x > 0.0)) return 0.0;
    double s = std::sqrt(rp.beta);
    double z = (std::log(x) - rp.rho + 0.5 * rp.beta) / s;
    return norm_pdf(z) / (x * s);
}

double multiplier_cdf(double x, const ReducedParams& rp) {
    if (!(x > 0.0)) return 0.0;
    return norm_cdf((std::log(x) - rp.rho + 0.5 * rp.beta) / std::sqrt(rp.beta));
}

double multiplier_moment(double k, const ReducedParams& rp) {
    return std::exp(0.5 * rp.beta * k * (k - 1.0) + k * rp.rho);
}

double inv_gamma_pdf(double z, double sigma, double m) {
    double s2 = sigma * sigma;
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(m < 0.5 * s2)) throw InfeasibleParameters("inverse-gamma law requires m < sigma^2/2");
    if (!(z > 0.0)) return 0.0;
    double a = 1.0 - 2.0 * m / s2;
    double scale = 2.0 / s2;
    return std::exp(a * std::log(scale) - log_gamma(a) - (a + 1.0) * std::log(z) - scale / z);
}

double inv_gamma_cdf(double x, double sigma, double m) {
    double s2 = sigma * sigma;
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(m < 0.5 * s2)) throw InfeasibleParameters("inverse-gamma law requires m < sigma^2/2");
    if (!(x > 0.0)) return 0.0;
    if (std::isinf(x)) return 1.0;
    double a = 1.0 - 2.0 * m / s2;
    return gamma_q(a, 2.0 / (s2 * x));
}

YorParams yor_params(double sigma, double m, double lambda) {
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!(lambda > 0.0)) throw DomainError("yor_params: lambda must be positive");
    double s2 = sigma * sigma;
    double d = 2.0 * m - s2;
    double r = std::sqrt(d * d + 8.0 * lambda * s2);
    // Compute the larger root directly and get the other from alpha * beta = 2 lambda / s2,
    // which avoids cancellation in (d + r) or (-d + r).
    double alpha;
    double beta_g;
    if (d > 0.0) {
        alpha = (d + r) / (2.0 * s2);
        beta_g = 2.0 * lambda / s2 / alpha;
    } else {
        beta_g = (-d + r) / (2.0 * s2);
        alpha = 2.0 * lambda / s2 / beta_g;
    }
    return YorParams{alpha, beta_g};
}

double yor_std_pdf(double y, const YorParams& yp) {
    if (!(y > 0.0)) return 0.0;
    double a = yp.alpha;
    double b = yp.beta_g;
    double lc = std::log(a * b) + log_gamma(a) - log_gamma(a + b + 1.0);
    double m = hyp1f1(b + 1.0, a + b + 1.0, -1.0 / y);
    return std::exp(lc - (b + 1.0) * std::log(y)) * m;
}

double yor_std_survival(double y, const YorParams& yp) {
    if (!(y > 0.0)) return 1.0;
    double a = yp.alpha;
    double b = yp.beta_g;
    double c = std::exp(std::log(a) + log_gamma(a) - log_gamma(a + b + 1.0));
    auto tail = [&](double ys) {
        return c * std::pow(ys, -b) * (1.0 - b / ((a + b + 1.0) * ys));
    };
    if (y >= kYorTailStart) return tail(y);
    // Integrate in s = log y; the integrand is smooth there.
    auto f = [&](double s) {
        double yy = std::exp(s);
        return yor_std_pdf(yy, yp) * yy;
    };
    double body = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, std::log(y), std::log(kYorTailStart), 20, 1e-13);
    return body + tail(kYorTailStart);
}

double yor_pdf(double z, double sigma, double m, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("yor_pdf: lambda must be positive (use inv_gamma_pdf)");
    YorParams yp = yor_params(sigma, m, lambda);
    double k = 0.5 * sigma * sigma;
    return k * yor_std_pdf(k * z, yp);
}

double yor_survival(double z, double sigma, double m, double lambda) {
    if (lambda < 0.0) throw DomainError("yor_survival: lambda must be non-negative");
    if (lambda == 0.0) return 1.0 - inv_gamma_cdf(z, sigma, m);
    if (!(z > 0.0)) return 1.0;
    YorParams yp = yor_params(sigma, m, lambda);
    return yor_std_survival(0.5 * sigma * sigma * z, yp);
}

double yor_moment_residual(double theta, double mu, double lambda) {
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
    YorParams yp = yor_params(2.0, 2.0 * mu + 2.0, lambda);
    double a = yp.alpha;
    double b = yp.beta_g;
    if (!(b - theta > 0.0)) throw DomainError("moment E[Y^theta] does not exist");
    double lgb = log_gamma(b);
    double e1 = a * std::exp(-theta * std::numbers::ln2 + log_beta(theta + 1.0, a)
                             + log_gamma(b - theta) - lgb);
    double e0 = a * std::exp(-(theta - 1.0) * std::numbers::ln2 + log_beta(theta, a)
                             + log_gamma(b - theta + 1.0) - lgb);
    return (2.0 * theta * theta + 2.0 * theta * mu - lambda) * e1 + theta * e0;
}

}  // namespace gbmsum
