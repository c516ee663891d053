#pragma once

namespace gbmsum {

// Standard normal CDF and its logarithm (the latter stays finite far into the left tail).
double norm_cdf(double x);
double log_norm_cdf(double x);
double norm_pdf(double x);

double log_gamma(double a);  // a > 0

// Regularized lower/upper incomplete gamma P(a,x), Q(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);
// Unregularized upper incomplete gamma Gamma(a,x).
double gamma_upper(double a, double x);

// Kummer's function M(a,b,z). Throws std::overflow_error if the value is not representable.
double hyp1f1(double a, double b, double z);

double beta_fn(double a, double b);
double log_beta(double a, double b);

// Riemann zeta at integer p >= 2.
double zeta_int(int p);

}  // namespace gbmsum
