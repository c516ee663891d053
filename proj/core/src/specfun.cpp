#include "gbmsum/specfun.hpp"

#include "gbmsum/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gbmsum {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_int(double b) { return b <= 0.0 && b == std::floor(b); }

// Plain power series, caller guarantees it converges quickly enough (|z| <= 50).
double hyp1f1_series(double a, double b, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 5000; ++k) {
        term *= (a + k) * z / ((b + k) * (k + 1));
        sum += term;
        if (term == 0.0) return sum;
        if (std::abs(term) < kEps * std::abs(sum) && k > std::abs(z)) return sum;
    }
    throw NonConvergence("hyp1f1: series did not converge", {});
}

// Asymptotic series sum_s (p)_s (q)_s / s! x^{-s} truncated at the smallest term.
double asymptotic_tail(double p, double q, double x) {
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 200; ++s) {
        double next = term * (p + s) * (q + s) / ((s + 1) * x);
        if (std::abs(next) >= prev || next == 0.0) break;
        prev = std::abs(next);
        term = next;
        sum += term;
        if (std::abs(term) < kEps * std::abs(sum)) break;
    }
    return sum;
}

// 1/Gamma(a) with the poles handled.
double rgamma_sign_log(double a, double& log_abs) {
    if (is_nonpositive_int(a)) {
        log_abs = -std::numeric_limits<double>::infinity();
        return 0.0;
    }
    int sign = 1;
    log_abs = -boost::math::lgamma(a, &sign);
    return sign;
}

}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double log_norm_cdf(double x) {
    if (x > -30.0) return std::log(norm_cdf(x));
    // Mills ratio expansion.
    double x2 = x * x;
    double corr = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - std::log(-x * std::sqrt(2.0 * std::numbers::pi)) + std::log(corr);
}

double log_gamma(double a) {
    if (!(a > 0.0)) throw DomainError("log_gamma: a must be positive");
    return boost::math::lgamma(a);
}

double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw DomainError("gamma_p: a must be positive");
    if (x < 0.0) throw DomainError("gamma_p: x must be non-negative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x >= a + 1.0) return 1.0 - gamma_q(a, x);
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
        }
    }
    throw NonConvergence("gamma_p: series did not converge", {});
}

double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw DomainError("gamma_q: a must be positive");
    if (x < 0.0) throw DomainError("gamma_q: x must be non-negative");
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_p(a, x);
    // Modified Lentz continued fraction.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
        }
    }
    throw NonConvergence("gamma_q: continued fraction did not converge", {});
}

double gamma_upper(double a, double x) {
    if (!(a > 0.0)) throw DomainError("gamma_upper: a must be positive");
    if (x == 0.0) return std::exp(log_gamma(a));
    return std::exp(log_gamma(a)) * gamma_q(a, x);
}

double hyp1f1(double a, double b, double z) {
    if (is_nonpositive_int(b)) throw DomainError("hyp1f1: b is a non-positive integer");
    if (z == 0.0 || a == 0.0) return 1.0;
    if (a == b) {
        double v = std::exp(z);
        if (std::isinf(v)) throw std::overflow_error("hyp1f1: overflow");
        return v;
    }
    if (is_nonpositive_int(a)) return hyp1f1_series(a, b, z);  // terminating polynomial

    if (z < 0.0) {
        double x = -z;
        // Kummer transform: the series for M(b-a,b,x) has no cancellation when b > a, b > 0.
        if (x <= 50.0 || is_nonpositive_int(b - a)) return std::exp(z) * hyp1f1_series(b - a, b, x);
        // M(a,b,-x) ~ Gamma(b)/Gamma(b-a) x^{-a} sum (a)_s (1+a-b)_s / s! x^{-s}; the
        // exponentially small companion term is dropped (relative size below e^{-50}).
        double lr;
        double sr = rgamma_sign_log(b - a, lr);
        int sb = 1;
        double lgb = boost::math::lgamma(b, &sb);
        return sb * sr * std::exp(lgb + lr - a * std::log(x)) * asymptotic_tail(a, 1.0 + a - b, x);
    }

    if (z <= 50.0) return hyp1f1_series(a, b, z);
    // M(a,b,z) ~ Gamma(b)/Gamma(a) e^z z^{a-b} sum (b-a)_s (1-a)_s / s! z^{-s}
    double lr;
    double sr = rgamma_sign_log(a, lr);
    int sb = 1;
    double lgb = boost::math::lgamma(b, &sb);
    double s = asymptotic_tail(b - a, 1.0 - a, z);
    double logv = lgb + lr + z + (a - b) * std::log(z) + std::log(std::abs(s));
    if (logv > std::log(std::numeric_limits<double>::max())) {
        throw std::overflow_error("hyp1f1: overflow");
    }
    return sb * sr * (s < 0 ? -1.0 : 1.0) * std::exp(logv);
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta_fn: arguments must be positive");
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

double zeta_int(int p) {
    if (p < 2) throw DomainError("zeta_int: p must be >= 2");
    constexpr int n = 16;
    double s = 0.0;
    for (int k = n - 1; k >= 1; --k) s += std::pow(static_cast<double>(k), -p);
    // Euler-Maclaurin tail from n.
    double N = n;
    double dp = p;
    double tail = std::pow(N, 1.0 - dp) / (dp - 1.0) + 0.5 * std::pow(N, -dp);
    double fac = dp;  // p (p+1) ... products
    tail += fac / 12.0 * std::pow(N, -dp - 1.0);
    fac *= (dp + 1.0) * (dp + 2.0);
    tail -= fac / 720.0 * std::pow(N, -dp - 3.0);
    fac *= (dp + 3.0) * (dp + 4.0);
    tail += fac / 30240.0 * std::pow(N, -dp - 5.0);
    fac *= (dp + 5.0) * (dp + 6.0);
    tail -= fac / 1209600.0 * std::pow(N, -dp - 7.0);
    fac *= (dp + 7.0) * (dp + 8.0);
    tail += fac / 47900160.0 * std::pow(N, -dp - 9.0);
    return s + tail;
}

}  // namespace gbmsum
