#include "gbmsum/moments.hpp"

#include "gbmsum/errors.hpp"

#include <cmath>
#include <string>

namespace gbmsum {

MultiplierMoments MultiplierMoments::gbm(const ReducedParams& rp) {
    return MultiplierMoments([rp](int k) { return multiplier_moment(k, rp); });
}

MultiplierMoments MultiplierMoments::levy(std::function<double(double)> kappa, double m, double tau) {
    if (!kappa) throw DomainError("cumulant function is empty");
    if (!(tau > 0.0)) throw DomainError("tau must be positive");
    if (std::abs(kappa(0.0)) > 1e-12) throw DomainError("cumulant must satisfy kappa(0) = 0");
    return MultiplierMoments([kappa = std::move(kappa), m, tau](int k) {
        return std::exp(kappa(k) * tau + m * k * tau);
    });
}

bool moment_exists(int k, const MultiplierMoments& mm, double p) {
    if (k < 1) throw DomainError("moment order must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
    return (1.0 - p) * mm(k) < 1.0;
}

std::vector<double> moments_geometric(int kmax, const MultiplierMoments& mm, double p) {
    if (kmax < 1) throw DomainError("kmax must be >= 1");
    for (int k = 1; k <= kmax; ++k) {
        if (!moment_exists(k, mm, p)) {
            throw DomainError("moment of order " + std::to_string(k) + " does not exist");
        }
    }
    std::vector<double> mom(kmax + 1, 0.0);
    mom[0] = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        double a = mm(k);
        double s = 0.0;
        double c = 1.0;  // C(k, j)
        for (int j = 0; j < k; ++j) {
            s += c * mom[j];
            c = c * (k - j) / (j + 1);
        }
        mom[k] = a / (1.0 - (1.0 - p) * a) * ((1.0 - p) * s + p);
    }
    return mom;
}

std::vector<double> moments_infinite_product_form(int kmax, const MultiplierMoments& mm) {
    if (kmax < 1) throw DomainError("kmax must be >= 1");
    if (kmax > 30) throw DomainError("product form limited to kmax <= 30");
    for (int k = 1; k <= kmax; ++k) {
        if (!moment_exists(k, mm, 0.0)) {
            throw DomainError("moment of order " + std::to_string(k) + " does not exist");
        }
    }
    std::vector<double> r(kmax + 1);
    for (int i = 1; i <= kmax; ++i) {
        double a = mm(i);
        r[i] = a / (1.0 - a);
    }
    auto binom = [](int n, int k) {
        double c = 1.0;
        for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
        return c;
    };
    std::vector<double> mom(kmax + 1, 0.0);
    mom[0] = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        // Intermediate indices are any subset of {1, .., k-1}; enumerate by bit mask.
        double total = 0.0;
        unsigned long n_sub = 1ul << (k - 1);
        for (unsigned long mask = 0; mask < n_sub; ++mask) {
            double term = 1.0;
            int prev = 0;
            for (int i = 1; i <= k; ++i) {
                if (i < k && !(mask & (1ul << (i - 1)))) continue;
                term *= binom(i, prev) * r[i];
                prev = i;
            }
            total += term;
        }
        mom[k] = total;
    }
    return mom;
}

double inverse_moment_bound(int n, const ReducedParams& rp) {
    if (n < 1) throw DomainError("n must be >= 1");
    return std::exp(0.5 * rp.beta * n * (n + 1.0) - n * rp.rho);
}

double mean_finite_sum(int n, double r, double tau, double s0) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (!(tau > 0.0)) throw DomainError("tau must be positive");
    double x = r * tau;
    if (x == 0.0) return n * s0;
    // e^x (e^{n x} - 1)/(e^x - 1)
    return s0 * std::exp(x) * std::expm1(n * x) / std::expm1(x);
}

}  // namespace gbmsum
