#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace gbmsum {

enum class TailRegime { infinite_sum, geometric_sum, continuous_limit };

// Power-law survival P(X > x) ~ constant * x^{-exponent}.
struct TailAsymptote {
    double exponent = 0.0;
    double constant = 0.0;
    TailRegime regime = TailRegime::infinite_sum;
};

// Uniform grid u_j = j h, j = 0 .. n_points-1, in u = log(1+x).
struct Grid {
    double h = 0.01;
    std::size_t n_points = 0;

    static Grid with_extent(double h, double u_max);

    double u(std::size_t j) const noexcept { return static_cast<double>(j) * h; }
    double x(std::size_t j) const;
    double u_max() const noexcept { return u(n_points - 1); }
    double x_max() const;
};

// F(u_j) = f(e^{u_j} - 1) where f is the density of X in x. Beyond u_max the optional
// tail continues F as F(U) ((e^u - 1)/(e^U - 1))^{-(exponent+1)}.
struct GridDensity {
    Grid grid;
    std::vector<double> values;
    std::optional<TailAsymptote> tail;

    double interpolate(double u) const;
};

// Payoff g(x) for expectations. `growth` bounds g(x) = O(x^growth); `kinks` are points in x
// where g is not smooth (integration is split there).
struct Payoff {
    std::function<double(double)> g;
    double growth = 0.0;
    std::vector<double> kinks;

    static Payoff constant(double c = 1.0);
    static Payoff power(double k);
    static Payoff call(double strike);
    static Payoff put(double strike);
    // (1+x)^a - x^a, evaluated without cancellation for large x.
    static Payoff shifted_power_difference(double a);
};

double mass(const GridDensity& F);
double cdf(const GridDensity& F, double x);
double survival(const GridDensity& F, double x);
double expectation(const GridDensity& F, const Payoff& payoff);

// Integral of g(e^u - 1) F(u) e^u over [u_a, u_b] within the grid (no tail).
double integrate_grid(const GridDensity& F, double u_a, double u_b, const Payoff& payoff);

// Integral over (u_max, inf) using the tail continuation; 0 without a tail.
double integrate_tail(const GridDensity& F, const Payoff& payoff);

GridDensity scaled(const GridDensity& F, double factor);

}  // namespace gbmsum
