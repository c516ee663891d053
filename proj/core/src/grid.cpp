#include "gbmsum/grid.hpp"

#include "gbmsum/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace gbmsum {

namespace {

constexpr std::array<double, 4> kGlNode = {-0.8611363115940526, -0.3399810435848563,
                                           0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGlWeight = {0.3478548451374538, 0.6521451548625461,
                                             0.6521451548625461, 0.3478548451374538};

// Cubic Lagrange interpolation through v[s..s+3] at offset t = (u - u_s)/h.
double lagrange4(const double* v, double t) {
    double t0 = t;
    double t1 = t - 1.0;
    double t2 = t - 2.0;
    double t3 = t - 3.0;
    return -v[0] * t1 * t2 * t3 / 6.0 + v[1] * t0 * t2 * t3 / 2.0 - v[2] * t0 * t1 * t3 / 2.0
           + v[3] * t0 * t1 * t2 / 6.0;
}

std::size_t stencil_start(std::size_t cell, std::size_t n) {
    if (cell == 0) return 0;
    return std::min(cell - 1, n - 4);
}

double tail_gamma(const GridDensity& F) { return F.tail->exponent + 1.0; }

// Integral of g(x) F(U) (x/X)^{-gamma} over [x_lo, inf), x_lo >= X.
double tail_from(const GridDensity& F, double x_lo, const Payoff& payoff) {
    if (!F.tail) return 0.0;
    double fu = F.values.back();
    if (fu == 0.0) return 0.0;
    double X = F.grid.x_max();
    double gam = tail_gamma(F);
    double rate = gam - 1.0 - payoff.growth;
    if (!(rate > 0.0)) {
        throw DivergentExpectation("payoff grows at least as fast as the tail decays");
    }
    double scale = fu * std::exp(gam * std::log(X) + (1.0 - gam) * std::log(x_lo));
    double t_end = std::min(600.0, 40.0 / rate);
    auto f = [&](double t) { return payoff.g(x_lo * std::exp(t)) * std::exp(-(gam - 1.0) * t); };
    std::vector<double> cuts = {0.0};
    for (double k : payoff.kinks) {
        if (k > x_lo) {
            double t = std::log(k / x_lo);
            if (t < t_end) cuts.push_back(t);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(t_end);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            f, cuts[i], cuts[i + 1], 15, 1e-12);
    }
    return scale * total;
}

}  // namespace

Grid Grid::with_extent(double h, double u_max) {
    if (!(h > 0.0)) throw DomainError("grid step must be positive");
    if (!(u_max > 0.0)) throw DomainError("grid extent must be positive");
    auto n = static_cast<std::size_t>(std::ceil(u_max / h - 1e-9)) + 1;
    if (n < 16) throw DomainError("grid needs at least 16 points");
    return Grid{h, n};
}

double Grid::x(std::size_t j) const { return std::expm1(u(j)); }

double Grid::x_max() const { return std::expm1(u_max()); }

double GridDensity::interpolate(double u) const {
    if (u <= 0.0) return 0.0;
    double U = grid.u_max();
    if (u > U) {
        if (!tail) return 0.0;
        return values.back() * std::pow(std::expm1(u) / grid.x_max(), -(tail->exponent + 1.0));
    }
    auto n = grid.n_points;
    auto cell = std::min(static_cast<std::size_t>(u / grid.h), n - 2);
    std::size_t s = stencil_start(cell, n);
    return lagrange4(values.data() + s, u / grid.h - static_cast<double>(s));
}

Payoff Payoff::constant(double c) {
    return Payoff{[c](double) { return c; }, 0.0, {}};
}

Payoff Payoff::power(double k) {
    return Payoff{[k](double x) { return std::pow(x, k); }, k, {}};
}

Payoff Payoff::call(double strike) {
    return Payoff{[strike](double x) { return x > strike ? x - strike : 0.0; }, 1.0, {strike}};
}

Payoff Payoff::put(double strike) {
    return Payoff{[strike](double x) { return x < strike ? strike - x : 0.0; }, 0.0, {strike}};
}

Payoff Payoff::shifted_power_difference(double a) {
    auto g = [a](double x) {
        if (x <= 0.0) return 1.0;
        return std::pow(x, a) * std::expm1(a * std::log1p(1.0 / x));
    };
    return Payoff{g, a - 1.0, {}};
}

double integrate_grid(const GridDensity& F, double u_a, double u_b, const Payoff& payoff) {
    const Grid& gr = F.grid;
    double U = gr.u_max();
    u_a = std::max(u_a, 0.0);
    u_b = std::min(u_b, U);
    if (!(u_b > u_a)) return 0.0;
    const std::size_t n = gr.n_points;

    std::vector<double> G(n);
    for (std::size_t j = 0; j < n; ++j) G[j] = F.values[j] * std::exp(gr.u(j));

    std::vector<double> cuts = {u_a, u_b};
    for (double k : payoff.kinks) {
        if (k > -1.0) {
            double uk = std::log1p(k);
            if (uk > u_a && uk < u_b) cuts.push_back(uk);
        }
    }
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        double a = cuts[c];
        double b = cuts[c + 1];
        auto k0 = std::min(static_cast<std::size_t>(a / gr.h), n - 2);
        for (std::size_t k = k0; k + 1 < n; ++k) {
            double lo = std::max(a, gr.u(k));
            double hi = std::min(b, gr.u(k + 1));
            if (gr.u(k) >= b) break;
            if (!(hi > lo)) continue;
            std::size_t s = stencil_start(k, n);
            double mid = 0.5 * (lo + hi);
            double half = 0.5 * (hi - lo);
            double acc = 0.0;
            for (int i = 0; i < 4; ++i) {
                double u = mid + half * kGlNode[i];
                double gv = lagrange4(G.data() + s, u / gr.h - static_cast<double>(s));
                acc += kGlWeight[i] * gv * payoff.g(std::expm1(u));
            }
            total += half * acc;
        }
    }
    return total;
}

double integrate_tail(const GridDensity& F, const Payoff& payoff) {
    return tail_from(F, F.grid.x_max(), payoff);
}

double mass(const GridDensity& F) {
    Payoff one = Payoff::constant(1.0);
    return integrate_grid(F, 0.0, F.grid.u_max(), one) + integrate_tail(F, one);
}

double cdf(const GridDensity& F, double x) {
    if (!(x > 0.0)) return 0.0;
    Payoff one = Payoff::constant(1.0);
    double U = F.grid.u_max();
    double ux = std::log1p(x);
    if (ux <= U) return integrate_grid(F, 0.0, ux, one);
    return integrate_grid(F, 0.0, U, one) + integrate_tail(F, one) - tail_from(F, x, one);
}

double survival(const GridDensity& F, double x) {
    Payoff one = Payoff::constant(1.0);
    if (!(x > 0.0)) return mass(F);
    double U = F.grid.u_max();
    double ux = std::log1p(x);
    if (ux <= U) return integrate_grid(F, ux, U, one) + integrate_tail(F, one);
    return tail_from(F, x, one);
}

double expectation(const GridDensity& F, const Payoff& payoff) {
    if (F.tail && payoff.growth >= F.tail->exponent) {
        throw DivergentExpectation("payoff growth is not below the tail exponent");
    }
    return integrate_grid(F, 0.0, F.grid.u_max(), payoff) + integrate_tail(F, payoff);
}

GridDensity scaled(const GridDensity& F, double factor) {
    GridDensity out = F;
    for (double& v : out.values) v *= factor;
    return out;
}

}  // namespace gbmsum
