#include "gbmsum/tails.hpp"

#include "gbmsum/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gbmsum {

namespace {

double geometric_radical(const ReducedParams& rp) {
    double d = rp.rho - 0.5 * rp.beta;
    return std::sqrt(d * d - 2.0 * rp.beta * std::log1p(-rp.p));
}

// Smallest x with survival(F, x) <= level, by bisection in u (extended into the tail).
double invert_survival(const GridDensity& F, double level) {
    double lo = 0.0;
    double hi = F.grid.u_max();
    while (survival(F, std::expm1(hi)) > level) {
        if (!F.tail || hi > 700.0) return std::expm1(hi);
        hi *= 1.5;
    }
    for (int i = 0; i < 100 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
        double mid = 0.5 * (lo + hi);
        if (survival(F, std::expm1(mid)) > level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::expm1(0.5 * (lo + hi));
}

}  // namespace

double exponent_infinite(const ReducedParams& rp) {
    if (!rp.perpetuity_feasible()) throw InfeasibleParameters("perpetuity requires rho < beta/2");
    return 1.0 - 2.0 * rp.rho / rp.beta;
}

double exponent_geometric(const ReducedParams& rp) {
    if (!(rp.p >= 0.0 && rp.p < 1.0)) throw DomainError("exponent_geometric requires 0 <= p < 1");
    double mu = (-rp.rho + 0.5 * rp.beta + geometric_radical(rp)) / rp.beta;
    if (!(mu > 0.0)) throw InfeasibleParameters("no positive tail exponent (p = 0 and rho >= beta/2)");
    return mu;
}

double tail_constant_infinite(const GridDensity& F, const ReducedParams& rp) {
    double alpha = exponent_infinite(rp);
    double num = expectation(F, Payoff::shifted_power_difference(alpha));
    return num / (alpha * (0.5 * rp.beta - rp.rho));
}

double tail_constant_geometric(const GridDensity& F, const ReducedParams& rp) {
    if (!(rp.p >= 0.0 && rp.p < 1.0)) {
        throw DomainError("tail_constant_geometric requires 0 <= p < 1 (p = 1 has no power tail)");
    }
    double mu = exponent_geometric(rp);
    double e = expectation(F, Payoff::shifted_power_difference(mu));
    double num = rp.p + (1.0 - rp.p) * e;
    return num / (mu * (1.0 - rp.p) * geometric_radical(rp));
}

TailAsymptote tail_estimate(const ReducedParams& rp) {
    if (rp.p == 0.0) {
        double a = exponent_infinite(rp);
        double c = std::exp(a * std::log(2.0 / rp.beta) - log_gamma(a + 1.0));
        return TailAsymptote{a, c, TailRegime::continuous_limit};
    }
    if (rp.p >= 1.0) throw DomainError("tail_estimate: p = 1 has no power tail");
    double mu = exponent_geometric(rp);
    YorParams yp = yor_params(std::sqrt(rp.beta), rp.rho, rp.p);
    double cs = std::exp(std::log(yp.alpha) + log_gamma(yp.alpha)
                         - log_gamma(yp.alpha + yp.beta_g + 1.0));
    double c = cs * std::exp(yp.beta_g * std::log(2.0 / rp.beta));
    return TailAsymptote{mu, c, TailRegime::continuous_limit};
}

double left_tail_coefficient(SumKind, const ReducedParams& rp) {
    if (!(rp.beta > 0.0)) throw DomainError("beta must be positive");
    return -0.5 / rp.beta;
}

double right_tail_coefficient_finite(int n, const ReducedParams& rp) {
    if (n < 1) throw DomainError("n must be >= 1");
    return -0.5 / (rp.beta * n);
}

double left_tail_cdf(const GridDensity& F, const ReducedParams& rp, double eps) {
    if (!(eps > 0.0)) return 0.0;
    double sd = std::sqrt(rp.beta);
    double shift = std::log(eps) - rp.rho + 0.5 * rp.beta;
    Payoff g{[&](double x) { return std::exp(log_norm_cdf((shift - std::log1p(x)) / sd)); }, 0.0, {}};
    double body = integrate_grid(F, 0.0, F.grid.u_max(), g);
    double direct = std::exp(log_norm_cdf(shift / sd));
    return rp.p * direct + (1.0 - rp.p) * body;
}

double fit_left_tail_slope(const GridDensity& F, const ReducedParams& rp, double eps_lo,
                           double eps_hi, int n_points) {
    if (!(eps_lo > 0.0 && eps_hi > eps_lo && eps_hi < 1.0) || n_points < 4) {
        throw DomainError("fit_left_tail_slope: bad window");
    }
    // Least squares log P = a L^2 + b L + c with L = log eps; returns a.
    double A[3][3] = {};
    double r[3] = {};
    for (int i = 0; i < n_points; ++i) {
        double L = std::log(eps_lo) + (std::log(eps_hi) - std::log(eps_lo)) * i / (n_points - 1);
        double y = std::log(left_tail_cdf(F, rp, std::exp(L)));
        double b[3] = {L * L, L, 1.0};
        for (int p = 0; p < 3; ++p) {
            r[p] += b[p] * y;
            for (int q = 0; q < 3; ++q) A[p][q] += b[p] * b[q];
        }
    }
    // Gaussian elimination on the 3x3 normal equations.
    for (int c = 0; c < 3; ++c) {
        for (int rr = c + 1; rr < 3; ++rr) {
            double f = A[rr][c] / A[c][c];
            for (int k = c; k < 3; ++k) A[rr][k] -= f * A[c][k];
            r[rr] -= f * r[c];
        }
    }
    double sol[3];
    for (int c = 2; c >= 0; --c) {
        double s = r[c];
        for (int k = c + 1; k < 3; ++k) s -= A[c][k] * sol[k];
        sol[c] = s / A[c][c];
    }
    return sol[0];
}

PlateauFit fit_tail_plateau(const GridDensity& F, double exponent_ref) {
    double x_hi = F.grid.x_max();
    return fit_tail_plateau(F, exponent_ref, x_hi / 10.0, x_hi);
}

PlateauFit fit_tail_plateau(const GridDensity& F, double exponent_ref, double x_lo, double x_hi) {
    const Grid& g = F.grid;
    if (!(x_lo > 0.0 && x_hi > x_lo)) throw DomainError("fit_tail_plateau: need 0 < x_lo < x_hi");
    double u_lo = std::log1p(x_lo);
    double u_hi = std::log1p(x_hi);
    std::vector<double> lx;
    std::vector<double> ls;
    std::vector<double> plateau;
    for (std::size_t j = 0; j < g.n_points; ++j) {
        if (g.u(j) < u_lo || g.u(j) > u_hi + 1e-12) continue;
        double x = g.x(j);
        double s = survival(F, x);
        if (!(s > 0.0)) continue;
        lx.push_back(std::log(x));
        ls.push_back(std::log(s));
        plateau.push_back(s * std::pow(x, exponent_ref));
    }
    if (lx.size() < 20) throw DomainError("fit_tail_plateau: fewer than 20 points in the window");
    double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ls[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ls[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    PlateauFit fit;
    fit.exponent = -sxy / sxx;
    double sum = 0.0;
    for (double v : plateau) sum += v;
    fit.constant = sum / n;
    auto [mn, mxp] = std::minmax_element(plateau.begin(), plateau.end());
    fit.variation = (*mxp - *mn) / fit.constant;
    return fit;
}

double shortfall_probability(const GridDensity& F, double K, double q) {
    if (!(K > 0.0)) throw DomainError("capital K must be positive");
    if (!(q >= 0.0)) throw DomainError("q must be non-negative");
    return survival(F, (1.0 + q) * K);
}

double shortfall_continuous(double sigma, double m, double lambda, double K, double q) {
    if (!(K > 0.0)) throw DomainError("capital K must be positive");
    if (!(q >= 0.0)) throw DomainError("q must be non-negative");
    return yor_survival(K * (1.0 + q), sigma, m, lambda);
}

double value_at_risk(const TailAsymptote& ta, double p_level) {
    if (!(p_level > 0.0 && p_level < 1.0)) throw DomainError("p_level must lie in (0,1)");
    if (!(ta.exponent > 0.0 && ta.constant > 0.0)) throw DomainError("invalid tail asymptote");
    return std::pow(ta.constant / p_level, 1.0 / ta.exponent);
}

VarResult value_at_risk(const TailAsymptote& ta, double p_level, const GridDensity& F,
                        Diagnostics* diag) {
    VarResult res{value_at_risk(ta, p_level), true};
    double x99 = invert_survival(F, 0.01);
    if (res.threshold < x99) {
        warn(diag, "VaR threshold falls inside the body of the law; using grid inversion");
        res.threshold = invert_survival(F, p_level);
        res.power_law_regime = false;
    }
    return res;
}

}  // namespace gbmsum
