#include "gbmsum/solver.hpp"

#include "gbmsum/specfun.hpp"
#include "gbmsum/tails.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gbmsum {

namespace {

constexpr double kBandWidth = 9.0;     // kernel band half-width in standard deviations
constexpr double kTailMassTarget = 1e-7;
constexpr double kMaxExtent = 60.0;

double default_extent(const ReducedParams& rp, const TailAsymptote& est, Diagnostics* diag) {
    double c = std::max(est.constant, 1.0) * 10.0;
    double logx = (std::log(c) - std::log(kTailMassTarget)) / est.exponent;
    double U = logx > 30.0 ? logx : std::log1p(std::exp(logx));
    U = std::max(U, std::log1p(20.0 / rp.beta));
    if (U > kMaxExtent) {
        warn(diag, "grid extent capped at u_max = 60; tail mass beyond it may exceed 1e-7");
        U = kMaxExtent;
    }
    return U;
}

Grid make_grid(const ReducedParams& rp, const SolveOptions& opts, const TailAsymptote& est,
               SolveReport& report, Diagnostics* diag) {
    double h = guarded_step(opts.h, rp.beta);
    if (h != opts.h) {
        report.grid_refined = true;
        std::ostringstream os;
        os << "grid step refined from " << opts.h << " to " << h << " (sqrt(beta) < 3h)";
        warn(diag, os.str());
    }
    double U = opts.u_max ? *opts.u_max : default_extent(rp, est, diag);
    Grid g = Grid::with_extent(h, U);
    report.h = g.h;
    report.u_max = g.u_max();
    return g;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
    return d;
}

// Attach the power-law continuation with the constant implied by the anchor value.
void attach_tail(GridDensity& F, double exponent, TailRegime regime) {
    double X = F.grid.x_max();
    double c = F.values.back() * std::exp((exponent + 1.0) * std::log(X)) / exponent;
    F.tail = TailAsymptote{exponent, c, regime};
}

void normalize(GridDensity& F, double m) {
    for (double& v : F.values) v /= m;
    if (F.tail) F.tail->constant /= m;
}

double relative_change(const GridDensity& a, const GridDensity& b) {
    double va = a.values.back();
    double vb = b.values.back();
    if (va == 0.0 && vb == 0.0) return 0.0;
    return std::abs(va - vb) / std::max(std::abs(va), std::abs(vb));
}

// Appends delta to the report; true once both stopping criteria hold.
bool record(SolveReport& rep, int it, double delta, double tail_change, const SolveOptions& opts) {
    rep.delta_trace.push_back(delta);
    rep.iterations = it;
    rep.final_delta = delta;
    if (delta <= opts.tol && rep.iterations_to_tol == 0) rep.iterations_to_tol = it;
    return delta <= opts.tol && tail_change <= opts.tail_tol;
}

std::string not_converged_message(int iters, double delta) {
    std::ostringstream os;
    os << "fixed-point iteration did not reach tolerance after " << iters
       << " iterations (last delta " << delta << ")";
    return os.str();
}

}  // namespace

double guarded_step(double h, double beta) {
    if (!(h > 0.0)) throw DomainError("grid step must be positive");
    double s = std::sqrt(beta);
    return s < 3.0 * h ? s / 3.0 : h;
}

KernelOperator::KernelOperator(const Grid& grid, const ReducedParams& rp,
                               std::optional<double> tail_exponent)
    : grid_(grid) {
    if (!(rp.beta > 0.0)) throw DomainError("beta must be positive");
    if (tail_exponent && !(*tail_exponent > 0.0)) throw DomainError("tail exponent must be positive");
    const double h = grid.h;
    const std::size_t n = grid.n_points;
    const double sd = std::sqrt(rp.beta);
    coarse_ = sd < 3.0 * h;
    const double pref = std::exp(rp.beta - rp.rho) * h / (sd * std::sqrt(2.0 * std::numbers::pi));
    const double half_band = kBandWidth * sd;
    const double U = grid.u_max();
    const double logX = std::log(grid.x_max());
    auto kern = [&](double d) { return pref * std::exp(-0.5 * d * d / rp.beta); };

    rows_.assign(n, Row{});
    for (std::size_t j = 1; j < n; ++j) {
        double w0 = std::log(grid.x(j)) + 1.5 * rp.beta - rp.rho;
        double lo = std::ceil((w0 - half_band) / h);
        double hi = std::floor((w0 + half_band) / h);
        bool tail_part = tail_exponent && (w0 + half_band > U);
        if (hi < 1.0 && !tail_part) continue;
        std::size_t first = static_cast<std::size_t>(std::max(lo, 1.0));
        std::size_t last = hi >= static_cast<double>(n - 1) ? n - 1 : static_cast<std::size_t>(std::max(hi, 1.0));
        if (first > n - 1) first = n - 1;
        if (first > last) {
            if (!tail_part) continue;
            first = last = n - 1;
        }
        Row row{first, last - first + 1, weights_.size()};
        for (std::size_t k = first; k <= last; ++k) {
            double wgt = kern(grid.u(k) - w0);
            if (k == n - 1) wgt *= 0.5;
            if (k == n - 1 && lo > static_cast<double>(n - 1)) wgt = 0.0;  // band starts past U
            weights_.push_back(wgt);
        }
        if (tail_part) {
            double gam = *tail_exponent + 1.0;
            double acc = 0.5 * kern(U - w0);
            for (int i = 1;; ++i) {
                double w = U + i * h;
                if (w > w0 + half_band) break;
                double r = std::exp(-gam * (std::log(std::expm1(w)) - logX));
                acc += kern(w - w0) * r;
            }
            weights_.back() += acc;
        }
        rows_[j] = row;
    }
}

void KernelOperator::apply(std::span<const double> F, std::span<double> out) const {
    if (F.size() != grid_.n_points || out.size() != grid_.n_points) {
        throw DomainError("operator applied to a vector of the wrong size");
    }
    for (std::size_t j = 0; j < rows_.size(); ++j) {
        const Row& r = rows_[j];
        const double* w = weights_.data() + r.offset;
        const double* f = F.data() + r.first;
        double s = 0.0;
        for (std::size_t k = 0; k < r.count; ++k) s += w[k] * f[k];
        out[j] = s;
    }
}

std::vector<double> KernelOperator::apply(std::span<const double> F) const {
    std::vector<double> out(F.size());
    apply(F, out);
    return out;
}

GridDensity apply_operator(const GridDensity& F, const ReducedParams& rp, Diagnostics* diag) {
    std::optional<double> te;
    if (F.tail) te = F.tail->exponent;
    KernelOperator op(F.grid, rp, te);
    if (op.coarse()) warn(diag, "grid too coarse for the kernel width: sqrt(beta) < 3h");
    GridDensity out{F.grid, op.apply(F.values), F.tail};
    if (out.tail) attach_tail(out, out.tail->exponent, out.tail->regime);
    return out;
}

GridDensity lognormal_density(const Grid& grid, const ReducedParams& rp) {
    GridDensity F{grid, std::vector<double>(grid.n_points, 0.0), std::nullopt};
    for (std::size_t j = 1; j < grid.n_points; ++j) F.values[j] = multiplier_pdf(grid.x(j), rp);
    return F;
}

GridDensity inverse_gamma_density(const Grid& grid, const ReducedParams& rp) {
    double sigma = std::sqrt(rp.beta);
    GridDensity F{grid, std::vector<double>(grid.n_points, 0.0), std::nullopt};
    for (std::size_t j = 1; j < grid.n_points; ++j) F.values[j] = inv_gamma_pdf(grid.x(j), sigma, rp.rho);
    return F;
}

GridDensity yor_density(const Grid& grid, const ReducedParams& rp) {
    double sigma = std::sqrt(rp.beta);
    GridDensity F{grid, std::vector<double>(grid.n_points, 0.0), std::nullopt};
    for (std::size_t j = 1; j < grid.n_points; ++j) F.values[j] = yor_pdf(grid.x(j), sigma, rp.rho, rp.p);
    return F;
}

SolveResult solve_infinite(const ReducedParams& rp, const SolveOptions& opts, Diagnostics* diag) {
    if (!rp.perpetuity_feasible()) {
        throw InfeasibleParameters("perpetuity requires rho < beta/2");
    }
    if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
    SolveResult res;
    SolveReport& rep = res.report;
    double alpha = exponent_infinite(rp);
    Grid grid = make_grid(rp, opts, tail_estimate(rp), rep, diag);
    KernelOperator op(grid, rp, alpha);

    GridDensity F = opts.init == InitKind::inverse_gamma ? inverse_gamma_density(grid, rp)
                                                          : lognormal_density(grid, rp);
    attach_tail(F, alpha, TailRegime::infinite_sum);
    normalize(F, mass(F));

    // The equation is homogeneous, so each iterate is renormalized; otherwise the
    // discretization's leading eigenvalue (1 + O(h^k)) shows up as a floor in delta.
    GridDensity next = F;
    bool converged = false;
    for (int it = 1; it <= opts.max_iter; ++it) {
        op.apply(F.values, next.values);
        attach_tail(next, alpha, TailRegime::infinite_sum);
        double m = mass(next);
        normalize(next, m);
        double delta = sup_diff(next.values, F.values);
        double tail_change = relative_change(next, F);
        rep.normalization_drift = std::abs(m - 1.0);
        std::swap(F, next);
        if (record(rep, it, delta, tail_change, opts)) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NonConvergence(not_converged_message(rep.iterations, rep.final_delta), rep.delta_trace);
    }
    rep.quadrature_bound = quadrature_error_bound(F, 1);
    res.density = std::move(F);
    return res;
}

SolveResult solve_geometric(const ReducedParams& rp, const SolveOptions& opts, Diagnostics* diag) {
    if (!(rp.p > 0.0 && rp.p <= 1.0)) throw DomainError("solve_geometric requires 0 < p <= 1");
    if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
    SolveResult res;
    SolveReport& rep = res.report;

    if (rp.p == 1.0) {
        // N = 1: the sum is the multiplier itself.
        double h = guarded_step(opts.h, rp.beta);
        double sd = std::sqrt(rp.beta);
        double U = opts.u_max ? *opts.u_max
                              : std::log1p(std::exp(rp.rho - 0.5 * rp.beta + 9.0 * sd));
        U = std::max(U, 16.0 * h);
        Grid grid = Grid::with_extent(h, U);
        rep.h = grid.h;
        rep.u_max = grid.u_max();
        rep.grid_refined = h != opts.h;
        res.density = lognormal_density(grid, rp);
        rep.normalization_drift = std::abs(mass(res.density) - 1.0);
        rep.quadrature_bound = quadrature_error_bound(res.density, 1);
        return res;
    }

    double mu = exponent_geometric(rp);
    Grid grid = make_grid(rp, opts, tail_estimate(rp), rep, diag);
    KernelOperator op(grid, rp, mu);

    GridDensity source = lognormal_density(grid, rp);
    GridDensity F = yor_density(grid, rp);
    attach_tail(F, mu, TailRegime::geometric_sum);
    normalize(F, mass(F));
    // The exact solution has unit mass. For small p the mass mode contracts only at rate
    // (1-p)(1 + O(h^k)), so iterates are renormalized as in the perpetuity case.
    GridDensity next = F;
    const double p = rp.p;
    bool converged = false;
    for (int it = 1; it <= opts.max_iter; ++it) {
        op.apply(F.values, next.values);
        for (std::size_t j = 0; j < grid.n_points; ++j) {
            next.values[j] = p * source.values[j] + (1.0 - p) * next.values[j];
        }
        attach_tail(next, mu, TailRegime::geometric_sum);
        double m = mass(next);
        normalize(next, m);
        rep.normalization_drift = std::abs(m - 1.0);
        double delta = sup_diff(next.values, F.values);
        double tail_change = relative_change(next, F);
        std::swap(F, next);
        if (record(rep, it, delta, tail_change, opts)) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NonConvergence(not_converged_message(rep.iterations, rep.final_delta), rep.delta_trace);
    }
    rep.quadrature_bound = quadrature_error_bound(F, 1);
    res.density = std::move(F);
    return res;
}

double quadrature_error_bound(const GridDensity& F, int k, Diagnostics* diag) {
    if (k < 1) throw DomainError("quadrature_error_bound: k must be >= 1");
    const int q = 2 * k + 1;
    const std::size_t n = F.grid.n_points;
    const double h = F.grid.h;
    std::vector<double> G(n);
    for (std::size_t j = 0; j < n; ++j) G[j] = F.values[j] * std::exp(F.grid.u(j));

    std::vector<double> binom(q + 1, 1.0);
    for (int i = 1; i <= q; ++i) binom[i] = binom[i - 1] * (q - i + 1) / i;

    auto total_variation = [&](std::size_t stride) {
        double step = h * static_cast<double>(stride);
        double acc = 0.0;
        for (std::size_t j = 0; j + q * stride < n; j += stride) {
            double d = 0.0;
            for (int i = 0; i <= q; ++i) {
                double sgn = ((q - i) % 2 == 0) ? 1.0 : -1.0;
                d += sgn * binom[i] * G[j + i * stride];
            }
            acc += std::abs(d);
        }
        return acc / std::pow(step, q - 1);
    };
    double M = total_variation(1);
    double M2 = total_variation(2);
    if (std::abs(M - M2) > 0.25 * std::max(M, M2)) {
        warn(diag, "derivative estimate for the quadrature bound looks noise-dominated");
    }
    const double pi = std::numbers::pi;
    return std::pow(h, q) * M * zeta_int(q) / (std::pow(2.0, 2 * k) * std::pow(pi, q));
}

}  // namespace gbmsum
