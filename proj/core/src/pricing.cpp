#include "gbmsum/pricing.hpp"

#include "gbmsum/moments.hpp"
#include "gbmsum/tails.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gbmsum {

namespace {

constexpr std::size_t kMaxPoints = 400000;

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Estimate of int_U^inf x G(u) du assuming G = F e^u decays exponentially beyond U.
double truncated_first_moment(const GridDensity& F) {
    const Grid& g = F.grid;
    std::size_t n = g.n_points;
    std::size_t back = std::min<std::size_t>(10, n - 1);
    double g1 = F.values[n - 1] * std::exp(g.u(n - 1));
    double g0 = F.values[n - 1 - back] * std::exp(g.u(n - 1 - back));
    if (g1 <= 0.0) return 0.0;
    double rate = (std::log(g0) - std::log(g1)) / (back * g.h);
    if (!(rate > 1.5)) return std::numeric_limits<double>::infinity();
    return g1 * std::exp(g.u_max()) / (rate - 1.0);
}

double continuous_average_mean(const AsianSpec& s) {
    double m = s.rate - s.dividend;
    double mt = m * s.maturity;
    if (mt == 0.0) return s.s0;
    return s.s0 * std::expm1(mt) / mt;
}

}  // namespace

GridDensity finite_sum_density(int n, const ReducedParams& rp, const Grid& grid) {
    if (n < 1) throw DomainError("n must be >= 1");
    GridDensity F = lognormal_density(grid, rp);
    if (n == 1) return F;
    KernelOperator op(grid, rp);
    std::vector<double> next(grid.n_points);
    for (int i = 1; i < n; ++i) {
        op.apply(F.values, next);
        std::swap(F.values, next);
    }
    return F;
}

GridDensity finite_sum_density_derivative_form(int n, const ReducedParams& rp, const Grid& grid,
                                               std::optional<int> k_terms, Diagnostics* diag) {
    if (n < 1) throw DomainError("n must be >= 1");
    int terms = k_terms.value_or(n);
    if (terms < 1 || terms > n) throw DomainError("k_terms must lie in [1, n]");
    if (terms < n) warn(diag, "truncated derivative expansion has no error control");

    GridDensity f1 = lognormal_density(grid, rp);
    GridDensity out = f1;
    if (terms == 1) return out;
    KernelOperator op(grid, rp);
    const std::size_t N = grid.n_points;
    // e_k = d_k / k! obeys e_1 = f_1 - T f_1 and e_k = -T e_{k-1}; f_n = sum (-1)^k e_k.
    std::vector<double> e = op.apply(f1.values);
    for (std::size_t j = 0; j < N; ++j) e[j] = f1.values[j] - e[j];
    double largest = sup_norm(e);
    std::vector<double> next(N);
    double sign = -1.0;
    for (int k = 1; k < terms; ++k) {
        if (k > 1) {
            op.apply(e, next);
            for (std::size_t j = 0; j < N; ++j) e[j] = -next[j];
            largest = std::max(largest, sup_norm(e));
        }
        for (std::size_t j = 0; j < N; ++j) out.values[j] += sign * e[j];
        sign = -sign;
    }
    // d_k itself is k! e_k; report when the unscaled terms dwarf the result.
    double fact = std::tgamma(static_cast<double>(terms));
    double scale = sup_norm(out.values);
    if (largest * fact > 1e8 * scale) {
        warn(diag, "alternating derivative expansion suffers catastrophic cancellation");
    }
    for (double& v : out.values) {
        if (v < 0.0 && v > -1e-14 * std::max(scale, 1.0)) v = 0.0;
    }
    return out;
}

ReducedParams AsianSpec::reduced() const {
    ModelParams mp{sigma, rate - dividend, tau(), 0.0};
    return reduce(mp);
}

void validate(const AsianSpec& s) {
    if (!(s.s0 > 0.0)) throw DomainError("spot must be positive");
    if (!(s.strike >= 0.0)) throw DomainError("strike must be non-negative");
    if (!(s.sigma >= 0.0)) throw DomainError("volatility must be non-negative");
    if (!(s.maturity > 0.0)) throw DomainError("maturity must be positive");
    if (s.n_fixings < 1) throw DomainError("need at least one fixing");
    if (!std::isfinite(s.rate) || !std::isfinite(s.dividend)) throw DomainError("rates must be finite");
}

AsianQuote price_asian(const AsianSpec& spec, const AsianOptions& opts, Diagnostics* diag) {
    validate(spec);
    const int n = spec.n_fixings;
    const double tau = spec.tau();
    const double m = spec.rate - spec.dividend;
    const double disc = std::exp(-spec.rate * spec.maturity);
    const double kappa = n * spec.strike / spec.s0;
    const double scale = disc * spec.s0 / n;

    AsianQuote q;
    double mean_x = mean_finite_sum(n, m, tau, 1.0);
    q.mean_exact = spec.s0 * mean_x / n;

    if (spec.sigma == 0.0) {
        q.call = scale * std::max(mean_x - kappa, 0.0);
        q.put = scale * std::max(kappa - mean_x, 0.0);
        q.mean_numeric = q.mean_exact;
    } else {
        ReducedParams rp = spec.reduced();
        double h = guarded_step(opts.h, rp.beta);
        double U = opts.u_max ? *opts.u_max
                              : std::log1p(mean_x * std::exp(10.0 * std::sqrt(rp.beta * n)));
        GridDensity F;
        for (int attempt = 0;; ++attempt) {
            Grid grid = Grid::with_extent(h, U);
            if (grid.n_points > kMaxPoints) throw DomainError("grid for this Asian spec is too large");
            F = finite_sum_density(n, rp, grid);
            double call_x = integrate_grid(F, std::log1p(kappa), grid.u_max(), Payoff::call(kappa));
            double trunc = truncated_first_moment(F);
            if (opts.u_max || trunc <= opts.truncation_rel * std::max(call_x, 1e-300) || attempt == 6) {
                q.truncation_dominated = trunc > 1e-5 * call_x;
                if (q.truncation_dominated) {
                    warn(diag, "truncated tail mass times x_max exceeds 1e-5 of the price");
                }
                break;
            }
            U *= 1.25;
        }
        q.h = F.grid.h;
        q.u_max = F.grid.u_max();
        double uk = kappa > 0.0 ? std::log1p(kappa) : 0.0;
        double call_x = integrate_grid(F, uk, F.grid.u_max(), Payoff::call(kappa));
        double put_x = kappa > 0.0 ? integrate_grid(F, 0.0, uk, Payoff::put(kappa)) : 0.0;
        q.call = scale * call_x;
        q.put = scale * put_x;
        q.mean_numeric = spec.s0 / n * integrate_grid(F, 0.0, F.grid.u_max(), Payoff::power(1.0));
    }
    q.parity_gap = (q.call - q.put) - disc * (q.mean_exact - spec.strike);
    q.parity_gap_continuous = (q.call - q.put) - disc * (continuous_average_mean(spec) - spec.strike);
    return q;
}

double asian_call(const AsianSpec& spec) { return price_asian(spec).call; }

double asian_put(const AsianSpec& spec) { return price_asian(spec).put; }

double put_call_parity_gap(const AsianSpec& spec) { return price_asian(spec).parity_gap; }

double geometric_maturity_option(const ReducedParams& rp, double kappa, const SolveOptions& opts) {
    if (!(rp.p > 0.0 && rp.p < 1.0)) throw DomainError("geometric_maturity_option requires 0 < p < 1");
    if (!(kappa >= 0.0)) throw DomainError("kappa must be non-negative");
    double mu = exponent_geometric(rp);
    if (!(mu > 1.0)) throw DivergentExpectation("tail exponent <= 1: E[X_N] is infinite");
    SolveResult res = solve_geometric(rp, opts);
    if (kappa == 0.0) return expectation(res.density, Payoff::power(1.0));
    return expectation(res.density, Payoff::call(kappa));
}

double makeham_survival(double a, double a0, const MakehamMortality& mk) {
    if (a <= a0) return 1.0;
    double integral = mk.A * (a - a0)
                      + mk.B / mk.beta_mk * (std::exp(mk.beta_mk * a) - std::exp(mk.beta_mk * a0));
    return std::exp(-integral);
}

GeneralMortality horizon_weights(const MortalityModel& model, int cap, double a0) {
    if (cap < 1) throw DomainError("horizon cap must be >= 1");
    GeneralMortality out;
    out.weights.resize(cap);
    if (const auto* g = std::get_if<GeometricMortality>(&model)) {
        if (!(g->p > 0.0 && g->p <= 1.0)) throw DomainError("geometric p must lie in (0,1]");
        for (int i = 0; i < cap; ++i) out.weights[i] = g->p * std::pow(1.0 - g->p, i);
    } else if (const auto* gm = std::get_if<GeneralMortality>(&model)) {
        for (int i = 0; i < cap; ++i) {
            out.weights[i] = i < static_cast<int>(gm->weights.size()) ? gm->weights[i] : 0.0;
        }
    } else {
        const auto& mk = std::get<MakehamMortality>(model);
        for (int i = 0; i < cap; ++i) {
            out.weights[i] = makeham_survival(a0 + i, a0, mk) - makeham_survival(a0 + i + 1, a0, mk);
        }
    }
    double total = 0.0;
    for (double w : out.weights) {
        if (!(w >= 0.0)) throw DomainError("horizon weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw DomainError("horizon weights sum to zero");
    for (double& w : out.weights) w /= total;
    return out;
}

GridDensity mixture_density(const GeneralMortality& mortality, const ReducedParams& rp,
                            const Grid& grid, std::optional<double> tail_exponent) {
    const auto& w = mortality.weights;
    if (w.empty()) throw DomainError("mixture needs at least one weight");
    double total = 0.0;
    for (double v : w) {
        if (!(v >= 0.0)) throw DomainError("mixture weights must be non-negative");
        total += v;
    }
    if (!(total > 0.0)) throw DomainError("mixture weights sum to zero");

    GridDensity f = lognormal_density(grid, rp);
    GridDensity out{grid, std::vector<double>(grid.n_points, 0.0), std::nullopt};
    KernelOperator op(grid, rp, tail_exponent);
    std::vector<double> next(grid.n_points);
    double remaining = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double wi = w[i] / total;
        for (std::size_t j = 0; j < grid.n_points; ++j) out.values[j] += wi * f.values[j];
        remaining -= wi;
        // Later terms cannot change the result in double precision.
        if (remaining < 1e-16) break;
        if (i + 1 < w.size()) {
            op.apply(f.values, next);
            std::swap(f.values, next);
        }
    }
    if (tail_exponent) {
        double X = grid.x_max();
        double c = out.values.back() * std::exp((*tail_exponent + 1.0) * std::log(X)) / *tail_exponent;
        out.tail = TailAsymptote{*tail_exponent, c, TailRegime::geometric_sum};
    }
    return out;
}

double makeham_match_p(double a0, MatchMethod method, const MakehamMortality& mk) {
    if (!(a0 >= 0.0 && a0 <= 120.0)) throw DomainError("age must lie in [0, 120]");
    if (!(mk.A >= 0.0 && mk.B >= 0.0 && mk.beta_mk > 0.0)) throw DomainError("invalid Makeham parameters");
    if (method == MatchMethod::hazard_rate) {
        double p = -std::expm1(-(mk.A + mk.B / mk.beta_mk * std::exp(mk.beta_mk * a0)
                                           * std::expm1(mk.beta_mk)));
        if (!(p > 0.0 && p < 1.0)) throw NoRoot("hazard matching has no solution in (0,1)");
        return p;
    }
    double a_end = 130.0;
    while (makeham_survival(a_end, a0, mk) >= 1e-12) {
        a_end += 10.0;
        if (a_end > 1000.0) throw NoRoot("remaining life expectancy diverges");
    }
    auto ps = [&](double a) { return makeham_survival(a, a0, mk); };
    double e = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(ps, a0, a_end, 20, 1e-13);
    return 1.0 / e;
}

}  // namespace gbmsum
