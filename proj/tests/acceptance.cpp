// Acceptance run: one [PASS]/[FAIL] line per criterion, non-zero exit if any fails.

#include "gbmsum/distributions.hpp"
#include "gbmsum/mc.hpp"
#include "gbmsum/moments.hpp"
#include "gbmsum/pricing.hpp"
#include "gbmsum/solver.hpp"
#include "gbmsum/tails.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace gbmsum;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void run(int id, const std::string& title, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail += std::string(" exception: ") + e.what();
    }
    report(id, title, ok, detail);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

struct AsianRow {
    int n;
    double s0;
    double price;
};

const AsianRow kAsianPrices[] = {
    {10, 95, 9.2239},    {10, 100, 12.0424},   {10, 105, 15.2243},  {25, 95, 8.7086},
    {25, 100, 11.4910},  {25, 105, 14.6510},   {50, 95, 8.5371},    {50, 100, 11.3070},
    {50, 105, 14.4611},  {125, 95, 8.4347},    {125, 100, 11.1974}, {125, 105, 14.3459},
    {250, 95, 8.4006},   {250, 100, 11.1607},  {250, 105, 14.3081}, {500, 95, 8.3831},
    {500, 100, 11.1422}, {500, 105, 14.2887},  {1000, 95, 8.3718},  {1000, 100, 11.1301},
    {1000, 105, 14.2754},
};

struct ShortfallRow {
    double beta, rho, p, q, discrete, continuous;
};

const ShortfallRow kShortfallRows[] = {
    {1, 0, 0.1, 0, 0.10852, 0.10658},       {1, 0, 0.1, 0.5, 0.07122, 0.06849},
    {1, 0, 0.01, 0, 0.01781, 0.01783},      {1, 0, 0.01, 0.5, 0.01187, 0.01183},
    {0.1, 0, 0.1, 0, 0.26821, 0.27067},     {0.1, 0, 0.1, 0.5, 0.15846, 0.15899},
    {0.1, 0, 0.01, 0, 0.10625, 0.10658},    {0.1, 0, 0.01, 0.5, 0.06853, 0.06849},
    {1, -0.1, 0.1, 0, 0.16415, 0.17072},    {1, -0.1, 0.1, 0.5, 0.10509, 0.10605},
    {1, -0.1, 0.01, 0, 0.12334, 0.13083},   {1, -0.1, 0.01, 0.5, 0.08018, 0.08321},
    {0.1, -0.1, 0.1, 0, 0.34969, 0.37558},  {0.1, -0.1, 0.1, 0.5, 0.17592, 0.19044},
    {0.1, -0.1, 0.01, 0, 0.32828, 0.35577}, {0.1, -0.1, 0.01, 0.5, 0.15949, 0.17039},
};

double mean_geometric(const ReducedParams& rp) {
    double a = std::exp(rp.rho);
    return a / (1.0 - (1.0 - rp.p) * a);
}

SolveResult solve(const ReducedParams& rp, int max_iter = 500) {
    SolveOptions o;
    o.max_iter = max_iter;
    return rp.p == 0.0 ? solve_infinite(rp, o) : solve_geometric(rp, o);
}

std::vector<AsianQuote> asian_quotes;
std::vector<double> asian_seconds;

}  // namespace

int main() {
    run(1, "Asian option prices", [](std::string& d) {
        double worst = 0.0, slowest = 0.0;
        for (const AsianRow& r : kAsianPrices) {
            auto t0 = std::chrono::steady_clock::now();
            AsianQuote q = price_asian(AsianSpec{r.s0, 100.0, 0.1, 0.0, 0.4, 1.0, r.n});
            double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            asian_quotes.push_back(q);
            asian_seconds.push_back(t);
            worst = std::max(worst, std::fabs(q.call - r.price));
            slowest = std::max(slowest, t);
        }
        d = fmt("max |C - reference| = %.2e (tol 5e-3), slowest scenario %.2f s", worst, slowest);
        return worst <= 5e-3 && slowest <= 60.0;
    });

    run(2, "Shortfall probabilities", [](std::string& d) {
        double worst_d = 0.0, worst_c = 0.0;
        const ReducedParams* last = nullptr;
        ReducedParams rp{};
        SolveResult r;
        for (const ShortfallRow& row : kShortfallRows) {
            if (!last || rp.beta != row.beta || rp.rho != row.rho || rp.p != row.p) {
                rp = make_reduced(row.beta, row.rho, row.p);
                r = solve(rp);
                last = &rp;
            }
            double K = mean_geometric(rp);
            worst_d = std::max(worst_d, std::fabs(shortfall_probability(r.density, K, row.q) - row.discrete));
            double c = shortfall_continuous(std::sqrt(rp.beta), rp.rho, rp.p, K, row.q);
            worst_c = std::max(worst_c, std::fabs(c - row.continuous));
        }
        d = fmt("max discrete error %.2e (tol 2e-3), max continuous error %.2e (tol 5e-4)", worst_d, worst_c);
        return worst_d <= 2e-3 && worst_c <= 5e-4;
    });

    run(3, "Mean checks", [](std::string& d) {
        SolveResult g = solve(make_reduced(1.0, 0.0, 0.1));
        double mg = expectation(g.density, Payoff::power(1.0));
        SolveResult i = solve(make_reduced(1.0, -0.1));
        double mi = expectation(i.density, Payoff::power(1.0));
        double ref = std::exp(-0.1) / -std::expm1(-0.1);
        d = fmt("E[X_N] = %.6f in [9.999, 10.001]; ", mg) +
            fmt("E[X_inf] - exact = %.2e (tol 1e-4)", mi - ref);
        return mg >= 9.999 && mg <= 10.001 && std::fabs(mi - ref) <= 1e-4;
    });

    run(4, "Convergence diagnostics", [](std::string& d) {
        bool ok = true;
        for (double beta : {1.0, 0.5, 0.1, 0.01}) {
            SolveResult r = solve(make_reduced(beta, -0.1));
            int n = r.report.iterations_to_tol;
            ok = ok && n > 0 && n <= 150 && r.report.delta_trace[n - 1] <= 1e-8;
            d += fmt("beta=%g: delta<=1e-8 at n=%.0f; ", beta, n);
        }
        return ok;
    });

    run(5, "Put-call parity", [](std::string& d) {
        double worst = 0.0;
        for (const AsianQuote& q : asian_quotes) worst = std::max(worst, std::fabs(q.parity_gap));
        d = fmt("max |gap| = %.2e over %.0f scenarios (tol 1e-4)", worst, double(asian_quotes.size()));
        return asian_quotes.size() == 21 && worst <= 1e-4;
    });

    run(6, "Right tail exponent and constant", [](std::string& d) {
        bool ok = true;
        struct Case { double beta, rho, p; };
        for (Case c : {Case{1, -0.1, 0}, Case{1, 0, 0.1}, Case{0.1, 0, 0.01}}) {
            auto rp = make_reduced(c.beta, c.rho, c.p);
            SolveResult r = solve(rp);
            double ref = c.p == 0.0 ? exponent_infinite(rp) : exponent_geometric(rp);
            // interior window, clear of the power-law closure at u_max
            double U = r.density.grid.u_max();
            PlateauFit f = fit_tail_plateau(r.density, ref, std::expm1(U - 10.0), std::expm1(U - 8.0));
            double rel = std::fabs(f.exponent / ref - 1.0);
            ok = ok && rel <= 0.05;
            d += fmt("(%g,", c.beta) + fmt("%g,", c.rho) + fmt("%g) ", c.p) + fmt("fit %.4f vs %.4f; ", f.exponent, ref);
        }
        for (double beta : {1.0, 0.1}) {
            auto rp = make_reduced(beta, 0.0);
            SolveResult r = solve(rp);
            double c = tail_constant_infinite(r.density, rp);
            ok = ok && std::fabs(c * beta / 2.0 - 1.0) <= 0.05;
            d += fmt("rho=0 beta=%g: c=%.4f ", beta, c) + fmt("vs 2/beta=%.4f; ", 2.0 / beta);
        }
        return ok;
    });

    run(7, "Left tail", [](std::string& d) {
        bool ok = true;
        struct Case { double beta, rho, p; };
        for (Case c : {Case{1, -0.1, 0}, Case{1, 0, 0.1}, Case{0.1, 0, 0.01}}) {
            auto rp = make_reduced(c.beta, c.rho, c.p);
            SolveResult r = solve(rp);
            double a = fit_left_tail_slope(r.density, rp, 1e-4, 1e-2);
            double target = -0.5 / c.beta;
            ok = ok && std::fabs(a / target - 1.0) <= 0.15;
            d += fmt("beta=%g: %.4f ", c.beta, a) + fmt("vs %.4f; ", target);
        }
        return ok;
    });

    run(8, "Continuous-limit convergence", [](std::string& d) {
        const double sigma = 1.0, m = -0.5;
        bool ok = true;
        for (double lambda : {0.0, 0.5}) {
            std::vector<double> dist;
            for (double beta : {0.2, 0.1, 0.05}) {
                double tau = beta / (sigma * sigma);
                auto rp = make_reduced(beta, m * tau, lambda * tau);
                SolveResult r = solve(rp, 2000);
                double sup = 0.0;
                for (int i = 1; i <= 5000; ++i) {
                    double z = 0.002 * i;
                    double disc = cdf(r.density, z / tau);
                    double cont = 1.0 - yor_survival(z, sigma, m, lambda);
                    sup = std::max(sup, std::fabs(disc - cont));
                }
                dist.push_back(sup);
            }
            ok = ok && dist[1] < dist[0] && dist[2] < dist[1];
            d += fmt("lambda=%g: ", lambda) + fmt("%.4f > %.4f > ", dist[0], dist[1]) + fmt("%.4f; ", dist[2]);
        }
        return ok;
    });

    run(9, "Yor moment identity and left limit", [](std::string& d) {
        double worst = 0.0;
        struct Case { double mu, lambda; };
        for (Case c : {Case{-1.0, 0.5}, Case{-1.0, 2.0}, Case{-0.3, 2.0}}) {
            for (int i = 1; i <= 9; ++i) worst = std::max(worst, std::fabs(yor_moment_residual(0.1 * i, c.mu, c.lambda)));
        }
        double lim = 0.0;
        for (double lambda : {0.01, 0.1, 0.5}) {
            lim = std::max(lim, std::fabs(yor_pdf(1e-6, 1.0, -0.1, lambda) - lambda));
        }
        d = fmt("max residual %.2e (tol 1e-8), max |phi(0+) - lambda| %.2e (tol 1e-4)", worst, lim);
        return worst <= 1e-8 && lim <= 1e-4;
    });

    run(10, "Finite-sum cross construction", [](std::string& d) {
        double worst = 0.0;
        for (auto [beta, rho] : {std::pair{0.2, 0.0}, std::pair{1.0, -0.1}, std::pair{0.04, 0.01}}) {
            auto rp = make_reduced(beta, rho);
            Grid g = Grid::with_extent(guarded_step(0.01, beta), 10.0);
            for (int n = 1; n <= 5; ++n) {
                GridDensity a = finite_sum_density(n, rp, g);
                GridDensity b = finite_sum_density_derivative_form(n, rp, g);
                for (std::size_t j = 0; j < a.values.size(); ++j) {
                    worst = std::max(worst, std::fabs(a.values[j] - b.values[j]));
                }
            }
        }
        d = fmt("max sup-norm difference n<=5: %.2e (tol 1e-6)", worst);
        return worst <= 1e-6;
    });

    run(11, "Moment recursions and Monte Carlo", [](std::string& d) {
        auto rp = make_reduced(0.05, -0.2);
        auto mm = MultiplierMoments::gbm(rp);
        auto rec = moments_geometric(4, mm, 0.0);
        auto prod = moments_infinite_product_form(4, mm);
        double rel = 0.0;
        for (int k = 1; k <= 4; ++k) rel = std::max(rel, std::fabs(prod[k] / rec[k] - 1.0));

        McConfig cfg;
        cfg.n_paths = 1000000;
        cfg.seed = 42;
        cfg.horizon = FixedHorizon{perpetuity_horizon(rp)};
        std::vector<Statistic> stats;
        for (int k = 1; k <= 4; ++k) stats.push_back([k](double x) { return std::pow(x, k); });
        auto est = simulate_sum(rp, cfg, stats);
        double worst_z = 0.0;
        for (int k = 1; k <= 4; ++k) worst_z = std::max(worst_z, std::fabs(est[k - 1].value - rec[k]) / est[k - 1].std_error);

        // geometric horizon at the same parameters
        auto rq = make_reduced(0.05, -0.2, 0.1);
        auto gq = moments_geometric(4, MultiplierMoments::gbm(rq), 0.1);
        McConfig gc = cfg;
        gc.horizon = GeometricHorizon{0.1};
        auto eg = simulate_sum(rq, gc, stats);
        for (int k = 1; k <= 4; ++k) worst_z = std::max(worst_z, std::fabs(eg[k - 1].value - gq[k]) / eg[k - 1].std_error);

        d = fmt("max relative recursion gap %.2e (tol 1e-12), max |MC - exact| / SE %.2f (tol 3)", rel, worst_z);
        return rel <= 1e-12 && worst_z <= 3.0;
    });

    run(12, "Makeham calibration", [](std::string& d) {
        double le = makeham_match_p(65.0, MatchMethod::life_expectancy);
        double hz = makeham_match_p(65.0, MatchMethod::hazard_rate);
        d = fmt("life expectancy p = %.5f (0.06443), ", le) + fmt("hazard p = %.5f (0.02132)", hz);
        return std::fabs(le - 0.06443) <= 5e-5 && std::fabs(hz - 0.02132) <= 5e-5;
    });

    run(13, "Quadrature error bound", [](std::string& d) {
        double a = solve(make_reduced(1.0, 0.0)).report.quadrature_bound / 1e-6;
        double b = solve(make_reduced(0.1, -0.1)).report.quadrature_bound / 1e-6;
        d = fmt("M = %.4f (0.41) and ", a) + fmt("%.4f (0.058)", b);
        auto within2 = [](double v, double ref) { return v >= 0.5 * ref && v <= 2.0 * ref; };
        return within2(a, 0.41) && within2(b, 0.058);
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
