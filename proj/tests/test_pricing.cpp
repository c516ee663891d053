#include "gbmsum/moments.hpp"
#include "gbmsum/pricing.hpp"
#include "gbmsum/solver.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gbmsum;

namespace {

struct Row {
    int n;
    double s0;
    double price;
};

// Reference discrete-monitoring Asian call prices, sigma = 0.4, r = 0.1, T = 1, K = 100.
const Row kAsianTable[] = {
    {10, 95, 9.2239},    {10, 100, 12.0424},   {10, 105, 15.2243},  {25, 95, 8.7086},
    {25, 100, 11.4910},  {25, 105, 14.6510},   {50, 95, 8.5371},    {50, 100, 11.3070},
    {50, 105, 14.4611},  {125, 95, 8.4347},    {125, 100, 11.1974}, {125, 105, 14.3459},
    {250, 95, 8.4006},   {250, 100, 11.1607},  {250, 105, 14.3081}, {500, 95, 8.3831},
    {500, 100, 11.1422}, {500, 105, 14.2887},  {1000, 95, 8.3718},  {1000, 100, 11.1301},
    {1000, 105, 14.2754},
};

AsianSpec table_spec(int n, double s0) { return AsianSpec{s0, 100.0, 0.1, 0.0, 0.4, 1.0, n}; }

double black_call(double s0, double K, double r, double q, double sigma, double T) {
    double s = sigma * std::sqrt(T);
    double d1 = (std::log(s0 / K) + (r - q + 0.5 * sigma * sigma) * T) / s;
    return s0 * std::exp(-q * T) * oracle::norm_cdf(d1) - K * std::exp(-r * T) * oracle::norm_cdf(d1 - s);
}

double sup_diff(const GridDensity& a, const GridDensity& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j) d = std::max(d, std::fabs(a.values[j] - b.values[j]));
    return d;
}

}  // namespace

TEST(Asian, ReferencePrices) {
    for (const Row& row : kAsianTable) {
        AsianQuote q = price_asian(table_spec(row.n, row.s0));
        EXPECT_NEAR(q.call, row.price, 5e-3) << row.n << ' ' << row.s0;
        EXPECT_LE(std::fabs(q.parity_gap), 1e-4) << row.n << ' ' << row.s0;
        EXPECT_NEAR(q.mean_numeric, q.mean_exact, 1e-4 * q.mean_exact);
        EXPECT_FALSE(q.truncation_dominated);
    }
}

TEST(Asian, SingleFixingIsBlackScholes) {
    for (double K : {80.0, 100.0, 125.0}) {
        AsianSpec s{100.0, K, 0.05, 0.02, 0.3, 0.5, 1};
        AsianQuote q = price_asian(s);
        EXPECT_NEAR(q.call, black_call(100.0, K, 0.05, 0.02, 0.3, 0.5), 2e-6 * 100.0);
    }
}

TEST(Asian, TwoFixingsAgainstNestedQuadrature) {
    // A_2 = s0/2 a1 (1 + a2) with a1, a2 iid lognormal(beta, rho)
    AsianSpec s{100.0, 105.0, 0.1, 0.0, 0.4, 1.0, 2};
    double beta = 0.16 * 0.5, rho = 0.1 * 0.5;
    double inner_K = 2.0 * s.strike / s.s0;
    auto outer = [&](double a1) {
        auto inner = [&](double a2) {
            return std::max(a1 * (1.0 + a2) - inner_K, 0.0) * oracle::lognormal_pdf(a2, beta, rho);
        };
        double kink = inner_K / a1 - 1.0;
        double v = kink > 0.0 ? oracle::integrate(inner, kink, kink + 60.0) : oracle::integrate(inner, 0.0, 60.0);
        return v * oracle::lognormal_pdf(a1, beta, rho);
    };
    double ref = std::exp(-0.1) * s.s0 / 2.0 * oracle::integrate(outer, 0.0, 40.0);
    EXPECT_NEAR(price_asian(s).call, ref, 1e-5);
}

TEST(Asian, ZeroStrikeIsDiscountedMean) {
    AsianSpec s = table_spec(25, 100.0);
    s.strike = 0.0;
    AsianQuote q = price_asian(s);
    double mean = mean_finite_sum(25, 0.1, 0.04, 100.0) / 25.0;
    EXPECT_NEAR(q.call, std::exp(-0.1) * mean, 1e-6 * mean);
    EXPECT_EQ(q.put, 0.0);
}

TEST(Asian, ZeroVolatilityIsDeterministic) {
    AsianSpec s = table_spec(10, 100.0);
    s.sigma = 0.0;
    AsianQuote q = price_asian(s);
    double mean = mean_finite_sum(10, 0.1, 0.1, 100.0) / 10.0;
    EXPECT_NEAR(q.call, std::exp(-0.1) * (mean - 100.0), 1e-12);
    EXPECT_EQ(q.put, 0.0);
}

TEST(Asian, ParityUsesDiscreteMean) {
    AsianQuote q = price_asian(table_spec(10, 100.0));
    EXPECT_LE(std::fabs(q.parity_gap), 1e-6);
    // the continuously averaged mean is visibly different at n = 10
    EXPECT_GT(std::fabs(q.parity_gap_continuous), 0.1);
}

TEST(Asian, TruncationIsFlagged) {
    AsianOptions o;
    o.u_max = 1.0;
    Diagnostics diag;
    AsianQuote q = price_asian(table_spec(10, 100.0), o, &diag);
    EXPECT_TRUE(q.truncation_dominated);
    EXPECT_FALSE(diag.empty());
}

TEST(Asian, Validation) {
    AsianSpec s = table_spec(10, 100.0);
    s.s0 = 0.0;
    EXPECT_THROW(price_asian(s), DomainError);
    s = table_spec(0, 100.0);
    EXPECT_THROW(price_asian(s), DomainError);
    s = table_spec(10, 100.0);
    s.maturity = -1.0;
    EXPECT_THROW(price_asian(s), DomainError);
}

TEST(FiniteSum, OneTermIsMultiplier) {
    auto rp = make_reduced(0.3, 0.02);
    Grid g = Grid::with_extent(0.01, 6.0);
    GridDensity f1 = finite_sum_density(1, rp, g);
    GridDensity ln = lognormal_density(g, rp);
    EXPECT_LE(sup_diff(f1, ln), 1e-15);
}

TEST(FiniteSum, DerivativeFormMatchesOperatorPowers) {
    auto rp = make_reduced(0.2, 0.0);
    Grid g = Grid::with_extent(0.01, 8.0);
    for (int n = 1; n <= 5; ++n) {
        GridDensity a = finite_sum_density(n, rp, g);
        GridDensity b = finite_sum_density_derivative_form(n, rp, g);
        EXPECT_LE(sup_diff(a, b), 1e-6) << n;
    }
}

TEST(FiniteSum, MeanMatchesClosedForm) {
    auto rp = make_reduced(0.04, 0.01);
    Grid g = Grid::with_extent(0.01, 10.0);
    for (int n : {2, 5, 20}) {
        GridDensity f = finite_sum_density(n, rp, g);
        double ref = mean_finite_sum(n, 0.01, 1.0, 1.0);
        EXPECT_NEAR(expectation(f, Payoff::power(1.0)), ref, 1e-6 * ref) << n;
    }
}

TEST(GeometricMaturity, ZeroStrikeIsMean) {
    auto rp = make_reduced(1.0, -0.1, 0.1);
    double mean = std::exp(-0.1) / (1.0 - 0.9 * std::exp(-0.1));
    EXPECT_NEAR(geometric_maturity_option(rp, 0.0), mean, 1e-4 * mean);
    double c = geometric_maturity_option(rp, 5.0);
    EXPECT_GT(c, std::max(mean - 5.0, 0.0));
    EXPECT_LT(c, mean);
    // mu <= 1: the call has infinite value
    EXPECT_THROW(geometric_maturity_option(make_reduced(1.0, 0.4, 0.01), 1.0), DivergentExpectation);
}

TEST(Mortality, HorizonWeights) {
    GeneralMortality w = horizon_weights(GeometricMortality{0.2}, 50);
    ASSERT_EQ(w.weights.size(), 50u);
    double sum = 0.0;
    for (double v : w.weights) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-14);
    for (std::size_t i = 1; i < 50; ++i) EXPECT_NEAR(w.weights[i] / w.weights[i - 1], 0.8, 1e-12);

    GeneralMortality mk = horizon_weights(MakehamMortality{}, 80, 65.0);
    double s = 0.0;
    for (double v : mk.weights) s += v;
    EXPECT_NEAR(s, 1.0, 1e-12);
    // first-year death probability
    EXPECT_NEAR(mk.weights[0], 1.0 - makeham_survival(66.0, 65.0, MakehamMortality{}), 1e-6);
}

TEST(Mortality, MixtureOfGeometricWeightsIsGeometricSum) {
    auto rp = make_reduced(1.0, 0.0, 0.1);
    SolveResult r = solve_geometric(rp);
    GridDensity mix = mixture_density(horizon_weights(GeometricMortality{0.1}, 400), rp, r.density.grid,
                                      r.density.tail->exponent);
    for (double x : {0.5, 3.0, 10.0, 40.0}) EXPECT_NEAR(cdf(mix, x), cdf(r.density, x), 1e-4) << x;
}

TEST(Makeham, MatchedProbabilities) {
    MakehamMortality mk;
    // complete life expectancy by composite Simpson
    const int n = 200000;
    const double len = 80.0, h = len / n;
    double e = 0.0;
    for (int i = 0; i <= n; ++i) {
        double t = i * h;
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        e += w * std::exp(-mk.A * t - mk.B / mk.beta_mk * std::exp(mk.beta_mk * 65.0) * std::expm1(mk.beta_mk * t));
    }
    e *= h / 3.0;
    double p_le = makeham_match_p(65.0, MatchMethod::life_expectancy, mk);
    EXPECT_NEAR(p_le, 1.0 / e, 1e-9);
    EXPECT_NEAR(p_le, 0.06443, 5e-5);

    double p_hz = makeham_match_p(65.0, MatchMethod::hazard_rate, mk);
    EXPECT_NEAR(p_hz, 1.0 - makeham_survival(66.0, 65.0, mk), 1e-15);
    EXPECT_NEAR(p_hz, 0.02132, 5e-5);
    EXPECT_THROW(makeham_match_p(-1.0, MatchMethod::hazard_rate, mk), DomainError);
}
