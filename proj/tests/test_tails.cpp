#include "gbmsum/solver.hpp"
#include "gbmsum/tails.hpp"

#include "oracles.hpp"

#include <boost/math/tools/roots.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace gbmsum;

namespace {

// Positive root s of (1-p) E[A^s] = 1.
double exponent_oracle(double beta, double rho, double p) {
    auto f = [&](double s) { return std::log1p(-p) + s * rho + 0.5 * beta * s * (s - 1.0); };
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t it = 200;
    auto [lo, hi] = boost::math::tools::bisect(f, 1e-9, 200.0, tol, it);
    return 0.5 * (lo + hi);
}

struct Solved {
    ReducedParams rp;
    SolveResult r;
};

const Solved& solved(double beta, double rho, double p) {
    static std::vector<std::unique_ptr<Solved>> cache;
    for (const auto& s : cache) {
        if (s->rp.beta == beta && s->rp.rho == rho && s->rp.p == p) return *s;
    }
    auto rp = make_reduced(beta, rho, p);
    auto r = p == 0.0 ? solve_infinite(rp) : solve_geometric(rp);
    cache.push_back(std::make_unique<Solved>(Solved{rp, std::move(r)}));
    return *cache.back();
}

}  // namespace

TEST(Exponents, MatchRootOfMomentEquation) {
    for (double beta : {0.05, 0.5, 1.0, 2.0}) {
        for (double rho : {-0.3, -0.1, 0.0}) {
            auto rp = make_reduced(beta, rho);
            EXPECT_NEAR(exponent_infinite(rp), exponent_oracle(beta, rho, 0.0), 1e-9);
            for (double p : {0.001, 0.1, 0.5}) {
                auto rq = make_reduced(beta, rho, p);
                EXPECT_NEAR(exponent_geometric(rq), exponent_oracle(beta, rho, p), 1e-9);
            }
        }
    }
    EXPECT_NEAR(exponent_geometric(make_reduced(1.0, 0.0, 0.1)), 1.1787643415, 1e-9);
}

TEST(Exponents, GeometricReducesToInfiniteAtPZero) {
    auto rp = make_reduced(0.4, -0.1, 0.0);
    EXPECT_NEAR(exponent_geometric(rp), exponent_infinite(rp), 1e-14);
    EXPECT_THROW(exponent_infinite(make_reduced(1.0, 0.5)), InfeasibleParameters);
    EXPECT_THROW(exponent_geometric(make_reduced(1.0, 0.0, 1.0)), DomainError);
}

TEST(Exponents, MonotoneInP) {
    double prev = 0.0;
    for (double p : {0.0, 0.01, 0.05, 0.1, 0.3, 0.9}) {
        double mu = exponent_geometric(make_reduced(1.0, -0.1, p));
        EXPECT_GT(mu, prev);
        prev = mu;
    }
}

TEST(TailConstant, RhoZeroIsTwoOverBeta) {
    for (double beta : {1.0, 0.1}) {
        const auto& s = solved(beta, 0.0, 0.0);
        EXPECT_NEAR(s.r.density.tail->constant, 2.0 / beta, 0.01 * 2.0 / beta);
        EXPECT_NEAR(tail_constant_infinite(s.r.density, s.rp), 2.0 / beta, 0.01 * 2.0 / beta);
    }
}

TEST(TailConstant, GoldieFormulaMatchesInteriorPlateau) {
    struct Case { double beta, rho, p; };
    for (Case c : {Case{1.0, -0.1, 0.0}, Case{1.0, 0.0, 0.1}, Case{0.1, 0.0, 0.01}}) {
        const auto& s = solved(c.beta, c.rho, c.p);
        double ref = c.p == 0.0 ? exponent_infinite(s.rp) : exponent_geometric(s.rp);
        double goldie = c.p == 0.0 ? tail_constant_infinite(s.r.density, s.rp)
                                   : tail_constant_geometric(s.r.density, s.rp);
        // interior window, away from the closure at u_max
        double U = s.r.density.grid.u_max();
        double x_lo = std::expm1(U - 10.0), x_hi = std::expm1(U - 8.0);
        PlateauFit fit = fit_tail_plateau(s.r.density, ref, x_lo, x_hi);
        EXPECT_NEAR(fit.exponent, ref, 0.01 * ref);
        EXPECT_NEAR(fit.constant, goldie, 0.01 * goldie);
    }
}

TEST(TailConstant, ContinuousEstimateIsInverseGammaTail) {
    auto rp = make_reduced(0.5, -0.1);
    TailAsymptote t = tail_estimate(rp);
    double a = 1.0 + 0.2 / 0.5;
    double s = 2.0 / 0.5;
    EXPECT_NEAR(t.exponent, a, 1e-14);
    EXPECT_NEAR(t.constant, std::pow(s, a) / std::tgamma(a + 1.0), 1e-12);
    // survival of the inverse gamma times z^a tends to the constant
    double z = 1e7;
    double surv = oracle::integrate([&](double v) { return oracle::inverse_gamma_pdf(1.0 / v, a, s) / (v * v); }, 0.0, 1.0 / z);
    EXPECT_NEAR(surv * std::pow(z, a), t.constant, 1e-5 * t.constant);
}

TEST(LeftTail, SlopeApproachesMinusHalfOverBeta) {
    for (double beta : {1.0, 0.1}) {
        const auto& s = solved(beta, beta == 1.0 ? -0.1 : 0.0, beta == 1.0 ? 0.0 : 0.01);
        double a = fit_left_tail_slope(s.r.density, s.rp);
        double target = left_tail_coefficient(s.rp.p == 0.0 ? SumKind::infinite : SumKind::geometric, s.rp);
        EXPECT_NEAR(target, -0.5 / beta, 1e-15);
        EXPECT_NEAR(a, target, 0.15 * std::fabs(target));
    }
}

TEST(LeftTail, CdfAgreesWithGridWhereResolved) {
    const auto& s = solved(1.0, -0.1, 0.0);
    for (double eps : {0.05, 0.1, 0.2}) {
        EXPECT_NEAR(left_tail_cdf(s.r.density, s.rp, eps), cdf(s.r.density, eps), 2e-5);
    }
}

TEST(Shortfall, DiscreteAndContinuous) {
    const auto& s = solved(1.0, 0.0, 0.1);
    EXPECT_NEAR(shortfall_probability(s.r.density, 10.0, 0.5), survival(s.r.density, 15.0), 1e-15);
    EXPECT_NEAR(shortfall_continuous(1.0, 0.0, 0.1, 10.0, 0.0), 0.10658, 5e-6);
    EXPECT_NEAR(shortfall_continuous(1.0, 0.0, 0.1, 10.0, 0.5), 0.06849, 5e-6);
    EXPECT_THROW(shortfall_probability(s.r.density, -1.0, 0.0), DomainError);
}

TEST(Shortfall, NearUnitPIsSingleMultiplier) {
    auto rp = make_reduced(1.0, 0.0, 0.999);
    SolveResult r = solve_geometric(rp);
    double K = 1.0 / (1.0 - 0.001);
    double ref = 1.0 - oracle::norm_cdf(std::log(K) + 0.5);
    EXPECT_NEAR(shortfall_probability(r.density, K, 0.0), ref, 2e-3);
}

TEST(ValueAtRisk, PowerLawAndGridInversion) {
    TailAsymptote ta{1.5, 2.0, TailRegime::infinite_sum};
    double K = value_at_risk(ta, 1e-3);
    EXPECT_NEAR(2.0 * std::pow(K, -1.5), 1e-3, 1e-15);

    const auto& s = solved(1.0, -0.1, 0.0);
    VarResult deep = value_at_risk(*s.r.density.tail, 1e-4, s.r.density);
    EXPECT_TRUE(deep.power_law_regime);
    EXPECT_NEAR(survival(s.r.density, deep.threshold), 1e-4, 2e-6);

    Diagnostics diag;
    VarResult body = value_at_risk(*s.r.density.tail, 0.3, s.r.density, &diag);
    EXPECT_FALSE(body.power_law_regime);
    EXPECT_NEAR(survival(s.r.density, body.threshold), 0.3, 1e-8);
    EXPECT_FALSE(diag.empty());
}
