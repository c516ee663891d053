#include "gbmsum/mc.hpp"

#include "gbmsum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gbmsum {

namespace {

// SplitMix64 finalizer, used to derive independent per-path seeds.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(mix64(mix64(seed) ^ mix64(index + 1)));
}

void validate(const McConfig& cfg) {
    if (cfg.n_paths < 1000) throw DomainError("Monte Carlo needs at least 1000 paths");
    if (const auto* f = std::get_if<FixedHorizon>(&cfg.horizon)) {
        if (f->n < 1) throw DomainError("fixed horizon must be >= 1");
    } else if (const auto* g = std::get_if<GeometricHorizon>(&cfg.horizon)) {
        if (!(g->p > 0.0 && g->p <= 1.0)) throw DomainError("geometric horizon needs 0 < p <= 1");
    } else {
        const auto& w = std::get<GeneralHorizon>(cfg.horizon).weights;
        double s = 0.0;
        for (double v : w) {
            if (!(v >= 0.0)) throw DomainError("horizon weights must be non-negative");
            s += v;
        }
        if (w.empty() || !(s > 0.0)) throw DomainError("horizon weights must have positive sum");
    }
}

class HorizonSampler {
public:
    explicit HorizonSampler(const Horizon& h) : h_(h) {
        if (const auto* g = std::get_if<GeneralHorizon>(&h_)) {
            cum_.resize(g->weights.size());
            std::partial_sum(g->weights.begin(), g->weights.end(), cum_.begin());
            double total = cum_.back();
            for (double& c : cum_) c /= total;
        }
    }

    int operator()(std::mt19937_64& gen) const {
        if (const auto* f = std::get_if<FixedHorizon>(&h_)) return f->n;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        if (const auto* g = std::get_if<GeometricHorizon>(&h_)) {
            if (g->p >= 1.0) return 1;
            double u = 1.0 - unif(gen);  // (0, 1]
            return 1 + static_cast<int>(std::floor(std::log(u) / std::log1p(-g->p)));
        }
        double u = unif(gen);
        auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
        return 1 + static_cast<int>(std::min<std::ptrdiff_t>(it - cum_.begin(),
                                                            static_cast<std::ptrdiff_t>(cum_.size()) - 1));
    }

private:
    const Horizon& h_;
    std::vector<double> cum_;
};

struct Accumulator {
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;

    void add(double x) {
        ++count;
        double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
};

std::vector<McEstimate> finish(const std::vector<Accumulator>& acc, std::size_t n_paths) {
    std::vector<McEstimate> out;
    for (const auto& a : acc) {
        double var = a.count > 1 ? a.m2 / static_cast<double>(a.count - 1) : 0.0;
        out.push_back({a.mean, std::sqrt(var / static_cast<double>(a.count)), n_paths});
    }
    return out;
}

// Runs `sample(gen, sign)` -> value of the simulated quantity for each path, pairing paths
// with sign = +1/-1 when antithetic.
template <class Sample>
std::vector<McEstimate> run(const McConfig& cfg, const std::vector<Statistic>& stats, Sample&& sample) {
    std::vector<Accumulator> acc(stats.size());
    if (cfg.antithetic) {
        std::size_t pairs = (cfg.n_paths + 1) / 2;
        for (std::size_t i = 0; i < pairs; ++i) {
            auto gen = path_stream(cfg.seed, i);
            auto [xp, xm] = sample(gen);
            for (std::size_t s = 0; s < stats.size(); ++s) {
                acc[s].add(0.5 * (stats[s](xp) + stats[s](xm)));
            }
        }
        return finish(acc, 2 * pairs);
    }
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        auto gen = path_stream(cfg.seed, i);
        double x = sample(gen).first;
        for (std::size_t s = 0; s < stats.size(); ++s) acc[s].add(stats[s](x));
    }
    return finish(acc, cfg.n_paths);
}

}  // namespace

std::vector<McEstimate> simulate_sum(const ReducedParams& rp, const McConfig& cfg,
                                     const std::vector<Statistic>& statistics) {
    validate(cfg);
    if (!(rp.beta > 0.0)) throw DomainError("beta must be positive");
    HorizonSampler horizon(cfg.horizon);
    const double drift = rp.rho - 0.5 * rp.beta;
    const double sd = std::sqrt(rp.beta);
    const bool anti = cfg.antithetic;
    auto sample = [&](std::mt19937_64& gen) {
        std::normal_distribution<double> norm;
        int n = horizon(gen);
        double lp = 0.0, lm = 0.0, xp = 0.0, xm = 0.0;
        for (int i = 0; i < n; ++i) {
            double z = norm(gen);
            lp += drift + sd * z;
            xp += std::exp(lp);
            if (anti) {
                lm += drift - sd * z;
                xm += std::exp(lm);
            }
        }
        return std::pair<double, double>{xp, xm};
    };
    return run(cfg, statistics, sample);
}

McEstimate simulate_sum(const ReducedParams& rp, const McConfig& cfg, const Statistic& statistic) {
    return simulate_sum(rp, cfg, std::vector<Statistic>{statistic}).front();
}

int perpetuity_horizon(const ReducedParams& rp) {
    if (!(rp.rho < 0.0)) throw InfeasibleParameters("perpetuity proxy needs rho < 0");
    double n = std::log(1e-6 * -std::expm1(rp.rho)) / rp.rho;
    return static_cast<int>(std::ceil(n));
}

std::vector<McEstimate> simulate_time_integral(double sigma, double m, const TimeHorizon& horizon,
                                               int substeps, const McConfig& cfg,
                                               const std::vector<Statistic>& statistics) {
    if (substeps < 100) throw DomainError("need at least 100 substeps");
    if (cfg.n_paths < 1000) throw DomainError("Monte Carlo needs at least 1000 paths");
    if (!(sigma >= 0.0)) throw DomainError("sigma must be non-negative");
    if (horizon.maturity.has_value() == horizon.lambda.has_value()) {
        throw DomainError("give exactly one of a fixed maturity or an exponential rate");
    }
    if (horizon.maturity && !(*horizon.maturity > 0.0)) throw DomainError("maturity must be positive");
    if (horizon.lambda && !(*horizon.lambda > 0.0)) throw DomainError("lambda must be positive");
    const double drift = m - 0.5 * sigma * sigma;
    const bool anti = cfg.antithetic;
    auto sample = [&](std::mt19937_64& gen) {
        double T;
        if (horizon.maturity) {
            T = *horizon.maturity;
        } else {
            std::exponential_distribution<double> ex(*horizon.lambda);
            T = ex(gen);
        }
        std::normal_distribution<double> norm;
        double dt = T / substeps;
        double sdt = sigma * std::sqrt(dt);
        double yp = 0.0, ym = 0.0, ip = 0.0, im = 0.0;
        double ep = 1.0, em = 1.0;
        for (int i = 0; i < substeps; ++i) {
            double z = norm(gen);
            yp += drift * dt + sdt * z;
            double np = std::exp(yp);
            ip += 0.5 * dt * (ep + np);
            ep = np;
            if (anti) {
                ym += drift * dt - sdt * z;
                double nm = std::exp(ym);
                im += 0.5 * dt * (em + nm);
                em = nm;
            }
        }
        return std::pair<double, double>{ip, im};
    };
    return run(cfg, statistics, sample);
}

McEstimate simulate_time_integral(double sigma, double m, const TimeHorizon& horizon, int substeps,
                                  const McConfig& cfg, const Statistic& statistic) {
    return simulate_time_integral(sigma, m, horizon, substeps, cfg, std::vector<Statistic>{statistic}).front();
}

}  // namespace gbmsum
