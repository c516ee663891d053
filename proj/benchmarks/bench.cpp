#include "gbmsum/pricing.hpp"
#include "gbmsum/solver.hpp"
#include "gbmsum/tails.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace gbmsum;

static void BM_KernelApply(benchmark::State& state) {
    double beta = state.range(0) / 100.0;
    auto rp = make_reduced(beta, -0.1);
    Grid g = Grid::with_extent(0.01, 12.0);
    KernelOperator op(g, rp, exponent_infinite(rp));
    std::vector<double> F(g.n_points), out(g.n_points);
    for (std::size_t j = 0; j < g.n_points; ++j) F[j] = std::exp(-g.u(j));
    for (auto _ : state) {
        op.apply(F, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.counters["points"] = static_cast<double>(g.n_points);
}
BENCHMARK(BM_KernelApply)->Arg(100)->Arg(10)->Arg(1)->Unit(benchmark::kMicrosecond);

static void BM_SolveInfinite(benchmark::State& state) {
    double beta = state.range(0) / 100.0;
    auto rp = make_reduced(beta, -0.1);
    for (auto _ : state) {
        SolveResult r = solve_infinite(rp, SolveOptions{});
        benchmark::DoNotOptimize(r.density.values.data());
    }
}
BENCHMARK(BM_SolveInfinite)->Arg(100)->Arg(10)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_AsianCall(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        AsianQuote q = price_asian(AsianSpec{100.0, 100.0, 0.1, 0.0, 0.4, 1.0, n});
        benchmark::DoNotOptimize(q.call);
    }
}
BENCHMARK(BM_AsianCall)->Arg(10)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
