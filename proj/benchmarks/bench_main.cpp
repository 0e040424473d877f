#include <benchmark/benchmark.h>

#include "liyau/bounds.hpp"
#include "liyau/clock.hpp"
#include "liyau/geometry.hpp"
#include "liyau/heatflow.hpp"
#include "liyau/stochastic.hpp"

namespace {

using namespace liyau;

void BM_SpectralSolveSphere(benchmark::State& state) {
    const ModelManifold M = make_model_manifold(Family::SphereRadial, 2, 2.0);
    const InitialDatum u0 = InitialDatum::modes(1.0, {{1, 0.5}});
    for (auto _ : state) benchmark::DoNotOptimize(solve_heat(M, u0, 0.5, static_cast<int>(state.range(0)), Scheme::Spectral));
}
BENCHMARK(BM_SpectralSolveSphere)->Arg(257)->Arg(1025);

void BM_CrankNicolsonInterval(benchmark::State& state) {
    const ModelManifold M = make_model_manifold(Family::IntervalNeumann, 1, 1.0, "none", std::nullopt, 3.0);
    const InitialDatum u0 = InitialDatum::modes(1.0, {{1, 0.5}});
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_heat(M, u0, 0.5, static_cast<int>(state.range(0)), Scheme::CrankNicolsonFD));
}
BENCHMARK(BM_CrankNicolsonInterval)->Arg(257)->Arg(1025);

void BM_ClockIntegralsTrig(benchmark::State& state) {
    ClockParams p;
    p.K = 1.0;
    const Clock c = make_clock(ClockFamily::Trig, p, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(clock_integrals(c, 1.0, 1.0));
}
BENCHMARK(BM_ClockIntegralsTrig);

void BM_EvalBoundA2(benchmark::State& state) {
    BoundParams p;
    p.n = 2.0;
    p.K = 1.0;
    p.t = 0.5;
    p.alpha = 2.0;
    for (auto _ : state) benchmark::DoNotOptimize(eval_bound("A2", p));
}
BENCHMARK(BM_EvalBoundA2);

void BM_LocalTimeHalfLine(benchmark::State& state) {
    const ModelManifold M = make_model_manifold(Family::HalfLineNeumann, 1, 1.0);
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(local_time_mean(M, 0.0, 1.0, 1000, 1e-3, seed++));
}
BENCHMARK(BM_LocalTimeHalfLine)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
