#include <benchmark/benchmark.h>

#include "dyncubes/relations.hpp"
#include "dyncubes/saturation.hpp"

using namespace dyncubes;

namespace {

constexpr double kAlpha = 0.618033988749895;

void BM_ApplyPowerSkew(benchmark::State& state) {
    const auto sys = SystemSpec::affine_skew(kAlpha, static_cast<int>(state.range(0)));
    std::vector<double> coords(static_cast<std::size_t>(state.range(0)), 0.25);
    const TorusPoint x(coords);
    std::int64_t k = 123456789;
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_power(sys, x, k));
        k += 7;
    }
}
BENCHMARK(BM_ApplyPowerSkew)->Arg(1)->Arg(2)->Arg(4);

void BM_SturmianCoding(benchmark::State& state) {
    const SymbolicPoint p{0.0, Convention::LeftClosed};
    for (auto _ : state) benchmark::DoNotOptimize(sturmian_coding(kAlpha, p, -30, 61));
}
BENCHMARK(BM_SturmianCoding);

void BM_SampleCubeSet(benchmark::State& state) {
    const auto sys = SystemSpec::affine_skew(kAlpha, 2);
    const SamplingBudget b{static_cast<int>(state.range(0)), 10, 1, 0};
    for (auto _ : state) benchmark::DoNotOptimize(sample_cube_set(sys, 2, b).points.size());
    state.SetItemsProcessed(state.iterations() * 100 * (2 * state.range(0) + 1) * (2 * state.range(0) + 1));
}
BENCHMARK(BM_SampleCubeSet)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_NearestGenerated(benchmark::State& state) {
    const auto sys = SystemSpec::affine_skew(kAlpha, 2);
    const CubeConfiguration c(2, {TorusPoint{0.1, 0.2}, TorusPoint{0.4, 0.9}, TorusPoint{0.7, 0.3}, TorusPoint{0.05, 0.6}});
    const auto bases = base_points(sys, {1, 20, 1, 0});
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(nearest_generated(sys, c, bases, N, std::nullopt, {1}).distance);
}
BENCHMARK(BM_NearestGenerated)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RpDistance(benchmark::State& state) {
    const auto sys = SystemSpec::affine_skew(kAlpha, 2);
    const RPQuery q{sys, TorusPoint{0.0, 0.0}, TorusPoint{0.0, 0.5}, 1, {{50, 40, 1, 0}, {100, 40, 1, 0}, {200, 40, 1, 0}}};
    for (auto _ : state) benchmark::DoNotOptimize(rp_distance(q, {1}).final_distance());
}
BENCHMARK(BM_RpDistance)->Unit(benchmark::kMillisecond);

void BM_UniqueCompletion(benchmark::State& state) {
    const auto sys = SystemSpec::rotation(kAlpha);
    const auto s = sample_cube_set(sys, 2, {static_cast<int>(state.range(0)), 10, 1, 0});
    for (auto _ : state) benchmark::DoNotOptimize(unique_completion_check(s, 0.01, 3.0).pair_count);
}
BENCHMARK(BM_UniqueCompletion)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
