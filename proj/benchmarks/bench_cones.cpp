#include <benchmark/benchmark.h>

#include <cmath>

#include "colwave/cones.hpp"

using namespace colwave;

static void BM_MinkowskiSum2D(benchmark::State& state) {
    Cone g1 = Cone::ray(Vec{1.0, 0.0});
    Cone g2 = Cone::ray(Vec{0.0, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(minkowski_sum(g1, g2).cone.samples().size());
}
BENCHMARK(BM_MinkowskiSum2D)->Unit(benchmark::kMillisecond);

static void BM_SeparationConstant(benchmark::State& state) {
    Cone g1 = Cone::ray(Vec{1.0, 0.0});
    Cone g2 = Cone::ray(Vec{0.0, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(separation_constant(g1, g2));
}
BENCHMARK(BM_SeparationConstant)->Unit(benchmark::kMillisecond);

static void BM_ExactSumMembership(benchmark::State& state) {
    GeneratorCurve c1{[](double t) { return Vec{-1.0, t, t * t}; }, 0.0, 1.0, 129};
    GeneratorCurve c2{[](double t) { return Vec{1.0, t, t * t}; }, 0.0, 1.0, 129};
    Cone g1 = Cone::from_curves(3, {c1});
    Cone g2 = Cone::from_curves(3, {c2});
    for (auto _ : state)
        benchmark::DoNotOptimize(sum_union_contains_exact(g1, g2, Vec{0.0, 2.0, 0.0}));
}
BENCHMARK(BM_ExactSumMembership)->Unit(benchmark::kMillisecond);
