#include <benchmark/benchmark.h>

#include "colwave/mollify.hpp"

using namespace colwave;

static void BM_BuildMollifier(benchmark::State& state) {
    for (auto _ : state) {
        Mollifier phi = build_mollifier(1.0, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(phi(0.3));
    }
}
BENCHMARK(BM_BuildMollifier)->Arg(0)->Arg(2)->Arg(4);

static void BM_MollifierEval(benchmark::State& state) {
    Mollifier phi = build_mollifier(1.0, 2);
    double x = -1.0;
    for (auto _ : state) {
        x += 1e-6;
        if (x > 1.0) x = -1.0;
        benchmark::DoNotOptimize(phi(x));
    }
}
BENCHMARK(BM_MollifierEval);

static void BM_PvProfileBuild(benchmark::State& state) {
    Mollifier phi = build_mollifier(1.0, 0);
    for (auto _ : state) {
        ScaledFamily a = pv_complex_family(phi);
        benchmark::DoNotOptimize(a(0.25, Vec{0.3}));
    }
}
BENCHMARK(BM_PvProfileBuild)->Unit(benchmark::kMillisecond);

static void BM_PvEval(benchmark::State& state) {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily a = pv_complex_family(phi);
    double s = -2.0;
    for (auto _ : state) {
        s += 1e-5;
        if (s > 2.0) s = -2.0;
        benchmark::DoNotOptimize(a(1.0 / 256, Vec{s}));
    }
}
BENCHMARK(BM_PvEval);
