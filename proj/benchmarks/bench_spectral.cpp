#include <benchmark/benchmark.h>

#include "colwave/mollify.hpp"
#include "colwave/spectral.hpp"

using namespace colwave;

namespace {

SampledField delta_field(int n, double eps) {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily f = scaled_tensor(phi, 2);
    std::array<int, 4> shape{n, n, 0, 0};
    return evaluate_on_grid(f, eps, Vec{-0.55, -0.55}, Vec{0.55, 0.55}, shape);
}

CutoffWindow origin_window() {
    CutoffWindow w;
    w.center = Vec{0.0, 0.0};
    w.support_radius = 0.5;
    w.plateau_radius = 0.25;
    return w;
}

}  // namespace

static void BM_EvaluateGrid2D(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(delta_field(n, 1.0 / 16).values.size());
}
BENCHMARK(BM_EvaluateGrid2D)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_WindowedFT2D(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    SampledField f = delta_field(n, 1.0 / 16);
    CutoffWindow w = origin_window();
    for (auto _ : state) benchmark::DoNotOptimize(windowed_ft(f, w).values.size());
}
BENCHMARK(BM_WindowedFT2D)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_ProjectionSamples(benchmark::State& state) {
    SampledField f = delta_field(512, 1.0 / 16);
    CutoffWindow w = origin_window();
    std::vector<double> ladder = lambda_ladder(2.0, 64.0, 1.4142135623730951);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            directional_samples_projection(f, w, Vec{0.6, 0.8}, ladder).magnitude.size());
}
BENCHMARK(BM_ProjectionSamples)->Unit(benchmark::kMillisecond);

static void BM_FitDecay(benchmark::State& state) {
    std::vector<EpsSamples> rows;
    for (int k = 4; k <= 12; ++k) {
        EpsSamples r;
        r.eps = std::ldexp(1.0, -k);
        for (double lam = 4.0; lam <= 256.0; lam *= 1.4142135623730951) {
            r.samples.lambda.push_back(lam);
            r.samples.magnitude.push_back(3.0 * std::pow(r.eps, -2.0) * std::pow(1 + lam, -7.0));
        }
        rows.push_back(r);
    }
    for (auto _ : state) benchmark::DoNotOptimize(fit_decay(rows, Vec{1.0, 0.0}).p_hat);
}
BENCHMARK(BM_FitDecay);
