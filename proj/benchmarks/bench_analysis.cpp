#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "qset/analysis/baseline.hpp"
#include "qset/analysis/pipeline.hpp"
#include "qset/analysis/spectrum.hpp"
#include "qset/signal.hpp"
#include "qset/tlf.hpp"

namespace {

using namespace qset;

std::vector<double> noise(std::size_t n) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::vector<double> y(n);
    for (double& v : y) v = g(rng);
    return y;
}

const CurrentTrace& paper_trace() {
    static const CurrentTrace t = [] {
        NoiseRecipe r;
        r.tlf = TlfParams::from_observables(150.0, 2.1, 0.5, kDefaultAttemptRate, 0.06, 1.16e-12);
        r.t_tlf = 0.5;
        r.mean_current = 4.26e-10;
        r.drift_diffusivity = 1.17e-14;
        r.pink_amplitude = 1.08e-27;
        r.white_level = 2.4e-28;
        return compose_trace(r, 12 * 3600.0, 0.1);
    }();
    return t;
}

void BM_Welch(benchmark::State& state) {
    const auto y = noise(432001);
    WelchOptions o;
    o.segment_length = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(psd_welch(y, 0.1, o));
}
BENCHMARK(BM_Welch)->Arg(4096)->Arg(65536)->Unit(benchmark::kMillisecond);

void BM_AlsBaseline(benchmark::State& state) {
    const auto y = noise(static_cast<std::size_t>(state.range(0)));
    AlsOptions o;
    o.lambda = 1e9;
    for (auto _ : state) benchmark::DoNotOptimize(als_baseline(y, 0.1, o));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AlsBaseline)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Complexity()->Unit(benchmark::kMillisecond);

void BM_AnalyzeTwelveHours(benchmark::State& state) {
    const CurrentTrace& t = paper_trace();
    for (auto _ : state) benchmark::DoNotOptimize(analyze_trace(t));
}
BENCHMARK(BM_AnalyzeTwelveHours)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
