#include <benchmark/benchmark.h>

#include "qset/signal.hpp"
#include "qset/tlf.hpp"

namespace {

using namespace qset;

// Twelve hours at 10 Hz unless stated otherwise.
constexpr double kDuration = 12 * 3600.0;
constexpr double kDt = 0.1;

void BM_SimulateTelegraph(benchmark::State& state) {
    const auto p = TlfParams::from_observables(150.0, 2.1, 0.5, kDefaultAttemptRate, 0.06, 1e-12);
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_telegraph(p, 0.5, kDuration, 1.0 / kDt, seed++));
}
BENCHMARK(BM_SimulateTelegraph)->Unit(benchmark::kMillisecond);

void BM_GenPink(benchmark::State& state) {
    PinkOptions o;
    o.spectral_synthesis = state.range(0) != 0;
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(gen_pink(1e-26, 1.0, kDuration, kDt, seed++, o));
}
BENCHMARK(BM_GenPink)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ComposeTrace(benchmark::State& state) {
    NoiseRecipe r;
    r.tlf = TlfParams::from_observables(150.0, 2.1, 0.5, kDefaultAttemptRate, 0.06, 1e-12);
    r.t_tlf = 0.5;
    r.mean_current = 4e-10;
    r.drift_diffusivity = 1e-14;
    r.pink_amplitude = 1e-27;
    r.white_level = 1e-28;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        r.seed = seed++;
        benchmark::DoNotOptimize(compose_trace(r, kDuration, kDt));
    }
}
BENCHMARK(BM_ComposeTrace)->Unit(benchmark::kMillisecond);

}  // namespace
