#include <vector>

#include <benchmark/benchmark.h>

#include "qset/substrate.hpp"
#include "qset/thermal.hpp"

namespace {

using namespace qset;

void BM_HeatBalanceCurve(benchmark::State& state) {
    const ThermalParams p;
    std::vector<double> grid(100);
    for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = 0.01 + 0.49 * k / 99.0;
    for (auto _ : state) benchmark::DoNotOptimize(te_vs_tph_curve(0.2e-12, grid, p));
}
BENCHMARK(BM_HeatBalanceCurve);

void BM_Substrate(benchmark::State& state) {
    SubstrateModel m;
    if (state.range(0)) m = m.refined();
    for (auto _ : state) benchmark::DoNotOptimize(substrate_temperature_field(0.5e-12, 0.01, m));
}
BENCHMARK(BM_Substrate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
