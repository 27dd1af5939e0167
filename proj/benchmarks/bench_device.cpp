#include <vector>

#include <benchmark/benchmark.h>

#include "qset/device_model.hpp"
#include "qset/units.hpp"

namespace {

using namespace qset;

void BM_OrthodoxSteadyState(benchmark::State& state) {
    const auto d = DeviceParams::reference();
    OrthodoxOptions o;
    o.charge_state_cutoff = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(orthodox_steady_state(d, 0.85e-3, 0.6, 0.1175 * constants::e, o).current);
    }
}
BENCHMARK(BM_OrthodoxSteadyState)->Arg(1)->Arg(5)->Arg(20);

void BM_TransferCurve(benchmark::State& state) {
    const auto d = DeviceParams::reference();
    std::vector<double> q(static_cast<std::size_t>(state.range(0)));
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = static_cast<double>(k) / q.size() * constants::e;
    for (auto _ : state) benchmark::DoNotOptimize(orthodox_transfer_curve(d, 0.85e-3, 0.6, q));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TransferCurve)->Arg(401);

}  // namespace
