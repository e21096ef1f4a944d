#include <numbers>

#include <benchmark/benchmark.h>

#include "qfluct/montecarlo.hpp"
#include "qfluct/scenario.hpp"

using namespace qfluct;

namespace {

ProtocolConfig phase_protocol(int pulses) {
  const DriveSpec d = DriveSpec::phase_rotating(2 * std::numbers::pi * 0.8e-3, 2 * std::numbers::pi / 616);
  return {d, {0.25, 0.45}, 616, pulses, pulses * 616.0, {beta_for_up_population(0.303, d), 0.0}};
}

void BM_Propagate(benchmark::State& state) {
  const ProtocolConfig c = phase_protocol(static_cast<int>(state.range(0)));
  const QubitState start(0.3, 0.0, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(c, start));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Propagate)->Arg(12)->Arg(50)->Arg(1000);

void BM_ConditionalSweep(benchmark::State& state) {
  const ResolvedScenario s = resolve(*find_preset("fig5c"));
  const std::vector<double> grid = s.config.grid.values();
  for (auto _ : state) {
    for (double tf : grid) benchmark::DoNotOptimize(conditional_matrix(s.protocol_at(tf)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_ConditionalSweep);

void BM_TrajectoryThroughput(benchmark::State& state) {
  const ProtocolConfig c = phase_protocol(20);
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(c, 20000, 1, {workers, false}).stats);
  state.SetItemsProcessed(state.iterations() * 2 * 20000);
}
BENCHMARK(BM_TrajectoryThroughput)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_PumpInversion(benchmark::State& state) {
  const DriveSpec d = DriveSpec::phase_rotating(2 * std::numbers::pi * 0.8e-3, 2 * std::numbers::pi / 308);
  for (auto _ : state) benchmark::DoNotOptimize(solve_pump_for_asymptote(d, 0.25, 0.05));
}
BENCHMARK(BM_PumpInversion);

}  // namespace

BENCHMARK_MAIN();
