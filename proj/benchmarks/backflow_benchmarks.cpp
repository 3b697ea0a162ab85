#include <benchmark/benchmark.h>

#include "backflow/oracle.hpp"
#include "backflow/scenario.hpp"

using namespace backflow;

namespace {

const PreparedScenario& reference() {
  static const PreparedScenario p = prepare_scenario(preset("paper-0.75pi"));
  return p;
}

void BM_PrepareReference(benchmark::State& state) {
  const ScenarioConfig c = preset("paper-0.75pi");
  for (auto _ : state) benchmark::DoNotOptimize(prepare_scenario(c));
}
BENCHMARK(BM_PrepareReference)->Unit(benchmark::kMillisecond);

void BM_FullReport(benchmark::State& state) {
  const PreparedScenario& p = reference();
  for (auto _ : state) benchmark::DoNotOptimize(report(p.state, p.weights));
}
BENCHMARK(BM_FullReport)->Unit(benchmark::kMillisecond);

void BM_SweepSample(benchmark::State& state) {
  const PreparedScenario& p = reference();
  const ArmWeights w = real_weights(0.37);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_sample(p.state, w, 0.37));
}
BENCHMARK(BM_SweepSample)->Unit(benchmark::kMillisecond);

void BM_IntegrateBackflow(benchmark::State& state) {
  const PreparedScenario& p = reference();
  for (auto _ : state) benchmark::DoNotOptimize(integrate_backflow(p.state, p.weights));
}
BENCHMARK(BM_IntegrateBackflow)->Unit(benchmark::kMillisecond);

void BM_MomentumSpectrum(benchmark::State& state) {
  const PreparedScenario& p = reference();
  for (auto _ : state) benchmark::DoNotOptimize(momentum_spectrum(p.state, p.weights));
}
BENCHMARK(BM_MomentumSpectrum)->Unit(benchmark::kMillisecond);

// Cost per split-step on grids of the given size.
void BM_OracleSteps(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CondensateParams params(88.0 * constants::atomic_mass_unit, 2.0 * 3.141592653589793 * 1500.0, 0.02);
  const Grid grid(0.0, 40e-6, n);
  const WaveField start = released_condensate(grid, params);
  const PropagatorConfig cfg = arm_config(params, Environment(), strontium_intercombination_transition(), 1e-8);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(start, cfg, 1e-6));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_OracleSteps)->Arg(1025)->Arg(4097)->Arg(16385)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
