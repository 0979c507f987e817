#include <benchmark/benchmark.h>

#include "dimercorr/dynamics.hpp"
#include "dimercorr/ensemble.hpp"
#include "dimercorr/liouvillian.hpp"
#include "dimercorr/observables.hpp"
#include "dimercorr/presets.hpp"

using namespace dimercorr;

namespace {

const liouvillian::SystemConfig& h_dimer() { return presets::get("h-dimer").config; }

void BM_Assemble(benchmark::State& state) {
  const vibrational::PhononFunctions phonon(h_dimer().bath);
  for (auto _ : state) benchmark::DoNotOptimize(liouvillian::assemble(h_dimer(), phonon));
}
BENCHMARK(BM_Assemble)->Unit(benchmark::kMillisecond);

void BM_PhononFunctions(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vibrational::PhononFunctions(h_dimer().bath));
}
BENCHMARK(BM_PhononFunctions)->Unit(benchmark::kMicrosecond);

void BM_CouplingRate(benchmark::State& state) {
  const auto pair = vibrational::PhononFunctions(h_dimer().bath).pair();
  for (auto _ : state) benchmark::DoNotOptimize(vibrational::coupling_rate(7.5, pair, vibrational::Combo::kCrossOp));
}
BENCHMARK(BM_CouplingRate)->Unit(benchmark::kMicrosecond);

void BM_SteadyState(benchmark::State& state) {
  const auto liou = liouvillian::assemble(h_dimer());
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::steady_state(liou.matrix));
}
BENCHMARK(BM_SteadyState)->Unit(benchmark::kMicrosecond);

void BM_Propagator(benchmark::State& state) {
  const auto liou = liouvillian::assemble(h_dimer());
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::Propagator(liou.matrix));
}
BENCHMARK(BM_Propagator)->Unit(benchmark::kMicrosecond);

void BM_G2Curve(benchmark::State& state) {
  const auto& c = h_dimer();
  const auto liou = liouvillian::assemble(c);
  const auto ss = dynamics::steady_state(liou.matrix);
  const dynamics::Propagator prop(liou.matrix);
  const auto m = geometry::DetectionMode::from_direction(presets::perpendicular_detection(c));
  const auto tau = observables::default_tau_grid(liou.meta.coupling_prime_mev, liou.meta.local_decay_per_ps);
  for (auto _ : state) benchmark::DoNotOptimize(observables::g2_curve(prop, ss.rho, c.geometry, m, m, tau));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tau.size()));
}
BENCHMARK(BM_G2Curve)->Unit(benchmark::kMicrosecond);

void BM_Ensemble(benchmark::State& state) {
  ensemble::DisorderSpec spec;
  spec.n_samples = static_cast<int>(state.range(0));
  spec.q = spec.q_prime = presets::perpendicular_detection(h_dimer());
  for (auto _ : state) benchmark::DoNotOptimize(ensemble::ensemble_g2(h_dimer(), spec, {0.0, 100.0, 1e4}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ensemble)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
