#include <benchmark/benchmark.h>

#include "zed/energy.hpp"
#include "zed/forecast.hpp"
#include "zed/rf.hpp"
#include "zed/rng.hpp"
#include "zed/sim.hpp"

namespace {

using namespace zed;

void BM_StepEnergy(benchmark::State& state) {
  const auto spec = energy::StorageSpec::ideal(10.0);
  auto st = energy::EnergyState::with_energy(5.0);
  for (auto _ : state) {
    st = energy::step_energy(st, spec, 0.5, 0.5, 1.0).state;
    benchmark::DoNotOptimize(st.stored);
  }
}
BENCHMARK(BM_StepEnergy);

void BM_TasksEngine(benchmark::State& state) {
  sim::ScenarioConfig c;
  c.engine = sim::Engine::tasks;
  c.slots = static_cast<std::size_t>(state.range(0));
  c.abstract.policy.interval = 4;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run(c).task_completion_rate);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TasksEngine)->Arg(100000);

void BM_PacketsEngine(benchmark::State& state) {
  sim::ScenarioConfig c;
  c.engine = sim::Engine::packets;
  c.n_devices = 64;
  c.slots = static_cast<std::size_t>(state.range(0));
  c.abstract.energy = {sim::ArrivalProcess::Kind::bernoulli, 0.1, 1.0, {}};
  c.abstract.events = {sim::ArrivalProcess::Kind::bernoulli, 1.0 / 64.0, 1.0, {}};
  c.abstract.policy.kind = sim::AbstractPolicy::Kind::aoi_threshold;
  c.abstract.policy.threshold = 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run(c).avg_aoi);
  state.SetItemsProcessed(state.iterations() * state.range(0) * 64);
}
BENCHMARK(BM_PacketsEngine)->Arg(10000);

void BM_RfExploreExploit(benchmark::State& state) {
  rf::RfScene scene;
  scene.antennas = static_cast<std::size_t>(state.range(0));
  scene.angle = 0.7;
  const rf::RfSchedule schedule;
  for (auto _ : state) benchmark::DoNotOptimize(rf::rf_explore_exploit(scene, schedule).dynamic_net);
}
BENCHMARK(BM_RfExploreExploit)->Arg(4)->Arg(16);

void BM_ArimaFitForecast(benchmark::State& state) {
  const auto sky = forecast::synthetic_irradiance(5760, 30.0, 1);
  for (auto _ : state) {
    const auto m = forecast::arima_fit(sky, 5, 1);
    benchmark::DoNotOptimize(forecast::arima_forecast(m, 120));
  }
}
BENCHMARK(BM_ArimaFitForecast);

}  // namespace

BENCHMARK_MAIN();
