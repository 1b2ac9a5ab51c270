#include <benchmark/benchmark.h>

#include "gbmc/gbmc_scalar.hpp"
#include "gbmc/mc_scalar.hpp"
#include "gbmc/reference.hpp"

using namespace gbmc;

namespace {

RelaxationConfig relaxation(double a, double dt) {
  RelaxationConfig c;
  c.speeds = {a};
  c.dt = dt;
  return c;
}

void BM_GbmcStep(benchmark::State& state) {
  auto s = make_gbmc_state(burgers(), ScalarProfile::square_wave(-2.0, 2.0, 0.4),
                           relaxation(0.6, 0.01), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) gbmc_step(s);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GbmcStep)->Arg(1000)->Arg(100000);

void BM_McStep(benchmark::State& state) {
  const auto variant = static_cast<McVariant>(state.range(1));
  auto s = make_mc_state(burgers(), ScalarProfile::gaussian(), relaxation(0.4, 0.005),
                         Grid(-5.0, 5.0, 50), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) mc_step(s, variant);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McStep)
    ->Args({100000, static_cast<int>(McVariant::baseline)})
    ->Args({100000, static_cast<int>(McVariant::low_variance)})
    ->Args({100000, static_cast<int>(McVariant::weighted_fixed_count)})
    ->Args({100000, static_cast<int>(McVariant::weighted_fixed_mass)});

void BM_Godunov(benchmark::State& state) {
  const Grid g(-5.0, 5.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(godunov_scalar(burgers(), ScalarProfile::gaussian(), g, 2.5));
}
BENCHMARK(BM_Godunov)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
