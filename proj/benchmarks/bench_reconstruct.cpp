#include <benchmark/benchmark.h>

#include "gbmc/particles.hpp"
#include "gbmc/reconstruct.hpp"

using namespace gbmc;

namespace {

ParticleEnsemble ensemble(std::size_t n) {
  RngStream rng(1);
  return sample_gbmc_initial(ScalarProfile::gaussian_cdf(), n, burgers(), 1.5, rng);
}

void BM_CdfTableAtParticles(benchmark::State& state) {
  const auto e = ensemble(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const CdfTable t(e, 0.0, 1.0);
    benchmark::DoNotOptimize(t.at_particles());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CdfTableAtParticles)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity();

void BM_CdfEvaluateGrid(benchmark::State& state) {
  const auto e = ensemble(100000);
  const CdfTable t(e, 0.0, 1.0);
  const auto xs = Grid(-5.0, 5.0, static_cast<std::size_t>(state.range(0))).centers();
  for (auto _ : state) benchmark::DoNotOptimize(t.evaluate(xs));
}
BENCHMARK(BM_CdfEvaluateGrid)->Arg(1000)->Arg(100000);

void BM_Histogram(benchmark::State& state) {
  const auto e = ensemble(static_cast<std::size_t>(state.range(0)));
  const Grid g(-5.0, 5.0, 100);
  for (auto _ : state) benchmark::DoNotOptimize(histogram(e, g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Histogram)->Arg(10000)->Arg(1000000);

}  // namespace
