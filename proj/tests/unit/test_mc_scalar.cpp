#include <gtest/gtest.h>

#include <cmath>

#include "gbmc/error.hpp"
#include "gbmc/mc_scalar.hpp"
#include "gbmc/reconstruct.hpp"

using namespace gbmc;

namespace {

RelaxationConfig relaxation(double a, double dt, std::optional<double> eps = std::nullopt) {
  RelaxationConfig c;
  c.speeds = {a};
  c.dt = dt;
  c.epsilon = eps;
  return c;
}

// n unit-mass particles spread inside one cell of width dx.
McState one_cell_state(const FluxModel& model, std::size_t n, double a, std::uint64_t seed) {
  const Grid g(0.0, 1.0, 1);
  ParticleEnsemble e;
  e.speed = a;
  e.normalization = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) e.push_back((k + 0.5) / n, -a, 1.0);
  return McState{e, g, relaxation(a, 0.1), model, 0.0, RngStream(seed), {}, false, {}};
}

}  // namespace

TEST(LowVariance, StratifiedCountIsExact) {
  // F = -0.4 u, a = 1: E+/u = 0.3.
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    McState s = one_cell_state(linear_flux(-0.4), 100, 1.0, seed);
    relax_low_variance(s);
    std::size_t plus = 0;
    for (double v : s.ensemble.v) plus += v > 0;
    ASSERT_EQ(plus, 30u) << "seed " << seed;
  }
}

TEST(Baseline, CountIsBinomial) {
  double sum = 0.0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    McState s = one_cell_state(linear_flux(-0.4), 100, 1.0, 1000 + r);
    relax_baseline(s);
    for (double v : s.ensemble.v) sum += v > 0;
  }
  EXPECT_NEAR(sum / reps, 30.0, 4.0 * std::sqrt(100 * 0.21 / reps));
}

TEST(Relaxation, NeverMovesParticles) {
  McState s = one_cell_state(burgers(), 50, 1.0, 3);
  const auto x = s.ensemble.x;
  relax_baseline(s);
  relax_low_variance(s);
  relax_weighted(s, WeightedStrategy::fixed_count);
  EXPECT_EQ(s.ensemble.x, x);
  EXPECT_EQ(s.t, 0.0);
}

TEST(Relaxation, PartialInteractionKeepsSomeVelocities) {
  McState s = one_cell_state(linear_flux(0.0), 2000, 1.0, 4);
  s.config = relaxation(1.0, 0.1, 0.1);  // q = 1 - 1/e
  relax_low_variance(s);
  std::size_t untouched_minus = 0;
  for (double v : s.ensemble.v) untouched_minus += v < 0;
  // Interacting particles split evenly; the others stay at -a.
  const double q = 1.0 - std::exp(-1.0);
  EXPECT_NEAR(static_cast<double>(untouched_minus), 2000 * (1 - q) + 1000 * q, 2.0);
}

TEST(Weighted, CellMassFromMassBalance) {
  const Grid g(0.0, 0.02, 1);
  ParticleEnsemble e;
  e.speed = 1.0;
  e.normalization = 1000.0;
  for (int k = 0; k < 10; ++k) e.push_back(0.001 + 0.0018 * k, 1.0, 1.0);
  const CellIndex cells = index_cells(e, g);
  Diagnostics diag;
  RngStream rng(1);
  std::vector<double> cell_mass;
  relax_family_weighted(e, g, cells, {0.6}, {-0.4}, WeightedRelaxation{}, rng, diag, &cell_mass);
  ASSERT_EQ(cell_mass.size(), 1u);
  EXPECT_NEAR(cell_mass[0], 2.0, 1e-12);
  for (std::size_t k = 0; k < e.size(); ++k) {
    EXPECT_NEAR(std::abs(e.m[k]), 2.0, 1e-12);
    EXPECT_EQ(e.m[k] > 0, e.v[k] > 0);
  }
}

TEST(Weighted, FixedMassMeetsTargetCounts) {
  const Grid g(0.0, 1.0, 1);
  ParticleEnsemble e;
  e.speed = 1.0;
  e.normalization = 100.0;
  e.mass_unit = 1.0;
  for (int k = 0; k < 100; ++k) e.push_back(0.005 + 0.01 * k, 1.0, 1.0);
  const CellIndex cells = index_cells(e, g);
  Diagnostics diag;
  RngStream rng(2);
  WeightedRelaxation how;
  how.strategy = WeightedStrategy::fixed_mass;
  // Targets 100 * 0.7 = 70 plus and 100 * 0.5 = 50 minus particles.
  relax_family_weighted(e, g, cells, {0.7}, {-0.5}, how, rng, diag, nullptr);
  std::size_t plus = 0, minus = 0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    ASSERT_EQ(std::abs(e.m[k]), 1.0);
    ASSERT_GE(e.x[k], 0.0);
    ASSERT_LT(e.x[k], 1.0);
    if (e.v[k] > 0) {
      ++plus;
      EXPECT_GT(e.m[k], 0.0);
    } else {
      ++minus;
      EXPECT_LT(e.m[k], 0.0);
    }
  }
  EXPECT_EQ(plus, 70u);
  EXPECT_EQ(minus, 50u);
  EXPECT_EQ(diag.replicated, 20u);
  EXPECT_EQ(diag.killed, 0u);
  EXPECT_NEAR(e.total_mass(), 0.2, 1e-12);
}

TEST(Weighted, DegenerateCellSkipped) {
  const Grid g(0.0, 1.0, 1);
  ParticleEnsemble e;
  e.speed = 1.0;
  e.normalization = 2.0;
  e.push_back(0.2, -1.0, 1.0);
  e.push_back(0.7, -1.0, -1.0);
  const CellIndex cells = index_cells(e, g);
  Diagnostics diag;
  RngStream rng(3);
  relax_family_weighted(e, g, cells, {0.0}, {0.0}, WeightedRelaxation{}, rng, diag, nullptr);
  EXPECT_EQ(diag.degenerate_cells, 1u);
  EXPECT_EQ(e.v, (std::vector<double>{-1.0, -1.0}));
}

TEST(Baseline, SignChangingDataNeedsWeightedVariant) {
  const Grid g(0.0, 2 * M_PI, 20);
  McState s = make_mc_state(burgers(), ScalarProfile::sine_window(0.0, 1.0),
                            relaxation(1.5, 0.01), g, 1000, 1);
  EXPECT_THROW(mc_step(s), NegativeEquilibrium);
  McState w = make_mc_state(burgers(), ScalarProfile::sine_window(0.0, 1.0),
                            relaxation(1.5, 0.01), g, 1000, 1);
  EXPECT_NO_THROW(mc_step_weighted(w, WeightedStrategy::fixed_count));
}

TEST(Baseline, PositiveDataKeepsPositiveMasses) {
  const Grid g(-5.0, 5.0, 50);
  McState s = make_mc_state(burgers(), ScalarProfile::gaussian(), relaxation(0.4, 0.05), g,
                            2000, 2);
  for (int i = 0; i < 40; ++i) mc_step(s);
  for (double m : s.ensemble.m) ASSERT_GT(m, 0.0);
  EXPECT_NEAR(s.t, 2.0, 1e-12);
  EXPECT_EQ(s.diag.steps, 40u);
}

TEST(Run, SnapshotsAndDeterminism) {
  const Grid g(-5.0, 5.0, 50);
  RunOptions o;
  o.snapshot_times = {0.5, 1.0};
  const auto r1 = run_mc(burgers(), ScalarProfile::gaussian(), relaxation(0.4, 0.05), g, 5000,
                         2.0, McVariant::low_variance, 7, o);
  const auto r2 = run_mc(burgers(), ScalarProfile::gaussian(), relaxation(0.4, 0.05), g, 5000,
                         2.0, McVariant::low_variance, 7, o);
  ASSERT_EQ(r1.snapshots.size(), 3u);
  EXPECT_DOUBLE_EQ(r1.snapshots[0].t, 0.5);
  EXPECT_DOUBLE_EQ(r1.final_snapshot().t, 2.0);
  EXPECT_EQ(r1.final_snapshot().field[0], r2.final_snapshot().field[0]);
  EXPECT_EQ(r1.ensembles[0].x, r2.ensembles[0].x);
  EXPECT_EQ(r1.method, "mc-lowvar");
}

TEST(Run, EpsilonUniformity) {
  const Grid g(-5.0, 5.0, 50);
  for (std::optional<double> eps : {std::optional<double>{}, std::optional<double>{10.0}}) {
    const auto r = run_mc(burgers(), ScalarProfile::gaussian(), relaxation(0.4, 0.05, eps), g,
                          5000, 2.0, McVariant::baseline, 3);
    for (double u : r.final_snapshot().field[0]) {
      ASSERT_TRUE(std::isfinite(u));
      ASSERT_GE(u, 0.0);
      ASSERT_LT(u, 1.0);
    }
  }
}

TEST(Run, RejectsMisalignedSnapshot) {
  const Grid g(-5.0, 5.0, 50);
  RunOptions o;
  o.snapshot_times = {0.123};
  EXPECT_THROW(run_mc(burgers(), ScalarProfile::gaussian(), relaxation(0.4, 0.05), g, 100, 1.0,
                      McVariant::baseline, 1, o),
               InvalidArgument);
}
