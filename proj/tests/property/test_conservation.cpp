#include <gtest/gtest.h>

#include <cmath>

#include "gbmc/gbmc_scalar.hpp"
#include "gbmc/mc_scalar.hpp"
#include "gbmc/reference.hpp"
#include "gbmc/systems.hpp"
#include "gen.hpp"

using namespace gbmc;
using prop::for_all;
using prop::Gen;

namespace {

RelaxationConfig relaxation(double a, double dt, std::optional<double> eps = std::nullopt) {
  RelaxationConfig c;
  c.speeds = {a};
  c.dt = dt;
  c.epsilon = eps;
  return c;
}

struct ScalarCase {
  FluxModel model = burgers();
  ScalarProfile u0;
  double a = 1.0;
};

ScalarCase scalar_case(Gen& g) {
  ScalarCase c;
  if (g.coin()) {
    c.model = burgers();
    c.u0 = g.piecewise(-0.8, 0.8);
    c.a = g.real(0.85, 1.5);
  } else {
    c.model = lwr();
    c.u0 = g.piecewise(0.0, 1.0);
    c.a = g.real(1.05, 1.6);
  }
  return c;
}

}  // namespace

TEST(Conservation, GbmcSignedMassConstantEveryStep) {
  for_all(25, 1, [](Gen& g) {
    const ScalarCase c = scalar_case(g);
    const std::optional<double> eps = g.coin() ? std::nullopt : std::optional<double>(0.05);
    auto s = make_gbmc_state(c.model, c.u0, relaxation(c.a, g.real(0.005, 0.05), eps),
                             g.size(50, 800), g.size(0, 1 << 30));
    const double jump = c.u0.right_value() - c.u0.left_value();
    const double m0 = s.ensemble.total_mass();
    EXPECT_NEAR(m0, jump, 1e-12);
    for (int i = 0; i < 40; ++i) {
      gbmc_step(s);
      ASSERT_NEAR(s.ensemble.total_mass(), m0, 1e-12) << "step " << i;
    }
  });
}

TEST(Conservation, CharacteristicGbmcFamilyMassesConstant) {
  for_all(8, 2, [](Gen& g) {
    const double hl = g.real(0.5, 2.0), hr = g.real(0.5, 2.0);
    const double ul = g.real(-0.5, 0.5), ur = g.real(-0.5, 0.5);
    const double speed = 12.0;
    RelaxationConfig cfg;
    cfg.speeds = {speed, speed};
    cfg.dt = 1e-3;
    auto s = make_char_gbmc_state(
        swe_characteristic(9.8),
        {ScalarProfile::riemann(0.0, hl, hr), ScalarProfile::riemann(0.0, ul, ur)}, cfg,
        g.size(100, 600), g.size(0, 1000));
    const double m0 = s.families[0].total_mass(), m1 = s.families[1].total_mass();
    for (int i = 0; i < 30; ++i) {
      gbmc_characteristic_step(s);
      ASSERT_NEAR(s.families[0].total_mass(), m0, 1e-12);
      ASSERT_NEAR(s.families[1].total_mass(), m1, 1e-12);
    }
  });
}

TEST(Conservation, TransportAndRelaxationAreSeparated) {
  for_all(20, 3, [](Gen& g) {
    ParticleEnsemble e = g.ensemble(g.size(1, 300), 1.0);
    const auto v = e.v, m = e.m;
    const double before = e.total_mass();
    transport(e, g.real(0.0, 0.3));
    EXPECT_EQ(e.v, v);
    EXPECT_EQ(e.m, m);
    EXPECT_EQ(e.total_mass(), before);

    for (double& mk : e.m) mk = std::abs(mk);
    McState s{e, Grid(-5.0, 5.0, g.size(5, 60)), relaxation(1.0, 0.1), linear_flux(g.real(-0.9, 0.9)),
              0.0, RngStream(g.size(0, 99)), {}, false, {}};
    const auto x = s.ensemble.x;
    relax_baseline(s);
    relax_low_variance(s);
    EXPECT_EQ(s.ensemble.x, x);
  });
}

TEST(Conservation, GodunovMassConstant) {
  for_all(20, 4, [](Gen& g) {
    const ScalarCase c = scalar_case(g);
    // Zero far field so nothing crosses the boundaries.
    const auto u0 = ScalarProfile::piecewise_constant(
        {-2.0, 2.0}, {0.0, c.model.name() == "lwr" ? g.real(0.05, 0.95) : g.real(-0.9, 0.9), 0.0});
    const Grid grid(-6.0, 6.0, g.size(50, 400));
    const double t = g.real(0.5, 2.0);
    const auto s = godunov_scalar(c.model, u0, grid, t, g.real(0.3, 1.0));
    const double initial = u0.integral(-6.0, 6.0);
    EXPECT_NEAR(s.field.integral(), initial, 1e-12);
    EXPECT_LE(s.max_cfl, 1.0 + 1e-12);
  });
}

TEST(Conservation, RelaxationSchemeMassConstantPerComponent) {
  for_all(10, 5, [](Gen& g) {
    const double h = g.real(0.5, 2.0);
    const VectorProfile u0{ScalarProfile::piecewise_constant({-1.0, 1.0}, {0.5, h, 0.5}),
                           ScalarProfile::constant(0.0)};
    const Grid grid(-8.0, 8.0, g.size(100, 400));
    const auto s = relaxation_fv_system(shallow_water(9.8), u0, grid, 0.2, {6.0, 6.0},
                                        g.real(0.3, 1.0));
    EXPECT_NEAR(s.field.integral(0), 8.0 + 2.0 * (h - 0.5), 1e-12);
    EXPECT_NEAR(s.field.integral(1), 0.0, 1e-12);
  });
}

TEST(Consistency, SingleComponentSystemMcMatchesScalarBitForBit) {
  for_all(6, 6, [](Gen& g) {
    const Grid grid(-5.0, 5.0, g.size(20, 80));
    const double a = g.real(0.45, 1.0);
    const auto cfg = relaxation(a, 1.0 / static_cast<double>(g.size(10, 100)));
    const auto u0 = ScalarProfile::gaussian(g.real(-1, 1), g.real(0.5, 1.5), g.real(0.1, 0.4));
    const std::size_t n = g.size(100, 3000);
    const std::uint64_t seed = g.size(0, 1 << 20);
    const bool lowvar = g.coin();
    const auto strategy = g.coin() ? WeightedStrategy::fixed_count : WeightedStrategy::fixed_mass;
    const auto variant = strategy == WeightedStrategy::fixed_count
                             ? McVariant::weighted_fixed_count
                             : McVariant::weighted_fixed_mass;

    McState s = make_mc_state(burgers(), u0, cfg, grid, n, seed);
    s.low_variance = lowvar;
    RunResult sys = run_mc_systems(system_from_scalar(burgers()), {u0}, cfg, grid, n, 1.0, seed,
                                   lowvar, {}, std::nullopt, strategy);
    const auto steps = static_cast<std::size_t>(std::llround(1.0 / cfg.dt));
    for (std::size_t i = 0; i < steps; ++i) mc_step(s, variant);
    ASSERT_EQ(sys.ensembles.size(), 1u);
    EXPECT_EQ(sys.ensembles[0].x, s.ensemble.x);
    EXPECT_EQ(sys.ensembles[0].v, s.ensemble.v);
    EXPECT_EQ(sys.ensembles[0].m, s.ensemble.m);
    EXPECT_EQ(sys.final_snapshot().field[0], histogram(s.ensemble, grid)[0]);
  });
}

TEST(Consistency, SingleComponentCharacteristicGbmcMatchesScalarBitForBit) {
  for_all(6, 7, [](Gen& g) {
    const ScalarCase c = scalar_case(g);
    const Grid out(-4.0, 4.0, 200);
    const auto cfg = relaxation(c.a, 0.5 / static_cast<double>(g.size(10, 50)));
    const std::size_t n = g.size(100, 2000);
    const std::uint64_t seed = g.size(0, 1 << 20);
    const auto scalar = run_gbmc(c.model, c.u0, cfg, n, 0.5, seed, out);
    const auto system = run_gbmc_characteristic(characteristic_from_scalar(c.model), {c.u0}, cfg,
                                                n, 0.5, seed, out);
    EXPECT_EQ(system.ensembles[0].x, scalar.ensembles[0].x);
    EXPECT_EQ(system.ensembles[0].v, scalar.ensembles[0].v);
    EXPECT_EQ(system.ensembles[0].m, scalar.ensembles[0].m);
    EXPECT_EQ(system.final_snapshot().field[0], scalar.final_snapshot().field[0]);
  });
}

TEST(Determinism, SameSeedSameTrajectory) {
  for_all(5, 8, [](Gen& g) {
    const ScalarCase c = scalar_case(g);
    const Grid out(-4.0, 4.0, 100);
    const auto cfg = relaxation(c.a, 0.02);
    const std::uint64_t seed = g.size(0, 1 << 20);
    const auto a = run_gbmc(c.model, c.u0, cfg, 500, 0.4, seed, out);
    const auto b = run_gbmc(c.model, c.u0, cfg, 500, 0.4, seed, out);
    EXPECT_EQ(a.ensembles[0].x, b.ensembles[0].x);
    EXPECT_EQ(a.ensembles[0].v, b.ensembles[0].v);
    const auto m1 = run_mc(c.model, c.u0, cfg, Grid(-4, 4, 40), 500, 0.4,
                           McVariant::weighted_fixed_count, seed);
    const auto m2 = run_mc(c.model, c.u0, cfg, Grid(-4, 4, 40), 500, 0.4,
                           McVariant::weighted_fixed_count, seed);
    EXPECT_EQ(m1.final_snapshot().field[0], m2.final_snapshot().field[0]);
  });
}

TEST(Conservation, WeightedMcMassConservedInExpectation) {
  // Sine data: signed mass starts at 0 and only drifts statistically.
  const Grid grid(-2.0, 8.0, 50);
  const auto u0 = ScalarProfile::sine_window(0.0, 1.0);
  const int reps = 60;
  double sum = 0.0, sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto res = run_mc(burgers(), u0, relaxation(1.5, 0.02), grid, 2000, 1.0,
                            McVariant::weighted_fixed_count, 100 + r);
    const double d = res.final_mass[0] - res.initial_mass[0];
    sum += d;
    sq += d * d;
  }
  const double mean = sum / reps;
  const double sd = std::sqrt((sq - reps * mean * mean) / (reps - 1));
  EXPECT_LT(std::abs(mean), 3.0 * sd / std::sqrt(reps));
}
