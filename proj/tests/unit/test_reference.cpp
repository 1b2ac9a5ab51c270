#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gbmc/analysis.hpp"
#include "gbmc/error.hpp"
#include "gbmc/reference.hpp"

using namespace gbmc;

namespace {

// Burgers, square wave h on [-2, 2], t < 4 / h: fan from -2, shock from 2.
double square_wave_exact(double x, double t, double h) {
  const double shock = 2.0 + 0.5 * h * t;
  if (x < -2.0 || x >= shock) return 0.0;
  return std::min((x + 2.0) / t, h);
}

double crossing(const FvSolution& s, double level) {
  const auto& u = s.field[0];
  const Grid& g = s.field.grid;
  for (std::size_t j = 1; j < g.cells(); ++j) {
    if ((u[j - 1] - level) * (u[j] - level) <= 0.0 && u[j - 1] != u[j]) {
      return g.center(j - 1) + (u[j - 1] - level) / (u[j - 1] - u[j]) * g.dx();
    }
  }
  return std::nan("");
}

}  // namespace

TEST(GodunovFlux, Burgers) {
  EXPECT_DOUBLE_EQ(godunov_flux(burgers(), 1.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(godunov_flux(burgers(), 0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(godunov_flux(burgers(), -0.5, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(godunov_flux(burgers(), -1.0, -0.5), 0.125);
  EXPECT_DOUBLE_EQ(godunov_flux(burgers(), 0.4, 0.4), 0.08);
}

TEST(GodunovFlux, Traffic) {
  // Concave flux: max over [ur, ul] when ul > ur, min over [ul, ur] otherwise.
  EXPECT_DOUBLE_EQ(godunov_flux(lwr(), 0.8, 0.2), 0.25);
  EXPECT_DOUBLE_EQ(godunov_flux(lwr(), 0.4, 0.8), std::min(lwr().flux(0.4), lwr().flux(0.8)));
}

TEST(Godunov, BurgersShockSpeed) {
  const Grid g(-1.0, 3.0, 2000);
  const auto s = godunov_scalar(burgers(), ScalarProfile::riemann(0.0, 1.0, 0.0), g, 2.0);
  EXPECT_NEAR(crossing(s, 0.5), 1.0, 2.0 * g.dx());
  EXPECT_LE(s.max_cfl, 0.9 + 1e-12);
  EXPECT_DOUBLE_EQ(s.t, 2.0);
}

TEST(Godunov, TrafficBackwardShock) {
  const Grid g(-2.0, 2.0, 4000);
  const auto s = godunov_scalar(lwr(), ScalarProfile::riemann(0.0, 0.4, 0.8), g, 0.5);
  const double expected = (lwr().flux(0.8) - lwr().flux(0.4)) / (0.8 - 0.4);
  EXPECT_NEAR(expected, -0.2, 1e-14);
  EXPECT_NEAR(crossing(s, 0.6), expected * 0.5, 2.0 * g.dx());
}

TEST(Godunov, RejectsBadCfl) {
  const Grid g(0.0, 1.0, 10);
  EXPECT_THROW(godunov_scalar(burgers(), ScalarProfile::constant(0.1), g, 1.0, 1.5), CflViolation);
  EXPECT_THROW(godunov_scalar(burgers(), ScalarProfile::constant(0.1), g, 1.0, 0.0), CflViolation);
}

TEST(Godunov, SquareWaveSelfConvergence) {
  std::vector<double> dx, err;
  for (std::size_t m : {200u, 400u, 800u, 1600u}) {
    const Grid g(-4.0, 6.0, m);
    const auto s = godunov_scalar(burgers(), ScalarProfile::square_wave(-2.0, 2.0, 0.4), g, 5.0);
    std::vector<double> exact(m);
    for (std::size_t j = 0; j < m; ++j) exact[j] = square_wave_exact(g.center(j), 5.0, 0.4);
    dx.push_back(g.dx());
    err.push_back(lp_distance(s.field[0], exact, g.dx(), 1.0));
  }
  EXPECT_GE(fit_loglog(dx, err).slope, 0.8);
}

TEST(Godunov, NoNewExtrema) {
  const Grid g(-4.0, 6.0, 500);
  const auto s = godunov_scalar(burgers(), ScalarProfile::square_wave(-2.0, 2.0, 0.4), g, 5.0);
  for (double u : s.field[0]) {
    ASSERT_GE(u, -1e-15);
    ASSERT_LE(u, 0.4 + 1e-15);
  }
}

TEST(RelaxationScheme, AgreesWithGodunovOnSmoothData) {
  const Grid g(-5.0, 5.0, 800);
  const auto u0 = ScalarProfile::gaussian();
  const auto god = godunov_scalar(burgers(), u0, g, 1.0);
  const auto rel = relaxation_fv_scalar(burgers(), u0, g, 1.0, 0.5);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.cells(); ++j)
    worst = std::max(worst, std::abs(god.field[0][j] - rel.field[0][j]));
  EXPECT_LT(worst, 20.0 * g.dx());
}

TEST(RelaxationScheme, LaxFriedrichsAtUnitCfl) {
  // One step at cfl = 1 is u_j - (F_{j+1} - F_{j-1}) / (2a) + (u_{j+1} - 2u_j + u_{j-1}) / 2.
  const Grid g(0.0, 1.0, 5);
  const auto u0 = ScalarProfile::piecewise_constant({0.2, 0.4, 0.6, 0.8}, {0.1, 0.2, 0.5, 0.3, 0.1});
  const double a = 1.0;
  const auto s = relaxation_fv_scalar(burgers(), u0, g, g.dx() / a, a, 1.0);
  ASSERT_EQ(s.steps, 1u);
  const std::vector<double> u{0.1, 0.2, 0.5, 0.3, 0.1};
  auto f = [](double v) { return 0.5 * v * v; };
  for (std::size_t j = 1; j + 1 < 5; ++j) {
    const double lf = 0.5 * (u[j - 1] + u[j + 1]) - (f(u[j + 1]) - f(u[j - 1])) / (2.0 * a);
    EXPECT_NEAR(s.field[0][j], lf, 1e-14) << "cell " << j;
  }
}

TEST(Swe, DamBreakStarDepthAgreesWithRelaxationScheme) {
  const double g = 9.8;
  const double hs = swe_star_depth({1.0, 0.0}, {2.0, 0.0}, g);
  EXPECT_GT(hs, 1.0);
  EXPECT_LT(hs, 2.0);
  const Grid grid(-0.5, 0.5, 10000);
  const VectorProfile u0{ScalarProfile::riemann(0.0, 1.0, 2.0), ScalarProfile::constant(0.0)};
  const auto fv = relaxation_fv_system(shallow_water(g), u0, grid, 0.075, {4.45, 5.10}, 0.9);
  EXPECT_NEAR(fv.field[0][5000], hs, 0.01 * hs);
  const auto exact = swe_exact_riemann({1.0, 0.0}, {2.0, 0.0}, g, {0.0});
  EXPECT_NEAR(exact[0].h, hs, 1e-12);
  EXPECT_NEAR(fv.field[1][5000] / fv.field[0][5000], exact[0].u, 0.01 * std::abs(exact[0].u));
}

TEST(Swe, ExactSolutionLimits) {
  const auto s = swe_exact_riemann({1.0, 0.0}, {2.0, 0.0}, 9.8, {-100.0, 100.0});
  EXPECT_DOUBLE_EQ(s[0].h, 1.0);
  EXPECT_DOUBLE_EQ(s[1].h, 2.0);
}

TEST(Swe, NearDryBed) {
  const auto s = swe_exact_riemann({1.0, -5.0}, {1.0, 5.0}, 9.8, {-1.0, 0.0, 1.0});
  for (const auto& st : s) EXPECT_GE(st.h, 0.0);
  EXPECT_NEAR(s[1].u, 0.0, 1e-12);
  EXPECT_LT(s[1].h, 0.1);
}

TEST(FvSolution, SampleInterpolatesBetweenCenters) {
  FvSolution s{FieldOnGrid(Grid(0.0, 2.0, 2)), 0.0, 0, 0.0};
  s.field[0] = {1.0, 3.0};
  const auto v = s.sample({0.0, 0.5, 1.0, 1.5, 2.0});
  EXPECT_EQ(v, (std::vector<double>{1.0, 1.0, 2.0, 3.0, 3.0}));
}
