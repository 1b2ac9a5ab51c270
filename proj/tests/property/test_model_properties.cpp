#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gbmc/models.hpp"
#include "gbmc/reconstruct.hpp"
#include "gbmc/rng.hpp"
#include "gen.hpp"

using namespace gbmc;
using prop::for_all;
using prop::Gen;

namespace {

struct ScalarPick {
  FluxModel model;
  double u;
};

ScalarPick scalar_pick(Gen& g) {
  switch (g.size(0, 2)) {
    case 0:
      return {burgers(), g.real(-2.0, 2.0)};
    case 1:
      return {lwr(), g.real(0.0, 1.0)};
    default:
      return {linear_flux(g.real(-1.0, 1.0)), g.real(-3.0, 3.0)};
  }
}

struct SystemPick {
  SystemModel model;
  StateVector u;
};

SystemPick system_pick(Gen& g) {
  switch (g.size(0, 2)) {
    case 0:
      return {shallow_water(9.8), swe_conserved(g.real(0.1, 3.0), g.real(-2.0, 2.0))};
    case 1: {
      const double cv = g.real(0.5, 2.0);
      return {aw_rascle(cv), awr_conserved(g.real(0.1, 1.0), g.real(0.0, 2.0), cv)};
    }
    default:
      // Hyperbolic only for |u| < sqrt(2).
      return {isentropic_euler(), euler_conserved(g.real(0.1, 3.0), g.real(-1.4, 1.4))};
  }
}

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

TEST(ModelProperties, EquilibriaSumToState) {
  for_all(200, 11, [](Gen& g) {
    const auto p = scalar_pick(g);
    const double a = g.real(0.1, 5.0);
    const auto e = equilibrium_split(p.model, p.u, a);
    EXPECT_NEAR(e.plus + e.minus, p.u, 1e-14 * std::max(1.0, std::abs(p.u)));
    EXPECT_NEAR(a * (e.plus - e.minus), p.model.flux(p.u), 1e-13);
  });
}

TEST(ModelProperties, GradientProbabilitiesSumToOne) {
  for_all(200, 12, [](Gen& g) {
    const auto p = scalar_pick(g);
    const double a = std::abs(p.model.flux_deriv(p.u)) * g.real(1.01, 3.0) + 1e-3;
    const auto q = gradient_probabilities(p.model, p.u, a);
    EXPECT_NEAR(q.plus + q.minus, 1.0, 1e-15);
    EXPECT_GT(q.plus, 0.0);
    EXPECT_GT(q.minus, 0.0);
  });
}

TEST(ModelProperties, ScalarFluxDerivativeMatchesDifferenceQuotient) {
  for_all(100, 13, [](Gen& g) {
    const auto p = scalar_pick(g);
    const double h = 1e-5;
    const double fd = (p.model.flux(p.u + h) - p.model.flux(p.u - h)) / (2.0 * h);
    EXPECT_LT(rel(p.model.flux_deriv(p.u), fd), 1e-6);
  });
}

TEST(ModelProperties, JacobianMatchesDifferenceQuotient) {
  for_all(100, 14, [](Gen& g) {
    const auto p = system_pick(g);
    const std::size_t n = p.model.components();
    const Jacobian j = p.model.jacobian(p.u);
    const double h = 1e-5;
    for (std::size_t c = 0; c < n; ++c) {
      StateVector up = p.u, um = p.u;
      const double step = h * std::max(1.0, std::abs(p.u[c]));
      up[c] += step;
      um[c] -= step;
      const StateVector fp = p.model.flux(up), fm = p.model.flux(um);
      for (std::size_t r = 0; r < n; ++r) {
        const double fd = (fp[r] - fm[r]) / (2.0 * step);
        EXPECT_LT(rel(j[r * kMaxComponents + c], fd), 1e-6)
            << p.model.name() << " dF" << r << "/du" << c;
      }
    }
  });
}

TEST(ModelProperties, EigenvaluesIncreaseAndMatchJacobian) {
  for_all(100, 15, [](Gen& g) {
    const auto p = system_pick(g);
    const StateVector ev = p.model.eigenvalues(p.u);
    EXPECT_LE(ev[0], ev[1]);
    const Jacobian j = p.model.jacobian(p.u);
    // 2x2: eigenvalues are the roots of l^2 - tr l + det.
    const double tr = j[0] + j[kMaxComponents + 1];
    const double det = j[0] * j[kMaxComponents + 1] - j[1] * j[kMaxComponents];
    EXPECT_LT(rel(ev[0] + ev[1], tr), 1e-10);
    EXPECT_LT(rel(ev[0] * ev[1], det), 1e-10) << p.model.name();
  });
}

TEST(ModelProperties, InvariantsRoundTrip) {
  for_all(200, 16, [](Gen& g) {
    if (g.coin()) {
      const double gr = g.real(1.0, 10.0), h = g.real(0.01, 3.0), u = g.real(-3.0, 3.0);
      const auto inv = swe_invariants(h, u, gr);
      const auto back = swe_from_invariants(inv[0], inv[1], gr);
      EXPECT_NEAR(back[0], h, 1e-12);
      EXPECT_NEAR(back[1], u, 1e-12);
      const auto cm = swe_characteristic(gr);
      const StateVector phys = cm.from_invariants(cm.to_invariants({h, u, 0.0, 0.0}));
      EXPECT_NEAR(phys[0], h, 1e-12);
      EXPECT_NEAR(phys[1], u, 1e-12);
    } else {
      const double cv = g.real(0.2, 3.0), rho = g.real(0.0, 1.0), u = g.real(-1.0, 2.0);
      const auto inv = awr_invariants(rho, u, cv);
      const auto back = awr_from_invariants(inv[0], inv[1], cv);
      EXPECT_NEAR(back[0], rho, 1e-12);
      EXPECT_NEAR(back[1], u, 1e-12);
    }
  });
}

TEST(ModelProperties, StochasticRoundVarianceIsBernoulli) {
  for_all(12, 17, [](Gen& g) {
    const double x = g.real(0.0, 10.0);
    const double frac = x - std::floor(x);
    RngStream rng(g.size(0, 1000));
    const int draws = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const auto k = static_cast<double>(stochastic_round(x, rng));
      ASSERT_TRUE(k == std::floor(x) || k == std::floor(x) + 1.0);
      sum += k;
      sq += k * k;
    }
    const double mean = sum / draws;
    const double var = sq / draws - mean * mean;
    const double expected = frac * (1.0 - frac);
    EXPECT_NEAR(mean, x, 5.0 * std::sqrt(expected / draws) + 1e-12);
    EXPECT_NEAR(var, expected, 0.01);
  });
}

TEST(CdfProperties, BatchEqualsBruteForceWithTies) {
  for_all(30, 18, [](Gen& g) {
    const ParticleEnsemble e = g.ensemble(g.size(1, 200), 1.0, true);
    const double ul = g.real(-1.0, 1.0);
    const double ur = ul + e.total_mass();
    std::vector<double> q;
    for (std::size_t i = 0; i < 40; ++i) q.push_back(g.coin() ? e.x[g.size(0, e.size() - 1)]
                                                              : g.real(-5.0, 5.0));
    const CdfTable t(e, ul, ur);
    const auto left = t.evaluate(q, CdfMode::left);
    const auto right = t.evaluate(q, CdfMode::right);
    for (std::size_t i = 0; i < q.size(); ++i) {
      double below = 0.0, above = 0.0;
      for (std::size_t k = 0; k < e.size(); ++k) (e.x[k] <= q[i] ? below : above) += e.m[k];
      EXPECT_NEAR(left[i], ul + below / e.normalization, 1e-12);
      EXPECT_NEAR(right[i], ur - above / e.normalization, 1e-12);
      // Both limits agree when the right end is the true total.
      EXPECT_NEAR(left[i], right[i], 1e-12);
    }
  });
}

TEST(CdfProperties, HistogramTotalEqualsMass) {
  for_all(30, 19, [](Gen& g) {
    const ParticleEnsemble e = g.ensemble(g.size(1, 500), 1.0, g.coin());
    const Grid grid(-4.5, 4.5, g.size(1, 90));
    std::size_t outside = 0;
    const FieldOnGrid f = histogram(e, grid, &outside);
    EXPECT_EQ(outside, 0u);
    EXPECT_NEAR(f.integral(), e.total_mass(), 1e-12);
  });
}
