#pragma once

// Hand-rolled generators for property tests. Every case is driven by a
// seed, and failures report it so a case can be replayed in isolation.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gbmc/particles.hpp"
#include "gbmc/profile.hpp"
#include "gbmc/rng.hpp"

namespace gbmc::prop {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed, 0x9e3779b9u) {}

  double real(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  std::size_t size(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng_.below(hi - lo + 1));
  }
  bool coin() { return rng_.uniform() < 0.5; }
  int sign() { return coin() ? 1 : -1; }

  /// Sorted distinct breakpoints in [lo, hi].
  std::vector<double> breaks(std::size_t count, double lo, double hi) {
    std::vector<double> b;
    const double step = (hi - lo) / static_cast<double>(count + 1);
    for (std::size_t i = 0; i < count; ++i) {
      b.push_back(lo + step * (static_cast<double>(i) + real(0.6, 1.4)));
    }
    return b;
  }

  /// Piecewise-constant data with values in [lo, hi]; some values repeat
  /// and some jumps are large so both fan and shock patterns appear.
  ScalarProfile piecewise(double lo, double hi, double x_lo = -3.0, double x_hi = 3.0) {
    const std::size_t jumps = size(1, 4);
    std::vector<double> values;
    for (std::size_t i = 0; i <= jumps; ++i) {
      values.push_back(i > 0 && size(0, 4) == 0 ? values.back() + real(0.1, 0.3) * (hi - lo)
                                                : real(lo, hi));
      values.back() = std::clamp(values.back(), lo, hi);
    }
    values.back() = values.front() == values.back() ? values.back() * 0.5 + hi * 0.5
                                                    : values.back();
    return ScalarProfile::piecewise_constant(breaks(jumps, x_lo, x_hi), values);
  }

  /// Ensemble with arbitrary positions, +-a velocities and signed masses.
  ParticleEnsemble ensemble(std::size_t n, double a, bool ties = false) {
    ParticleEnsemble e;
    e.speed = a;
    e.normalization = static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      double x = real(-4.0, 4.0);
      if (ties) x = std::round(x * 4.0) / 4.0;
      e.push_back(x, coin() ? a : -a, sign() * real(0.2, 2.0));
    }
    return e;
  }

  RngStream& rng() { return rng_; }

 private:
  RngStream rng_;
};

/// Runs `property` on `cases` generated inputs; stops at the first failure.
inline void for_all(std::size_t cases, std::uint64_t seed,
                    const std::function<void(Gen&)>& property) {
  for (std::size_t c = 0; c < cases; ++c) {
    const std::uint64_t case_seed = seed * 1000003u + c;
    Gen g(case_seed);
    SCOPED_TRACE("generator seed " + std::to_string(case_seed));
    property(g);
    if (::testing::Test::HasFatalFailure() || ::testing::Test::HasNonfatalFailure()) return;
  }
}

}  // namespace gbmc::prop
