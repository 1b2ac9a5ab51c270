#pragma once

// Initial data: scalar profiles with a continuous part and finitely many
// jumps, vector profiles for systems, and signed measures that can be
// sampled by inverse-CDF lookup.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "gbmc/models.hpp"
#include "gbmc/rng.hpp"

namespace gbmc {

struct Jump {
  double x = 0.0;
  double height = 0.0;  ///< u(x+) - u(x-)
};

/// u(x) = base + s(clamp(x, support)) + sum_{x_j <= x} J_j.
///
/// `s` is continuous on `support`, so u is constant outside it. Values are
/// right-continuous at jumps.
class ScalarProfile {
 public:
  using Fn = std::function<double(double)>;

  ScalarProfile() = default;

  /// Continuous profile; `deriv` defaults to a central difference.
  static ScalarProfile smooth(Fn s, Interval support, Fn deriv = {});
  /// values[i] on [breaks[i-1], breaks[i]); values.size() == breaks.size() + 1.
  static ScalarProfile piecewise_constant(std::vector<double> breaks,
                                          std::vector<double> values);
  static ScalarProfile constant(double value);

  /// Standard-normal-shaped density amp * exp(-(x-mu)^2 / (2 sd^2)).
  static ScalarProfile gaussian(double mean = 0.0, double sd = 1.0,
                                double amplitude = 0.3989422804014327);
  static ScalarProfile gaussian_cdf(double mean = 0.0, double sd = 1.0);
  /// amp * sin(x - lo) on [lo, lo + 2 pi], zero elsewhere.
  static ScalarProfile sine_window(double lo = 0.0, double amplitude = 1.0);
  static ScalarProfile riemann(double x0, double left, double right);
  static ScalarProfile square_wave(double lo, double hi, double height);

  double operator()(double x) const;
  double left_limit(double x) const;
  /// Limits at -infinity and +infinity.
  double left_value() const;
  double right_value() const;
  Interval support() const;
  bool has_smooth_part() const { return static_cast<bool>(smooth_); }
  const std::vector<Jump>& jumps() const { return jumps_; }

  /// Continuous part of u'(x) (zero outside the support).
  double smooth_derivative(double x) const;
  /// Exact integral over [lo, hi] up to Gauss-Legendre quadrature error.
  double integral(double lo, double hi) const;
  /// Cell averages on a uniform partition of [lo, hi] into m cells.
  std::vector<double> cell_averages(double lo, double hi, std::size_t m) const;

  /// Applies `f` pointwise; only piecewise-constant profiles can be mapped.
  ScalarProfile map(const std::function<double(double)>& f) const;

 private:
  Fn smooth_;
  Fn deriv_;
  Interval support_{0.0, 0.0};
  double base_ = 0.0;
  std::vector<Jump> jumps_;
};

/// One ScalarProfile per component.
using VectorProfile = std::vector<ScalarProfile>;

/// Component-wise evaluation.
StateVector evaluate(const VectorProfile& profile, double x);

/// Piecewise-constant vector data: states[i] on [breaks[i-1], breaks[i]).
VectorProfile piecewise_constant_states(std::vector<double> breaks,
                                        const std::vector<StateVector>& states,
                                        std::size_t components);

/// Maps piecewise-constant vector data pointwise (e.g. to Riemann invariants).
VectorProfile map_states(const VectorProfile& profile, std::size_t out_components,
                         const std::function<StateVector(const StateVector&)>& f);

/// A signed measure g(x) dx + sum w_k delta(x - x_k) on an interval,
/// tabulated for inverse-CDF sampling of |g| dx + sum |w_k| delta.
class SignedMeasure {
 public:
  struct Atom {
    double x = 0.0;
    double weight = 0.0;
  };
  struct Sample {
    double x = 0.0;
    int sign = 1;
    long atom = -1;  ///< index into atoms(), or -1 for the continuous part
  };

  SignedMeasure(const std::function<double(double)>& density, Interval domain,
                std::vector<Atom> atoms = {}, std::size_t table_size = 100000);

  double positive_mass() const { return positive_; }
  double negative_mass() const { return negative_; }
  double total_variation() const { return positive_ + negative_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  Sample sample(RngStream& rng) const;

 private:
  Interval domain_;
  double width_ = 0.0;
  std::vector<double> cell_value_;  // signed density at table-cell midpoints
  std::vector<double> cumulative_;  // cumulative |.| over cells then atoms
  std::vector<Atom> atoms_;
  double positive_ = 0.0;
  double negative_ = 0.0;
};

/// Signed measure of u0' (continuous derivative plus jump atoms).
SignedMeasure derivative_measure(const ScalarProfile& u0,
                                 std::size_t table_size = 100000);

}  // namespace gbmc
