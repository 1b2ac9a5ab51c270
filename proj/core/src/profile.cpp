#include "gbmc/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "gbmc/error.hpp"

namespace gbmc {

namespace {

constexpr std::array<double, 5> kGaussNodes = {
    0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
    0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {
    0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
    0.2369268850561891, 0.2369268850561891};

constexpr double kPanelWidth = 0.01;

template <class F>
double gauss_legendre(const F& f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  const auto panels = static_cast<std::size_t>(
      std::max(1.0, std::ceil((hi - lo) / kPanelWidth)));
  const double h = (hi - lo) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * h;
    double panel = 0.0;
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
      panel += kGaussWeights[k] * f(mid + 0.5 * h * kGaussNodes[k]);
    }
    sum += 0.5 * h * panel;
  }
  return sum;
}

}  // namespace

ScalarProfile ScalarProfile::smooth(Fn s, Interval support, Fn deriv) {
  if (!s) throw InvalidArgument("smooth profile needs a function");
  if (!(support.hi > support.lo)) {
    throw InvalidArgument("smooth profile needs a non-empty support");
  }
  ScalarProfile p;
  p.smooth_ = std::move(s);
  p.deriv_ = std::move(deriv);
  p.support_ = support;
  return p;
}

ScalarProfile ScalarProfile::piecewise_constant(std::vector<double> breaks,
                                                std::vector<double> values) {
  if (values.size() != breaks.size() + 1) {
    throw InvalidArgument("piecewise-constant profile needs one more value than breaks");
  }
  if (!std::is_sorted(breaks.begin(), breaks.end())) {
    throw InvalidArgument("piecewise-constant breaks must be sorted");
  }
  ScalarProfile p;
  p.base_ = values.front();
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    p.jumps_.push_back({breaks[i], values[i + 1] - values[i]});
  }
  if (!breaks.empty()) p.support_ = {breaks.front(), breaks.back()};
  return p;
}

ScalarProfile ScalarProfile::constant(double value) {
  return piecewise_constant({}, {value});
}

ScalarProfile ScalarProfile::gaussian(double mean, double sd, double amplitude) {
  if (!(sd > 0.0)) throw InvalidArgument("gaussian needs sd > 0");
  const double inv = 1.0 / (2.0 * sd * sd);
  return smooth(
      [=](double x) { return amplitude * std::exp(-(x - mean) * (x - mean) * inv); },
      {mean - 12.0 * sd, mean + 12.0 * sd},
      [=](double x) {
        return -2.0 * (x - mean) * inv * amplitude *
               std::exp(-(x - mean) * (x - mean) * inv);
      });
}

ScalarProfile ScalarProfile::gaussian_cdf(double mean, double sd) {
  if (!(sd > 0.0)) throw InvalidArgument("gaussian_cdf needs sd > 0");
  const double norm = 1.0 / (sd * std::sqrt(2.0 * M_PI));
  return smooth(
      [=](double x) { return 0.5 * std::erfc(-(x - mean) / (sd * M_SQRT2)); },
      {mean - 12.0 * sd, mean + 12.0 * sd},
      [=](double x) {
        return norm * std::exp(-(x - mean) * (x - mean) / (2.0 * sd * sd));
      });
}

ScalarProfile ScalarProfile::sine_window(double lo, double amplitude) {
  return smooth([=](double x) { return amplitude * std::sin(x - lo); },
                {lo, lo + 2.0 * M_PI},
                [=](double x) { return amplitude * std::cos(x - lo); });
}

ScalarProfile ScalarProfile::riemann(double x0, double left, double right) {
  return piecewise_constant({x0}, {left, right});
}

ScalarProfile ScalarProfile::square_wave(double lo, double hi, double height) {
  if (!(hi > lo)) throw InvalidArgument("square wave needs lo < hi");
  return piecewise_constant({lo, hi}, {0.0, height, 0.0});
}

double ScalarProfile::operator()(double x) const {
  double u = base_;
  if (smooth_) u += smooth_(std::clamp(x, support_.lo, support_.hi));
  for (const auto& j : jumps_) {
    if (j.x <= x) u += j.height;
  }
  return u;
}

double ScalarProfile::left_limit(double x) const {
  double u = base_;
  if (smooth_) u += smooth_(std::clamp(x, support_.lo, support_.hi));
  for (const auto& j : jumps_) {
    if (j.x < x) u += j.height;
  }
  return u;
}

double ScalarProfile::left_value() const {
  return base_ + (smooth_ ? smooth_(support_.lo) : 0.0);
}

double ScalarProfile::right_value() const {
  double u = base_ + (smooth_ ? smooth_(support_.hi) : 0.0);
  for (const auto& j : jumps_) u += j.height;
  return u;
}

Interval ScalarProfile::support() const {
  Interval s = support_;
  if (smooth_) {
    for (const auto& j : jumps_) {
      s.lo = std::min(s.lo, j.x);
      s.hi = std::max(s.hi, j.x);
    }
  }
  return s;
}

double ScalarProfile::smooth_derivative(double x) const {
  if (!smooth_ || x < support_.lo || x > support_.hi) return 0.0;
  if (deriv_) return deriv_(x);
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  const double lo = std::max(x - h, support_.lo);
  const double hi = std::min(x + h, support_.hi);
  return (smooth_(hi) - smooth_(lo)) / (hi - lo);
}

double ScalarProfile::integral(double lo, double hi) const {
  if (hi < lo) return -integral(hi, lo);
  if (hi == lo) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (const auto& j : jumps_) {
    if (j.x > lo && j.x < hi) cuts.push_back(j.x);
  }
  if (smooth_) {
    if (support_.lo > lo && support_.lo < hi) cuts.push_back(support_.lo);
    if (support_.hi > lo && support_.hi < hi) cuts.push_back(support_.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (b <= a) continue;
    const double mid = 0.5 * (a + b);
    double level = base_;
    for (const auto& j : jumps_) {
      if (j.x <= mid) level += j.height;
    }
    total += level * (b - a);
    if (smooth_) {
      if (a >= support_.lo && b <= support_.hi) {
        total += gauss_legendre(smooth_, a, b);
      } else {
        total += smooth_(std::clamp(mid, support_.lo, support_.hi)) * (b - a);
      }
    }
  }
  return total;
}

std::vector<double> ScalarProfile::cell_averages(double lo, double hi,
                                                 std::size_t m) const {
  if (m == 0 || !(hi > lo)) throw InvalidArgument("cell_averages needs m >= 1 and lo < hi");
  std::vector<double> out(m);
  const double dx = (hi - lo) / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double a = lo + static_cast<double>(j) * dx;
    out[j] = integral(a, a + dx) / dx;
  }
  return out;
}

ScalarProfile ScalarProfile::map(const std::function<double(double)>& f) const {
  if (smooth_) throw InvalidArgument("only piecewise-constant profiles can be mapped");
  std::vector<double> breaks;
  std::vector<double> values{f(base_)};
  double level = base_;
  for (const auto& j : jumps_) {
    level += j.height;
    breaks.push_back(j.x);
    values.push_back(f(level));
  }
  return piecewise_constant(std::move(breaks), std::move(values));
}

StateVector evaluate(const VectorProfile& profile, double x) {
  StateVector u{};
  for (std::size_t k = 0; k < profile.size() && k < kMaxComponents; ++k) {
    u[k] = profile[k](x);
  }
  return u;
}

VectorProfile piecewise_constant_states(std::vector<double> breaks,
                                        const std::vector<StateVector>& states,
                                        std::size_t components) {
  if (states.size() != breaks.size() + 1) {
    throw InvalidArgument("piecewise-constant states need one more state than breaks");
  }
  if (components == 0 || components > kMaxComponents) {
    throw InvalidArgument("component count out of range");
  }
  VectorProfile out;
  for (std::size_t k = 0; k < components; ++k) {
    std::vector<double> values;
    for (const auto& s : states) values.push_back(s[k]);
    out.push_back(ScalarProfile::piecewise_constant(breaks, std::move(values)));
  }
  return out;
}

VectorProfile map_states(const VectorProfile& profile, std::size_t out_components,
                         const std::function<StateVector(const StateVector&)>& f) {
  std::vector<double> breaks;
  for (const auto& c : profile) {
    if (c.has_smooth_part()) {
      throw InvalidArgument("only piecewise-constant vector data can be mapped");
    }
    for (const auto& j : c.jumps()) breaks.push_back(j.x);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<StateVector> states;
  for (std::size_t i = 0; i <= breaks.size(); ++i) {
    // Piecewise-constant values are right-continuous, so sampling exactly at
    // the break picks the state to its right.
    const double x = i == 0 ? (breaks.empty() ? 0.0 : breaks.front() - 1.0)
                            : breaks[i - 1];
    states.push_back(f(evaluate(profile, x)));
  }
  return piecewise_constant_states(std::move(breaks), states, out_components);
}

// ---------------------------------------------------------------------------

SignedMeasure::SignedMeasure(const std::function<double(double)>& density,
                             Interval domain, std::vector<Atom> atoms,
                             std::size_t table_size)
    : domain_(domain), atoms_(std::move(atoms)) {
  const bool continuous = density && domain.hi > domain.lo && table_size > 0;
  double cum = 0.0;
  if (continuous) {
    width_ = (domain.hi - domain.lo) / static_cast<double>(table_size);
    cell_value_.resize(table_size);
    cumulative_.resize(table_size);
    for (std::size_t i = 0; i < table_size; ++i) {
      const double v = density(domain.lo + (static_cast<double>(i) + 0.5) * width_);
      cell_value_[i] = v;
      const double w = std::abs(v) * width_;
      if (v > 0.0) positive_ += w;
      if (v < 0.0) negative_ += w;
      cum += w;
      cumulative_[i] = cum;
    }
  }
  for (const auto& a : atoms_) {
    if (a.weight > 0.0) positive_ += a.weight;
    if (a.weight < 0.0) negative_ -= a.weight;
    cum += std::abs(a.weight);
    cumulative_.push_back(cum);
  }
}

SignedMeasure::Sample SignedMeasure::sample(RngStream& rng) const {
  const double total = cumulative_.empty() ? 0.0 : cumulative_.back();
  if (!(total > 0.0)) throw ZeroMass("cannot sample a measure with zero total variation");
  const double r = rng.uniform() * total;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  if (it == cumulative_.end()) {
    // r rounded up to the total: take the last entry with positive weight.
    it = std::lower_bound(cumulative_.begin(), cumulative_.end(), total);
  }
  const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
  Sample s;
  if (idx < cell_value_.size()) {
    const double before = idx == 0 ? 0.0 : cumulative_[idx - 1];
    const double w = cumulative_[idx] - before;
    const double frac = w > 0.0 ? std::clamp((r - before) / w, 0.0, 1.0) : 0.5;
    s.x = domain_.lo + (static_cast<double>(idx) + frac) * width_;
    s.sign = cell_value_[idx] >= 0.0 ? 1 : -1;
  } else {
    const auto k = idx - cell_value_.size();
    s.x = atoms_[k].x;
    s.sign = atoms_[k].weight >= 0.0 ? 1 : -1;
    s.atom = static_cast<long>(k);
  }
  return s;
}

SignedMeasure derivative_measure(const ScalarProfile& u0, std::size_t table_size) {
  std::vector<SignedMeasure::Atom> atoms;
  for (const auto& j : u0.jumps()) {
    if (j.height != 0.0) atoms.push_back({j.x, j.height});
  }
  if (u0.has_smooth_part()) {
    const Interval s = u0.support();
    return SignedMeasure([&u0](double x) { return u0.smooth_derivative(x); }, s,
                         std::move(atoms), table_size);
  }
  return SignedMeasure({}, Interval{}, std::move(atoms), 0);
}

}  // namespace gbmc
