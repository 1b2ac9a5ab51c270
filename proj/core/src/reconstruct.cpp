#include "gbmc/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gbmc/error.hpp"

namespace gbmc {

FieldOnGrid histogram(const ParticleEnsemble& ens, const Grid& grid,
                      std::size_t* outside) {
  FieldOnGrid field(grid, 1);
  auto& u = field[0];
  std::size_t out = 0;
  const double scale = 1.0 / (ens.normalization * grid.dx());
  for (std::size_t k = 0; k < ens.size(); ++k) {
    const long j = grid.cell_of(ens.x[k]);
    if (j < 0) {
      ++out;
      continue;
    }
    u[static_cast<std::size_t>(j)] += ens.m[k];
  }
  for (double& uj : u) uj *= scale;
  if (outside) *outside = out;
  return field;
}

CellIndex index_cells(const ParticleEnsemble& ens, const Grid& grid) {
  CellIndex idx;
  idx.cell.resize(ens.size());
  idx.count.assign(grid.cells(), 0);
  for (std::size_t k = 0; k < ens.size(); ++k) {
    const long j = grid.cell_of(ens.x[k]);
    idx.cell[k] = j;
    if (j >= 0) ++idx.count[static_cast<std::size_t>(j)];
  }
  return idx;
}

CdfTable::CdfTable(const ParticleEnsemble& ens, double u_left, double u_right)
    : u_left_(u_left), u_right_(u_right), norm_(ens.normalization) {
  const std::size_t n = ens.size();
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    return ens.x[a] < ens.x[b];
  });
  const auto& order = order_;
  sorted_x_.resize(n);
  prefix_.assign(n + 1, 0.0);
  suffix_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sorted_x_[i] = ens.x[order[i]];
    prefix_[i + 1] = prefix_[i] + ens.m[order[i]];
  }
  for (std::size_t i = n; i-- > 0;) {
    suffix_[i] = suffix_[i + 1] + ens.m[order[i]];
  }
}

double CdfTable::x_min() const {
  return sorted_x_.empty() ? 0.0 : sorted_x_.front();
}

double CdfTable::x_max() const {
  return sorted_x_.empty() ? 0.0 : sorted_x_.back();
}

std::size_t CdfTable::rank(double x) const {
  return static_cast<std::size_t>(
      std::upper_bound(sorted_x_.begin(), sorted_x_.end(), x) - sorted_x_.begin());
}

double CdfTable::left_at(std::size_t k) const {
  return u_left_ + prefix_[k] / norm_;
}

double CdfTable::right_at(std::size_t k) const {
  return u_right_ - suffix_[k] / norm_;
}

double CdfTable::blend(double x, std::size_t k) const {
  const double lo = x_min();
  const double hi = x_max();
  // All particles coincide: each side is exact on its own half-line.
  if (sorted_x_.size() < 2 || !(hi > lo)) return x < lo ? left_at(k) : right_at(k);
  const double w = std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
  return (1.0 - w) * left_at(k) + w * right_at(k);
}

double CdfTable::value(double x, std::size_t k, CdfMode mode) const {
  switch (mode) {
    case CdfMode::left:
      return left_at(k);
    case CdfMode::right:
      return right_at(k);
    case CdfMode::blended:
      break;
  }
  return blend(x, k);
}

double CdfTable::operator()(double x, CdfMode mode) const {
  return value(x, rank(x), mode);
}

std::vector<double> CdfTable::evaluate(const std::vector<double>& queries,
                                       CdfMode mode) const {
  const std::size_t q = queries.size();
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return queries[a] < queries[b];
  });
  std::vector<double> out(q);
  std::size_t k = 0;
  const std::size_t n = sorted_x_.size();
  for (std::size_t i : order) {
    const double x = queries[i];
    while (k < n && sorted_x_[k] <= x) ++k;
    out[i] = value(x, k, mode);
  }
  return out;
}

std::vector<double> CdfTable::evaluate_midpoint(const std::vector<double>& queries,
                                                CdfMode mode) const {
  const std::size_t q = queries.size();
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return queries[a] < queries[b];
  });
  std::vector<double> out(q);
  std::size_t lo = 0, hi = 0;
  const std::size_t n = sorted_x_.size();
  for (std::size_t i : order) {
    const double x = queries[i];
    while (lo < n && sorted_x_[lo] < x) ++lo;
    if (hi < lo) hi = lo;
    while (hi < n && sorted_x_[hi] <= x) ++hi;
    out[i] = lo == hi ? value(x, hi, mode) : 0.5 * (value(x, lo, mode) + value(x, hi, mode));
  }
  return out;
}

std::vector<double> CdfTable::at_particles(CdfMode mode) const {
  std::vector<double> out(order_.size());
  for (std::size_t r = 0; r < order_.size(); ++r)
    out[order_[r]] = value(sorted_x_[r], r + 1, mode);
  return out;
}

double cdf_left(const ParticleEnsemble& ens, double x, double u_left) {
  return CdfTable(ens, u_left, 0.0).left(x);
}

double cdf_right(const ParticleEnsemble& ens, double x, double u_right) {
  return CdfTable(ens, 0.0, u_right).right(x);
}

double cdf_blended(const ParticleEnsemble& ens, double x, double u_left,
                   double u_right) {
  return CdfTable(ens, u_left, u_right).blended(x);
}

std::vector<double> batch_cdf_at_particles(const ParticleEnsemble& ens,
                                           const std::vector<double>& queries,
                                           double u_left, double u_right,
                                           CdfMode mode) {
  return CdfTable(ens, u_left, u_right).evaluate(queries, mode);
}

double kernel_density(const ParticleEnsemble& ens, Kernel kernel,
                      double bandwidth, double x) {
  if (!(bandwidth > 0.0)) throw InvalidArgument("kernel bandwidth must be positive");
  double s = 0.0;
  const double half = 0.5 * bandwidth;
  for (std::size_t k = 0; k < ens.size(); ++k) {
    const double d = x - ens.x[k];
    if (kernel == Kernel::rectangular) {
      if (d > -half && d <= half) s += ens.m[k];
    } else {
      const double r = 1.0 - std::abs(d) / bandwidth;
      if (r > 0.0) s += ens.m[k] * r;
    }
  }
  return s / (ens.normalization * bandwidth);
}

}  // namespace gbmc
