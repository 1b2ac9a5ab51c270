#pragma once

// Estimators turning an ensemble into a function: histogram cell averages,
// left/right/blended empirical CDFs and kernel density estimates.

#include <cstddef>
#include <vector>

#include "gbmc/grid.hpp"
#include "gbmc/particles.hpp"

namespace gbmc {

/// u_j = (1/N) sum_{X_k in cell j} m_k / dx. Particles outside the grid are
/// ignored and counted in `outside` when it is non-null.
FieldOnGrid histogram(const ParticleEnsemble& ens, const Grid& grid,
                      std::size_t* outside = nullptr);

/// Cell index of every particle (-1 outside) and per-cell counts.
struct CellIndex {
  std::vector<long> cell;
  std::vector<std::size_t> count;
};
CellIndex index_cells(const ParticleEnsemble& ens, const Grid& grid);

enum class CdfMode { left, right, blended };

/// Sorted positions with prefix and suffix mass sums.
///
///   left(x)    = u_left  + (1/N) sum_{X_k <= x} m_k   (right-continuous)
///   right(x)   = u_right - (1/N) sum_{X_k >  x} m_k
///   blended(x) = (1 - w) left(x) + w right(x),
///                w = clamp((x - min X) / (max X - min X), 0, 1)
///
/// Sums are accumulated in sorted-position order.
class CdfTable {
 public:
  CdfTable(const ParticleEnsemble& ens, double u_left, double u_right);

  double left(double x) const { return left_at(rank(x)); }
  double right(double x) const { return right_at(rank(x)); }
  double blended(double x) const { return blend(x, rank(x)); }
  double operator()(double x, CdfMode mode) const;

  /// Values at arbitrary queries via one sort of the queries and a merge.
  std::vector<double> evaluate(const std::vector<double>& queries,
                               CdfMode mode = CdfMode::blended) const;
  /// Like evaluate(), but a query equal to one or more particle positions
  /// gets the mean of the one-sided limits there.
  std::vector<double> evaluate_midpoint(const std::vector<double>& queries,
                                        CdfMode mode = CdfMode::blended) const;
  /// Value at each particle of the ensemble the table was built from, in
  /// ensemble order. Particle i counts itself and every particle sorted
  /// before it, so coincident particles (which transport on a lattice
  /// produces) receive distinct values instead of the post-jump limit.
  std::vector<double> at_particles(CdfMode mode = CdfMode::blended) const;

  std::size_t size() const { return sorted_x_.size(); }
  double x_min() const;
  double x_max() const;

 private:
  std::size_t rank(double x) const;  // #{X_k <= x}
  double left_at(std::size_t k) const;
  double right_at(std::size_t k) const;
  double blend(double x, std::size_t k) const;
  double value(double x, std::size_t k, CdfMode mode) const;

  std::vector<std::size_t> order_;
  std::vector<double> sorted_x_;
  std::vector<double> prefix_;
  std::vector<double> suffix_;
  double u_left_;
  double u_right_;
  double norm_;
};

double cdf_left(const ParticleEnsemble& ens, double x, double u_left = 0.0);
double cdf_right(const ParticleEnsemble& ens, double x, double u_right);
double cdf_blended(const ParticleEnsemble& ens, double x, double u_left,
                   double u_right);

std::vector<double> batch_cdf_at_particles(const ParticleEnsemble& ens,
                                           const std::vector<double>& queries,
                                           double u_left, double u_right,
                                           CdfMode mode = CdfMode::blended);

enum class Kernel { rectangular, triangular };

/// (1/N) sum m_k S(x - X_k). The rectangular kernel is 1/dx on
/// (-dx/2, dx/2], so at cell centers it reproduces the histogram.
double kernel_density(const ParticleEnsemble& ens, Kernel kernel,
                      double bandwidth, double x);

}  // namespace gbmc
