#pragma once

#include <cstddef>
#include <vector>

namespace gbmc {

/// Uniform mesh; cell j covers [x_min + j dx, x_min + (j+1) dx).
class Grid {
 public:
  Grid(double x_min, double x_max, std::size_t cells);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t cells() const { return cells_; }
  double dx() const { return dx_; }
  double center(std::size_t j) const;
  double left_edge(std::size_t j) const;
  /// Cell containing x, or -1 outside [x_min, x_max).
  long cell_of(double x) const;
  std::vector<double> centers() const;

 private:
  double x_min_;
  double x_max_;
  std::size_t cells_;
  double dx_;
};

/// Cell values on a grid, one array per component.
struct FieldOnGrid {
  Grid grid;
  std::vector<std::vector<double>> values;

  explicit FieldOnGrid(Grid g, std::size_t components = 1);
  std::size_t components() const { return values.size(); }
  std::vector<double>& operator[](std::size_t k) { return values[k]; }
  const std::vector<double>& operator[](std::size_t k) const { return values[k]; }
  /// sum_j u_j dx for component k.
  double integral(std::size_t k = 0) const;
};

}  // namespace gbmc
