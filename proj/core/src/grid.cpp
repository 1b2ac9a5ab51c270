#include "gbmc/grid.hpp"

#include <cmath>

#include "gbmc/error.hpp"

namespace gbmc {

Grid::Grid(double x_min, double x_max, std::size_t cells)
    : x_min_(x_min), x_max_(x_max), cells_(cells) {
  if (cells == 0) throw InvalidArgument("grid needs at least one cell");
  if (!(x_max > x_min)) throw InvalidArgument("grid needs x_min < x_max");
  dx_ = (x_max - x_min) / static_cast<double>(cells);
}

double Grid::center(std::size_t j) const {
  return x_min_ + (static_cast<double>(j) + 0.5) * dx_;
}

double Grid::left_edge(std::size_t j) const {
  return x_min_ + static_cast<double>(j) * dx_;
}

long Grid::cell_of(double x) const {
  if (!(x >= x_min_) || !(x < x_max_)) return -1;
  auto j = static_cast<long>(std::floor((x - x_min_) / dx_));
  // Round-off near the right edge.
  if (j >= static_cast<long>(cells_)) j = static_cast<long>(cells_) - 1;
  return j;
}

std::vector<double> Grid::centers() const {
  std::vector<double> c(cells_);
  for (std::size_t j = 0; j < cells_; ++j) c[j] = center(j);
  return c;
}

FieldOnGrid::FieldOnGrid(Grid g, std::size_t components)
    : grid(g), values(components, std::vector<double>(g.cells(), 0.0)) {}

double FieldOnGrid::integral(std::size_t k) const {
  double s = 0.0;
  for (double u : values.at(k)) s += u;
  return s * grid.dx();
}

}  // namespace gbmc
