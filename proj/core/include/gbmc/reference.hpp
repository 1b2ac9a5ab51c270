#pragma once

// Deterministic reference solvers: Godunov for scalar laws, the zero-limit
// relaxation (upwind kinetic) scheme for systems, and the exact
// shallow-water Riemann solver.

#include <array>
#include <cstddef>
#include <vector>

#include "gbmc/grid.hpp"
#include "gbmc/models.hpp"
#include "gbmc/profile.hpp"

namespace gbmc {

struct FvSolution {
  FieldOnGrid field;
  double t = 0.0;
  std::size_t steps = 0;
  double max_cfl = 0.0;  ///< largest CFL number used

  /// Linear interpolation between cell centers (constant beyond the end
  /// centers).
  std::vector<double> sample(const std::vector<double>& x,
                             std::size_t component = 0) const;
};

enum class Boundary {
  transmissive,  ///< zero-gradient ghost cells
  zero_inflow,   ///< nothing enters through the boundaries
};

/// Exact Godunov flux for a convex or concave F: min of F over [ul, ur]
/// when ul <= ur, max over [ur, ul] otherwise.
double godunov_flux(const FluxModel& model, double ul, double ur);

/// First-order Godunov with dt = cfl dx / max|F'(u_j)| per step, starting
/// from exact cell averages. Throws CflViolation for cfl outside (0, 1].
FvSolution godunov_scalar(const FluxModel& model, const ScalarProfile& u0,
                          const Grid& grid, double final_time, double cfl = 0.9,
                          Boundary boundary = Boundary::transmissive);

enum class KineticInit {
  equilibrium_of_average,  ///< f+- = E+-(cell average of u0)
  average_of_equilibrium,  ///< f+- = cell average of E+-(u0(x))
};

/// Zero-limit relaxation scheme: upwind transport of f+-_h at +-a_h, then
/// projection f+-_h = E+-_h(u). dt = cfl dx / max a_h; at cfl = 1 with a
/// single speed this is the Lax-Friedrichs scheme.
FvSolution relaxation_fv_system(const SystemModel& model,
                                const VectorProfile& u0, const Grid& grid,
                                double final_time,
                                const std::vector<double>& speeds,
                                double cfl = 0.9,
                                KineticInit init = KineticInit::equilibrium_of_average,
                                Boundary boundary = Boundary::transmissive);

/// Convenience for scalar laws (n = 1).
FvSolution relaxation_fv_scalar(const FluxModel& model, const ScalarProfile& u0,
                                const Grid& grid, double final_time, double a,
                                double cfl = 0.9,
                                KineticInit init = KineticInit::equilibrium_of_average,
                                Boundary boundary = Boundary::transmissive);

/// Exact self-similar solution of the shallow-water Riemann problem,
/// (h, u) sampled at xi = x / t. Dry-bed cases are handled. Throws
/// NonConvergence if the depth iteration fails (tol 1e-12, 100 iterations).
struct SweState {
  double h = 0.0;
  double u = 0.0;
};
double swe_star_depth(SweState left, SweState right, double g);
std::vector<SweState> swe_exact_riemann(SweState left, SweState right, double g,
                                        const std::vector<double>& xi);

}  // namespace gbmc
