#pragma once

// Grid-free Gradient-based Monte Carlo for scalar laws: particles sample
// u_x, u is the empirical CDF of the signed masses.

#include <cstdint>
#include <vector>

#include "gbmc/grid.hpp"
#include "gbmc/models.hpp"
#include "gbmc/particles.hpp"
#include "gbmc/reconstruct.hpp"
#include "gbmc/rng.hpp"
#include "gbmc/run.hpp"

namespace gbmc {

struct GbmcState {
  ParticleEnsemble ensemble;
  RelaxationConfig config;
  FluxModel model;
  double u_left = 0.0;   ///< u(-inf)
  double u_right = 0.0;  ///< u(+inf)
  CdfMode mode = CdfMode::blended;
  double t = 0.0;
  RngStream rng;
  Diagnostics diag;
};

GbmcState make_gbmc_state(const FluxModel& model, const ScalarProfile& u0,
                          const RelaxationConfig& config, std::size_t n,
                          std::uint64_t seed);

/// Transport by dt, evaluate u at every particle, redraw velocities with
/// p+ = (a + F'(u)) / (2a). Masses never change.
void gbmc_step(GbmcState& s);

std::vector<double> reconstruct_solution(const GbmcState& s,
                                         const std::vector<double>& points);
/// Point values at the grid's cell centers.
FieldOnGrid reconstruct_solution(const GbmcState& s, const Grid& output);
/// Histogram of the derivative particles.
FieldOnGrid derivative_histogram(const GbmcState& s, const Grid& output);

RunResult run_gbmc(const FluxModel& model, const ScalarProfile& u0,
                   const RelaxationConfig& config, std::size_t n,
                   double final_time, std::uint64_t seed, const Grid& output,
                   const RunOptions& options = {},
                   CdfMode mode = CdfMode::blended);

}  // namespace gbmc
