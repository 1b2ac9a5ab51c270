#pragma once

// Direct Monte Carlo for the 2x2 relaxation system of a scalar law:
// exact transport followed by stochastic relaxation on a grid.

#include <cstdint>
#include <vector>

#include "gbmc/grid.hpp"
#include "gbmc/models.hpp"
#include "gbmc/particles.hpp"
#include "gbmc/reconstruct.hpp"
#include "gbmc/rng.hpp"
#include "gbmc/run.hpp"

namespace gbmc {

enum class McVariant {
  baseline,               ///< independent velocity redraws, positive masses
  low_variance,           ///< stratified counts via stochastic rounding
  weighted_fixed_count,   ///< signed masses, per-cell mass rescaling
  weighted_fixed_mass,    ///< signed masses, kill / replicate
};

enum class WeightedStrategy { fixed_count, fixed_mass };

struct McState {
  ParticleEnsemble ensemble;
  Grid grid;
  RelaxationConfig config;
  FluxModel model;
  double t = 0.0;
  RngStream rng;
  /// Per-cell |mass| set by the last fixed-count weighted relaxation.
  std::vector<double> cell_mass;
  /// Stratified selection inside the weighted variants.
  bool low_variance = false;
  Diagnostics diag;
};

/// Samples the initial ensemble on `sampling_domain` (defaults to the grid).
McState make_mc_state(const FluxModel& model, const ScalarProfile& u0,
                      const RelaxationConfig& config, const Grid& grid,
                      std::size_t n, std::uint64_t seed,
                      std::optional<Interval> sampling_domain = std::nullopt);

/// Relaxation only (no transport, time unchanged).
void relax_baseline(McState& s);
void relax_low_variance(McState& s);
void relax_weighted(McState& s, WeightedStrategy strategy);

/// Transport by dt, relax, advance time.
void mc_step(McState& s);
void mc_step_lowvar(McState& s);
void mc_step_weighted(McState& s, WeightedStrategy strategy);
void mc_step(McState& s, McVariant variant);

/// Weighted relaxation of one family given per-cell equilibria E+-_j.
/// `q` is the interaction probability. Shared by the system solvers.
struct WeightedRelaxation {
  WeightedStrategy strategy = WeightedStrategy::fixed_count;
  bool low_variance = false;
  double interaction = 1.0;
};
void relax_family_weighted(ParticleEnsemble& ens, const Grid& grid,
                           const CellIndex& cells,
                           const std::vector<double>& e_plus,
                           const std::vector<double>& e_minus,
                           const WeightedRelaxation& how, RngStream& rng,
                           Diagnostics& diag, std::vector<double>* cell_mass);

RunResult run_mc(const FluxModel& model, const ScalarProfile& u0,
                 const RelaxationConfig& config, const Grid& grid,
                 std::size_t n, double final_time, McVariant variant,
                 std::uint64_t seed, const RunOptions& options = {},
                 std::optional<Interval> sampling_domain = std::nullopt);

const char* to_string(McVariant v);

}  // namespace gbmc
