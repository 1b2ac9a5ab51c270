#pragma once

// Types shared by every time-stepping solver: diagnostics, snapshots and
// the snapshot schedule.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gbmc/grid.hpp"
#include "gbmc/particles.hpp"

namespace gbmc {

struct Diagnostics {
  std::size_t steps = 0;
  std::size_t clipped = 0;           ///< probabilities clamped by the guard
  std::size_t empty_cells = 0;       ///< occupied cells with u_j == 0
  std::size_t degenerate_cells = 0;  ///< |E+| + |E-| == 0 (or |D+| + |D-|)
  std::size_t outside = 0;           ///< particles outside the grid, last step
  std::size_t killed = 0;
  std::size_t replicated = 0;
  std::size_t clamped = 0;           ///< states clamped to h >= 0 / rho >= 0

  Diagnostics& operator+=(const Diagnostics& o);
};

/// Solution at one time. MC snapshots hold cell averages, GBMC snapshots
/// hold point values at the output grid's cell centers.
struct Snapshot {
  double t = 0.0;
  FieldOnGrid field;
  /// Histogram of the derivative particles (GBMC only).
  std::optional<FieldOnGrid> derivative;
};

struct RunResult {
  std::string method;
  std::vector<std::string> component_names;
  std::vector<Snapshot> snapshots;
  std::vector<ParticleEnsemble> ensembles;  ///< final state, one per family
  std::vector<double> initial_mass;         ///< (1/N) sum m per family
  std::vector<double> final_mass;
  Diagnostics diagnostics;

  const Snapshot& final_snapshot() const { return snapshots.back(); }
};

/// Step count and the steps at which snapshots are taken. Every requested
/// time must be a multiple of dt within 1e-9 relative; the final time is
/// always included. Throws InvalidArgument.
struct Schedule {
  std::size_t steps = 0;
  std::vector<std::size_t> snapshot_steps;
};
Schedule make_schedule(double final_time, double dt,
                       const std::vector<double>& snapshot_times = {});

/// Options common to the run_* drivers.
struct RunOptions {
  std::vector<double> snapshot_times;
  /// Emit derivative histograms with GBMC snapshots.
  bool derivative_histogram = false;
  bool keep_ensembles = true;
};

}  // namespace gbmc
