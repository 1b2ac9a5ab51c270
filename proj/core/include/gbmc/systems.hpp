#pragma once

// Particle solvers for n-component relaxation systems. Family h carries the
// particles of component (or invariant) h, with velocities +-a_h.

#include <cstdint>
#include <vector>

#include "gbmc/grid.hpp"
#include "gbmc/mc_scalar.hpp"
#include "gbmc/models.hpp"
#include "gbmc/particles.hpp"
#include "gbmc/profile.hpp"
#include "gbmc/reconstruct.hpp"
#include "gbmc/rng.hpp"
#include "gbmc/run.hpp"

namespace gbmc {

/// Weighted MC on a shared grid; family h samples f+-_h of component h.
struct SystemMcState {
  std::vector<ParticleEnsemble> families;
  Grid grid;
  RelaxationConfig config;
  SystemModel model;
  double t = 0.0;
  std::vector<RngStream> rngs;  ///< stream h drives family h
  std::vector<std::vector<double>> cell_mass;
  WeightedStrategy strategy = WeightedStrategy::fixed_count;
  bool low_variance = false;
  Diagnostics diag;
};

/// `n` particles per family. Family h uses RngStream(seed, h).
SystemMcState make_system_mc_state(const SystemModel& model,
                                   const VectorProfile& u0,
                                   const RelaxationConfig& config,
                                   const Grid& grid, std::size_t n,
                                   std::uint64_t seed,
                                   std::optional<Interval> sampling_domain = std::nullopt);

void mc_systems_step(SystemMcState& s);
/// Cell averages of every component.
FieldOnGrid system_histograms(const SystemMcState& s);

/// Grid-free GBMC in Riemann invariants; family h samples dGamma_h/dx.
struct CharGbmcState {
  std::vector<ParticleEnsemble> families;
  CharacteristicModel model;
  RelaxationConfig config;
  std::vector<double> gamma_left;   ///< Gamma_h(-inf)
  std::vector<double> gamma_right;  ///< Gamma_h(+inf)
  CdfMode mode = CdfMode::blended;
  double t = 0.0;
  std::vector<RngStream> rngs;
  Diagnostics diag;
};

/// `u0` holds the physical (primitive) components and must be piecewise
/// constant unless the model is scalar.
CharGbmcState make_char_gbmc_state(const CharacteristicModel& model,
                                   const VectorProfile& u0,
                                   const RelaxationConfig& config,
                                   std::size_t n, std::uint64_t seed);

void gbmc_characteristic_step(CharGbmcState& s);

/// Invariants at the queries (blended CDF of each family).
std::vector<StateVector> invariant_fields(const CharGbmcState& s,
                                          const std::vector<double>& queries);
/// Physical states at the queries; states leaving the admissible set are
/// clamped and counted in `clamped`.
std::vector<StateVector> physical_fields(const CharGbmcState& s,
                                         const std::vector<double>& queries,
                                         std::size_t* clamped = nullptr);

/// Mesh-dependent GBMC for non-diagonal systems; family h samples du_h/dx.
struct MeshedGbmcState {
  std::vector<ParticleEnsemble> families;
  Grid grid;
  SystemModel model;
  RelaxationConfig config;
  std::vector<double> u_left;
  std::vector<double> u_right;
  CdfMode mode = CdfMode::blended;
  double t = 0.0;
  std::vector<RngStream> rngs;
  WeightedStrategy strategy = WeightedStrategy::fixed_count;
  Diagnostics diag;
};

MeshedGbmcState make_meshed_gbmc_state(const SystemModel& model,
                                       const VectorProfile& u0,
                                       const RelaxationConfig& config,
                                       const Grid& grid, std::size_t n,
                                       std::uint64_t seed);

/// Per particle i of family h in cell j:
///   D+-_h = (a_h w_h,j +- (J(u(X_i)) w_j)_h) / (2 a_h),
/// velocity from |D+-| / (|D+| + |D-|), mass sign(D) (|D+|+|D-|) N dx / N_j.
void gbmc_meshed_step(MeshedGbmcState& s);

/// Conserved components at the queries.
std::vector<StateVector> conserved_fields(const MeshedGbmcState& s,
                                          const std::vector<double>& queries);

/// Driver output: MC snapshots are cell averages of the conserved
/// components; GBMC snapshots are point values at the output grid centers
/// (physical variables for the characteristic form).
RunResult run_mc_systems(const SystemModel& model, const VectorProfile& u0,
                         const RelaxationConfig& config, const Grid& grid,
                         std::size_t n, double final_time, std::uint64_t seed,
                         bool low_variance = false,
                         const RunOptions& options = {},
                         std::optional<Interval> sampling_domain = std::nullopt,
                         WeightedStrategy strategy = WeightedStrategy::fixed_count);

RunResult run_gbmc_characteristic(const CharacteristicModel& model,
                                  const VectorProfile& u0,
                                  const RelaxationConfig& config, std::size_t n,
                                  double final_time, std::uint64_t seed,
                                  const Grid& output,
                                  const RunOptions& options = {});

RunResult run_gbmc_meshed(const SystemModel& model, const VectorProfile& u0,
                          const RelaxationConfig& config, const Grid& grid,
                          std::size_t n, double final_time, std::uint64_t seed,
                          const Grid& output, const RunOptions& options = {});

}  // namespace gbmc
