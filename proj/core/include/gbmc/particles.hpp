#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "gbmc/models.hpp"
#include "gbmc/profile.hpp"
#include "gbmc/rng.hpp"

namespace gbmc {

/// Positions, two-valued velocities and signed masses of one particle family.
///
/// Reconstructions divide by `normalization`, the particle count at sampling
/// time; it stays fixed when particles are later killed or replicated.
struct ParticleEnsemble {
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> m;
  double speed = 1.0;          ///< a (velocities are +-speed)
  double normalization = 1.0;  ///< N
  double mass_unit = 1.0;      ///< nominal |m|
  std::size_t family = 0;

  std::size_t size() const { return x.size(); }
  bool empty() const { return x.empty(); }
  void reserve(std::size_t n);
  void push_back(double position, double velocity, double mass);
  /// (1/N) sum m_k.
  double total_mass() const;
  /// Throws InvalidArgument if the arrays disagree in length or a velocity
  /// is not +-speed.
  void check() const;
};

/// Direct MC data. Positions are drawn from |f+| + |f-| with f+- = E+-(u0)
/// (well-prepared), the velocity branch with probability |f+-|/(|f+|+|f-|),
/// and the mass sign from the branch's equilibrium. Throws ZeroMass.
ParticleEnsemble sample_mc_initial(const ScalarProfile& u0, Interval domain,
                                   std::size_t n, const FluxModel& model,
                                   double a, RngStream& rng,
                                   std::size_t table_size = 100000);

/// Component h of a system, with f+- = (a u_h +- F_h(u)) / (2a).
ParticleEnsemble sample_mc_initial_component(const VectorProfile& u0,
                                             std::size_t h, Interval domain,
                                             std::size_t n,
                                             const SystemModel& model, double a,
                                             RngStream& rng,
                                             std::size_t table_size = 100000);

/// Velocity-branch probability used when sampling GBMC data at x.
using BranchProbability = std::function<double(double x, long atom)>;

/// GBMC data: positions from |u0'| (continuous part and jump atoms), signs
/// from u0', velocity +a with probability `p_plus(x, atom)`.
/// Masses are balanced per sign so (1/N) sum m = u0(+inf) - u0(-inf)
/// exactly. Throws ZeroVariation.
ParticleEnsemble sample_gbmc_initial(const ScalarProfile& u0, std::size_t n,
                                     double a, const BranchProbability& p_plus,
                                     RngStream& rng,
                                     std::size_t table_size = 100000);

/// Scalar GBMC sampling with p+ = (a + F'(u)) / (2a) at each sample; at a
/// jump u is the midpoint of the one-sided limits.
ParticleEnsemble sample_gbmc_initial(const ScalarProfile& u0, std::size_t n,
                                     const FluxModel& model, double a,
                                     RngStream& rng,
                                     SubcharacteristicGuard guard = SubcharacteristicGuard::clip,
                                     std::size_t table_size = 100000);

/// X += V dt.
void transport(ParticleEnsemble& ens, double dt);

/// CSV rows "family,position,velocity,mass" (no header).
void write_ensemble_rows(std::ostream& os, const ParticleEnsemble& ens);

}  // namespace gbmc
