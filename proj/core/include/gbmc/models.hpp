#pragma once

// Flux models for scalar laws and systems, their diagonal (kinetic) and
// characteristic forms, and the equilibrium / probability formulas used by
// every particle solver in the library.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gbmc {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Scalar conservation law u_t + F(u)_x = 0.
///
/// `stationary_point` is the unique zero of F' when F is strictly convex or
/// concave (Burgers: 0, LWR: 1/2); the exact Godunov flux relies on it.
class FluxModel {
 public:
  using Fn = std::function<double(double)>;

  FluxModel(std::string name, Fn flux, Fn flux_deriv, Interval admissible,
            std::optional<double> stationary_point = std::nullopt);

  const std::string& name() const { return name_; }
  double flux(double u) const { return flux_(u); }
  double flux_deriv(double u) const { return flux_deriv_(u); }
  Interval admissible_range() const { return admissible_; }
  std::optional<double> stationary_point() const { return stationary_; }

  /// max |F'(u)| over `range` sampled at `samples` equispaced points.
  double max_speed(Interval range, int samples = 1000) const;

 private:
  std::string name_;
  Fn flux_;
  Fn flux_deriv_;
  Interval admissible_;
  std::optional<double> stationary_;
};

FluxModel burgers();
/// Lighthill-Whitham-Richards traffic flux F(u) = u - u^2.
FluxModel lwr();
FluxModel linear_flux(double velocity);
/// Returns the built-in scalar model called `name` ("burgers", "lwr",
/// "linear:<c>", "zero"); throws InvalidArgument otherwise.
FluxModel scalar_model_by_name(const std::string& name);

/// What a solver does when a probability built from a noisy reconstruction
/// leaves [0, 1] (i.e. the subcharacteristic condition fails at a particle).
enum class SubcharacteristicGuard {
  strict,  ///< throw SubcharacteristicViolation
  clip,    ///< clamp the probability into [0, 1] and count the event
};

/// Relaxation parameters. `epsilon == std::nullopt` is the zero-relaxation
/// limit; finite values with dt/epsilon > 36 route to the same code path.
struct RelaxationConfig {
  std::optional<double> epsilon;
  std::vector<double> speeds;
  double dt = 0.0;
  SubcharacteristicGuard guard = SubcharacteristicGuard::clip;

  bool zero_limit() const;
  /// 1 - exp(-dt/epsilon), exactly 1 in the zero-relaxation limit.
  double interaction_probability() const;
  double speed(std::size_t family = 0) const;
  /// Throws InvalidArgument for non-positive dt, epsilon or speeds.
  void validate() const;
};

/// Checks a^2 > F'(u)^2 on `range` sampled at `samples` points.
void validate_subcharacteristic(const FluxModel& model, double a,
                                Interval range, int samples = 1000);

struct EquilibriumPair {
  double plus = 0.0;
  double minus = 0.0;
};

struct ProbabilityPair {
  double plus = 0.5;
  double minus = 0.5;
};

/// E+-(u) = (a u +- F(u)) / (2a).
EquilibriumPair equilibrium_split(const FluxModel& model, double u, double a);

/// Velocity-switch probabilities of the derivative system,
/// (a +- F'(u)) / (2a). Independent of the derivative itself.
ProbabilityPair gradient_probabilities(const FluxModel& model, double u,
                                       double a);

/// p+- = |E+-| / (|E+| + |E-|); throws DegenerateCell when both vanish.
ProbabilityPair abs_equilibrium_probabilities(double e_plus, double e_minus);

/// (a + lambda) / (2a) under `guard`; `clipped` is incremented when a
/// clip-mode evaluation had to clamp.
double plus_probability(double lambda, double a, SubcharacteristicGuard guard,
                        std::size_t& clipped);

// ---------------------------------------------------------------------------
// Systems

inline constexpr std::size_t kMaxComponents = 4;
/// Depth / density below which a state is treated as dry.
inline constexpr double kVacuum = 1e-12;
using StateVector = std::array<double, kMaxComponents>;
using Jacobian = std::array<double, kMaxComponents * kMaxComponents>;

/// u_t + F(u)_x = 0 with u in R^n. Eigenvalues are returned in increasing
/// order. n == 1 is accepted so scalar laws can run through system solvers.
class SystemModel {
 public:
  using VectorFn = std::function<StateVector(const StateVector&)>;
  using JacobianFn = std::function<Jacobian(const StateVector&)>;

  SystemModel(std::string name, std::size_t n, VectorFn flux,
              VectorFn eigenvalues, JacobianFn jacobian,
              std::vector<std::string> component_names);

  const std::string& name() const { return name_; }
  std::size_t components() const { return n_; }
  StateVector flux(const StateVector& u) const { return flux_(u); }
  StateVector eigenvalues(const StateVector& u) const { return eigen_(u); }
  Jacobian jacobian(const StateVector& u) const { return jacobian_(u); }
  const std::vector<std::string>& component_names() const { return names_; }

 private:
  std::string name_;
  std::size_t n_;
  VectorFn flux_;
  VectorFn eigen_;
  JacobianFn jacobian_;
  std::vector<std::string> names_;
};

/// Conserved variables (h, hu).
SystemModel shallow_water(double g = 9.8);
/// Conserved variables (rho, rho (u + p(rho))) with p(rho) = cv rho.
SystemModel aw_rascle(double cv);
/// Conserved variables (rho, m) with F = (m, (rho + m^2/rho) / 2).
SystemModel isentropic_euler();
SystemModel system_from_scalar(const FluxModel& model);

/// A system written in Riemann invariants Gamma_h, each transported with its
/// own characteristic speed lambda_h(Gamma). "Physical" states are the
/// primitive pairs (h, u) for shallow water and (rho, u) for Aw-Rascle.
class CharacteristicModel {
 public:
  using VectorFn = std::function<StateVector(const StateVector&)>;
  /// Maps invariants to a physical state; returns true when the state had to
  /// be clamped into the admissible set (dry bed / vacuum).
  using InverseFn = std::function<bool(const StateVector&, StateVector&)>;

  CharacteristicModel(std::string name, std::size_t n, VectorFn to_invariants,
                      InverseFn from_invariants, VectorFn char_speeds,
                      std::vector<std::string> physical_names);

  const std::string& name() const { return name_; }
  std::size_t components() const { return n_; }
  StateVector to_invariants(const StateVector& physical) const {
    return to_inv_(physical);
  }
  StateVector from_invariants(const StateVector& gamma) const;
  bool from_invariants(const StateVector& gamma, StateVector& physical) const {
    return from_inv_(gamma, physical);
  }
  StateVector char_speeds(const StateVector& gamma) const {
    return speeds_(gamma);
  }
  const std::vector<std::string>& physical_names() const { return names_; }

 private:
  std::string name_;
  std::size_t n_;
  VectorFn to_inv_;
  InverseFn from_inv_;
  VectorFn speeds_;
  std::vector<std::string> names_;
};

CharacteristicModel swe_characteristic(double g = 9.8);
CharacteristicModel awr_characteristic(double cv);
/// Gamma = u, lambda = F'(u).
CharacteristicModel characteristic_from_scalar(const FluxModel& model);

/// Gamma_{1,2} = u +- 2 sqrt(g h). Throws NegativeDepth for h < 0.
std::array<double, 2> swe_invariants(double h, double u, double g);
/// (h, u) = ((G1 - G2)^2 / (16 g), (G1 + G2) / 2).
std::array<double, 2> swe_from_invariants(double g1, double g2, double g);

/// Gamma_1 = u + cv rho, Gamma_2 = u. Throws NegativeDensity for rho < 0.
std::array<double, 2> awr_invariants(double rho, double u, double cv);
/// (rho, u) = ((G1 - G2) / cv, G2).
std::array<double, 2> awr_from_invariants(double g1, double g2, double cv);

/// Conserved <-> primitive helpers for the built-in systems.
StateVector swe_conserved(double h, double u);
StateVector awr_conserved(double rho, double u, double cv);
StateVector euler_conserved(double rho, double u);

}  // namespace gbmc
