#include "gbmc/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "gbmc/error.hpp"

namespace gbmc {

namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

FluxModel::FluxModel(std::string name, Fn flux, Fn flux_deriv,
                     Interval admissible, std::optional<double> stationary_point)
    : name_(std::move(name)),
      flux_(std::move(flux)),
      flux_deriv_(std::move(flux_deriv)),
      admissible_(admissible),
      stationary_(stationary_point) {
  if (!flux_ || !flux_deriv_) {
    throw InvalidArgument("FluxModel '" + name_ + "' needs flux and derivative");
  }
  if (!(admissible_.hi >= admissible_.lo)) {
    throw InvalidArgument("FluxModel '" + name_ + "': empty admissible range");
  }
}

double FluxModel::max_speed(Interval range, int samples) const {
  double s = 0.0;
  const int n = std::max(samples, 2);
  for (int i = 0; i < n; ++i) {
    const double u = range.lo + (range.hi - range.lo) * i / (n - 1);
    s = std::max(s, std::abs(flux_deriv_(u)));
  }
  return s;
}

FluxModel burgers() {
  return FluxModel(
      "burgers", [](double u) { return 0.5 * u * u; },
      [](double u) { return u; }, Interval{-1.0, 1.0}, 0.0);
}

FluxModel lwr() {
  return FluxModel(
      "lwr", [](double u) { return u - u * u; },
      [](double u) { return 1.0 - 2.0 * u; }, Interval{0.0, 1.0}, 0.5);
}

FluxModel linear_flux(double velocity) {
  return FluxModel(
      "linear:" + describe(velocity),
      [velocity](double u) { return velocity * u; },
      [velocity](double) { return velocity; }, Interval{-1.0, 1.0});
}

FluxModel scalar_model_by_name(const std::string& name) {
  if (name == "burgers") return burgers();
  if (name == "lwr") return lwr();
  if (name == "zero") return linear_flux(0.0);
  if (name.rfind("linear:", 0) == 0) {
    try {
      return linear_flux(std::stod(name.substr(7)));
    } catch (const std::exception&) {
      throw InvalidArgument("bad linear flux speed in '" + name + "'");
    }
  }
  throw InvalidArgument("unknown scalar model '" + name + "'");
}

bool RelaxationConfig::zero_limit() const {
  return !epsilon.has_value() || dt / *epsilon > 36.0;
}

double RelaxationConfig::interaction_probability() const {
  if (zero_limit()) return 1.0;
  return -std::expm1(-dt / *epsilon);
}

double RelaxationConfig::speed(std::size_t family) const {
  if (speeds.empty()) throw InvalidArgument("relaxation speeds not set");
  return family < speeds.size() ? speeds[family] : speeds.back();
}

void RelaxationConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (epsilon && !(*epsilon > 0.0)) {
    throw InvalidArgument("epsilon must be positive (omit it for the zero limit)");
  }
  if (speeds.empty()) throw InvalidArgument("at least one relaxation speed is required");
  for (double a : speeds) {
    if (!(a > 0.0)) throw InvalidArgument("relaxation speeds must be positive");
  }
}

void validate_subcharacteristic(const FluxModel& model, double a, Interval range,
                                int samples) {
  const int n = std::max(samples, 2);
  for (int i = 0; i < n; ++i) {
    const double u = range.lo + (range.hi - range.lo) * i / (n - 1);
    const double s = model.flux_deriv(u);
    if (!(a * a > s * s)) {
      throw SubcharacteristicViolation(
          "subcharacteristic condition a^2 > F'(u)^2 fails for " + model.name() +
          " at u=" + describe(u) + " (F'=" + describe(s) + ", a=" + describe(a) + ")");
    }
  }
}

EquilibriumPair equilibrium_split(const FluxModel& model, double u, double a) {
  const double f = model.flux(u);
  return {(a * u + f) / (2.0 * a), (a * u - f) / (2.0 * a)};
}

ProbabilityPair gradient_probabilities(const FluxModel& model, double u,
                                       double a) {
  const double s = model.flux_deriv(u);
  if (!(std::abs(s) < a)) {
    throw SubcharacteristicViolation("|F'(u)| = " + describe(std::abs(s)) +
                                     " >= a = " + describe(a));
  }
  const double plus = (a + s) / (2.0 * a);
  return {plus, 1.0 - plus};
}

ProbabilityPair abs_equilibrium_probabilities(double e_plus, double e_minus) {
  const double total = std::abs(e_plus) + std::abs(e_minus);
  if (total == 0.0) throw DegenerateCell("|E+| + |E-| = 0");
  const double plus = std::abs(e_plus) / total;
  return {plus, std::abs(e_minus) / total};
}

double plus_probability(double lambda, double a, SubcharacteristicGuard guard,
                        std::size_t& clipped) {
  if (std::abs(lambda) < a) return (a + lambda) / (2.0 * a);
  if (guard == SubcharacteristicGuard::strict || std::isnan(lambda)) {
    throw SubcharacteristicViolation("|lambda| = " + describe(std::abs(lambda)) +
                                     " >= a = " + describe(a));
  }
  ++clipped;
  return lambda > 0.0 ? 1.0 : 0.0;
}

// ---------------------------------------------------------------------------

SystemModel::SystemModel(std::string name, std::size_t n, VectorFn flux,
                         VectorFn eigenvalues, JacobianFn jacobian,
                         std::vector<std::string> component_names)
    : name_(std::move(name)),
      n_(n),
      flux_(std::move(flux)),
      eigen_(std::move(eigenvalues)),
      jacobian_(std::move(jacobian)),
      names_(std::move(component_names)) {
  if (n_ == 0 || n_ > kMaxComponents) {
    throw InvalidArgument("SystemModel '" + name_ + "': component count out of range");
  }
  if (names_.size() != n_) {
    throw InvalidArgument("SystemModel '" + name_ + "': need one name per component");
  }
}

SystemModel shallow_water(double g) {
  if (!(g > 0.0)) throw InvalidArgument("gravity must be positive");
  auto velocity = [](const StateVector& q) {
    return q[0] > kVacuum ? q[1] / q[0] : 0.0;
  };
  return SystemModel(
      "swe", 2,
      [g, velocity](const StateVector& q) {
        const double u = velocity(q);
        return StateVector{q[1], 0.5 * g * q[0] * q[0] + q[1] * u, 0, 0};
      },
      [g, velocity](const StateVector& q) {
        const double u = velocity(q);
        const double c = std::sqrt(g * std::max(q[0], 0.0));
        return StateVector{u - c, u + c, 0, 0};
      },
      [g, velocity](const StateVector& q) {
        const double u = velocity(q);
        Jacobian j{};
        j[0 * kMaxComponents + 1] = 1.0;
        j[1 * kMaxComponents + 0] = g * q[0] - u * u;
        j[1 * kMaxComponents + 1] = 2.0 * u;
        return j;
      },
      {"h", "hu"});
}

SystemModel aw_rascle(double cv) {
  if (!(cv > 0.0)) throw InvalidArgument("c_v must be positive");
  // q = (rho, y), y = rho (u + cv rho); u = y/rho - cv rho.
  auto velocity = [cv](const StateVector& q) {
    return q[0] > kVacuum ? q[1] / q[0] - cv * q[0] : 0.0;
  };
  return SystemModel(
      "aw_rascle", 2,
      [velocity](const StateVector& q) {
        if (q[0] <= kVacuum) return StateVector{0, 0, 0, 0};
        const double u = velocity(q);
        return StateVector{q[0] * u, q[1] * u, 0, 0};
      },
      [cv, velocity](const StateVector& q) {
        const double u = velocity(q);
        const double rho = std::max(q[0], 0.0);
        return StateVector{u - cv * rho, u, 0, 0};
      },
      [cv](const StateVector& q) {
        Jacobian j{};
        if (q[0] <= kVacuum) return j;
        const double rho = q[0];
        const double y = q[1];
        j[0 * kMaxComponents + 0] = -2.0 * cv * rho;
        j[0 * kMaxComponents + 1] = 1.0;
        j[1 * kMaxComponents + 0] = -y * y / (rho * rho) - y * cv;
        j[1 * kMaxComponents + 1] = 2.0 * y / rho - cv * rho;
        return j;
      },
      {"rho", "y"});
}

SystemModel isentropic_euler() {
  auto velocity = [](const StateVector& q) {
    return q[0] > kVacuum ? q[1] / q[0] : 0.0;
  };
  return SystemModel(
      "euler", 2,
      [velocity](const StateVector& q) {
        const double u = velocity(q);
        return StateVector{q[1], 0.5 * (q[0] + q[1] * u), 0, 0};
      },
      [velocity](const StateVector& q) {
        const double u = velocity(q);
        const double r = std::sqrt(std::max(2.0 - u * u, 0.0));
        return StateVector{0.5 * (u - r), 0.5 * (u + r), 0, 0};
      },
      [velocity](const StateVector& q) {
        const double u = velocity(q);
        Jacobian j{};
        j[0 * kMaxComponents + 1] = 1.0;
        j[1 * kMaxComponents + 0] = 0.5 * (1.0 - u * u);
        j[1 * kMaxComponents + 1] = u;
        return j;
      },
      {"rho", "m"});
}

SystemModel system_from_scalar(const FluxModel& model) {
  return SystemModel(
      model.name(), 1,
      [model](const StateVector& u) { return StateVector{model.flux(u[0]), 0, 0, 0}; },
      [model](const StateVector& u) {
        return StateVector{model.flux_deriv(u[0]), 0, 0, 0};
      },
      [model](const StateVector& u) {
        Jacobian j{};
        j[0] = model.flux_deriv(u[0]);
        return j;
      },
      {"u"});
}

// ---------------------------------------------------------------------------

CharacteristicModel::CharacteristicModel(std::string name, std::size_t n,
                                         VectorFn to_invariants,
                                         InverseFn from_invariants,
                                         VectorFn char_speeds,
                                         std::vector<std::string> physical_names)
    : name_(std::move(name)),
      n_(n),
      to_inv_(std::move(to_invariants)),
      from_inv_(std::move(from_invariants)),
      speeds_(std::move(char_speeds)),
      names_(std::move(physical_names)) {
  if (n_ == 0 || n_ > kMaxComponents || names_.size() != n_) {
    throw InvalidArgument("CharacteristicModel '" + name_ + "': bad component layout");
  }
}

StateVector CharacteristicModel::from_invariants(const StateVector& gamma) const {
  StateVector out{};
  from_inv_(gamma, out);
  return out;
}

std::array<double, 2> swe_invariants(double h, double u, double g) {
  if (h < 0.0) throw NegativeDepth("negative water depth h=" + describe(h));
  if (!(g > 0.0)) throw InvalidArgument("gravity must be positive");
  const double c = std::sqrt(g * h);
  return {u + 2.0 * c, u - 2.0 * c};
}

std::array<double, 2> swe_from_invariants(double g1, double g2, double g) {
  const double d = g1 - g2;
  return {d * d / (16.0 * g), 0.5 * (g1 + g2)};
}

std::array<double, 2> awr_invariants(double rho, double u, double cv) {
  if (rho < 0.0) throw NegativeDensity("negative density rho=" + describe(rho));
  return {u + cv * rho, u};
}

std::array<double, 2> awr_from_invariants(double g1, double g2, double cv) {
  return {(g1 - g2) / cv, g2};
}

CharacteristicModel swe_characteristic(double g) {
  if (!(g > 0.0)) throw InvalidArgument("gravity must be positive");
  return CharacteristicModel(
      "swe", 2,
      [g](const StateVector& p) {
        const auto gm = swe_invariants(p[0], p[1], g);
        return StateVector{gm[0], gm[1], 0, 0};
      },
      [g](const StateVector& gm, StateVector& p) {
        // Gamma_1 < Gamma_2 would mean c < 0: treat as dry bed.
        const bool clamped = gm[0] < gm[1];
        const auto hu = swe_from_invariants(clamped ? gm[1] : gm[0], gm[1], g);
        p = StateVector{hu[0], clamped ? 0.5 * (gm[0] + gm[1]) : hu[1], 0, 0};
        return clamped;
      },
      [](const StateVector& gm) {
        const double u = 0.5 * (gm[0] + gm[1]);
        const double c = std::max(0.25 * (gm[0] - gm[1]), 0.0);
        return StateVector{u + c, u - c, 0, 0};
      },
      {"h", "u"});
}

CharacteristicModel awr_characteristic(double cv) {
  if (!(cv > 0.0)) throw InvalidArgument("c_v must be positive");
  return CharacteristicModel(
      "aw_rascle", 2,
      [cv](const StateVector& p) {
        const auto gm = awr_invariants(p[0], p[1], cv);
        return StateVector{gm[0], gm[1], 0, 0};
      },
      [cv](const StateVector& gm, StateVector& p) {
        const auto ru = awr_from_invariants(gm[0], gm[1], cv);
        const bool clamped = ru[0] < 0.0;
        p = StateVector{clamped ? 0.0 : ru[0], ru[1], 0, 0};
        return clamped;
      },
      [](const StateVector& gm) {
        // lambda_1 = u, lambda_2 = u - rho p'(rho) = Gamma_2 - (Gamma_1 - Gamma_2).
        const double rho_cv = std::max(gm[0] - gm[1], 0.0);
        return StateVector{gm[1], gm[1] - rho_cv, 0, 0};
      },
      {"rho", "u"});
}

CharacteristicModel characteristic_from_scalar(const FluxModel& model) {
  return CharacteristicModel(
      model.name(), 1, [](const StateVector& p) { return p; },
      [](const StateVector& gm, StateVector& p) {
        p = gm;
        return false;
      },
      [model](const StateVector& gm) {
        return StateVector{model.flux_deriv(gm[0]), 0, 0, 0};
      },
      {"u"});
}

StateVector swe_conserved(double h, double u) { return {h, h * u, 0, 0}; }

StateVector awr_conserved(double rho, double u, double cv) {
  return {rho, rho * (u + cv * rho), 0, 0};
}

StateVector euler_conserved(double rho, double u) { return {rho, rho * u, 0, 0}; }

}  // namespace gbmc
