#include "gbmc/particles.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "gbmc/error.hpp"

namespace gbmc {

void ParticleEnsemble::reserve(std::size_t n) {
  x.reserve(n);
  v.reserve(n);
  m.reserve(n);
}

void ParticleEnsemble::push_back(double position, double velocity, double mass) {
  x.push_back(position);
  v.push_back(velocity);
  m.push_back(mass);
}

double ParticleEnsemble::total_mass() const {
  double s = 0.0;
  for (double mk : m) s += mk;
  return s / normalization;
}

void ParticleEnsemble::check() const {
  if (v.size() != x.size() || m.size() != x.size()) {
    throw InvalidArgument("ensemble arrays differ in length");
  }
  for (double vk : v) {
    if (vk != speed && vk != -speed) {
      throw InvalidArgument("ensemble velocity is not +-speed");
    }
  }
}

namespace {

using Fn = std::function<double(double)>;

// Balanced masses: every positive particle carries N P / n+, every negative
// one N Q / n-, so the signed total is exactly P - Q.
void assign_balanced_masses(ParticleEnsemble& ens, double positive,
                            double negative) {
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  for (double mk : ens.m) (mk > 0.0 ? n_pos : n_neg)++;
  const double n = ens.normalization;
  const double m_pos = n_pos ? n * positive / static_cast<double>(n_pos) : 0.0;
  const double m_neg = n_neg ? n * negative / static_cast<double>(n_neg) : 0.0;
  for (double& mk : ens.m) mk = mk > 0.0 ? m_pos : -m_neg;
}

ParticleEnsemble sample_kinetic(const Fn& f_plus, const Fn& f_minus,
                                Interval domain, std::size_t n, double a,
                                RngStream& rng, std::size_t table_size) {
  if (n == 0) throw InvalidArgument("particle count must be positive");
  if (!(a > 0.0)) throw InvalidArgument("relaxation speed must be positive");
  if (!(domain.hi > domain.lo)) throw InvalidArgument("sampling domain is empty");
  SignedMeasure measure(
      [&](double x) { return std::abs(f_plus(x)) + std::abs(f_minus(x)); },
      domain, {}, table_size);
  if (!(measure.total_variation() > 0.0)) {
    throw ZeroMass("initial datum has zero L1 norm on the sampling domain");
  }
  // Positive and negative parts of f+ and f- on the same tabulation.
  double positive = 0.0;
  double negative = 0.0;
  const double w = domain.length() / static_cast<double>(table_size);
  for (std::size_t i = 0; i < table_size; ++i) {
    const double xm = domain.lo + (static_cast<double>(i) + 0.5) * w;
    for (double f : {f_plus(xm), f_minus(xm)}) {
      if (f > 0.0) positive += f * w;
      if (f < 0.0) negative -= f * w;
    }
  }

  ParticleEnsemble ens;
  ens.speed = a;
  ens.normalization = static_cast<double>(n);
  ens.mass_unit = measure.total_variation();
  ens.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = measure.sample(rng).x;
    const double fp = f_plus(x);
    const double fm = f_minus(x);
    const double total = std::abs(fp) + std::abs(fm);
    const bool plus = rng.uniform() * total < std::abs(fp);
    const double f = plus ? fp : fm;
    ens.push_back(x, plus ? a : -a, f >= 0.0 ? 1.0 : -1.0);
  }
  assign_balanced_masses(ens, positive, negative);
  return ens;
}

}  // namespace

ParticleEnsemble sample_mc_initial(const ScalarProfile& u0, Interval domain,
                                   std::size_t n, const FluxModel& model,
                                   double a, RngStream& rng,
                                   std::size_t table_size) {
  return sample_kinetic(
      [&](double x) { return equilibrium_split(model, u0(x), a).plus; },
      [&](double x) { return equilibrium_split(model, u0(x), a).minus; },
      domain, n, a, rng, table_size);
}

ParticleEnsemble sample_mc_initial_component(const VectorProfile& u0,
                                             std::size_t h, Interval domain,
                                             std::size_t n,
                                             const SystemModel& model, double a,
                                             RngStream& rng,
                                             std::size_t table_size) {
  if (h >= model.components() || u0.size() != model.components()) {
    throw InvalidArgument("initial data do not match the system's components");
  }
  auto f = [&](double x, double sign) {
    const StateVector u = evaluate(u0, x);
    return (a * u[h] + sign * model.flux(u)[h]) / (2.0 * a);
  };
  ParticleEnsemble ens = sample_kinetic([&](double x) { return f(x, 1.0); },
                                        [&](double x) { return f(x, -1.0); },
                                        domain, n, a, rng, table_size);
  ens.family = h;
  return ens;
}

ParticleEnsemble sample_gbmc_initial(const ScalarProfile& u0, std::size_t n,
                                     double a, const BranchProbability& p_plus,
                                     RngStream& rng, std::size_t table_size) {
  if (n == 0) throw InvalidArgument("particle count must be positive");
  if (!(a > 0.0)) throw InvalidArgument("relaxation speed must be positive");
  const SignedMeasure measure = derivative_measure(u0, table_size);
  if (!(measure.total_variation() > 0.0)) {
    throw ZeroVariation("initial datum has zero total variation");
  }
  ParticleEnsemble ens;
  ens.speed = a;
  ens.normalization = static_cast<double>(n);
  ens.mass_unit = measure.total_variation();
  ens.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto s = measure.sample(rng);
    const double p = p_plus(s.x, s.atom);
    ens.push_back(s.x, rng.uniform() < p ? a : -a, static_cast<double>(s.sign));
  }
  assign_balanced_masses(ens, measure.positive_mass(), measure.negative_mass());
  return ens;
}

ParticleEnsemble sample_gbmc_initial(const ScalarProfile& u0, std::size_t n,
                                     const FluxModel& model, double a,
                                     RngStream& rng, SubcharacteristicGuard guard,
                                     std::size_t table_size) {
  std::size_t clipped = 0;
  return sample_gbmc_initial(
      u0, n, a,
      [&](double x, long atom) {
        const double u =
            atom >= 0 ? 0.5 * (u0.left_limit(x) + u0(x)) : u0(x);
        return plus_probability(model.flux_deriv(u), a, guard, clipped);
      },
      rng, table_size);
}

void transport(ParticleEnsemble& ens, double dt) {
  if (!(dt >= 0.0)) throw InvalidArgument("transport needs dt >= 0");
  const std::size_t n = ens.size();
  for (std::size_t k = 0; k < n; ++k) ens.x[k] += ens.v[k] * dt;
}

void write_ensemble_rows(std::ostream& os, const ParticleEnsemble& ens) {
  char buf[128];
  for (std::size_t k = 0; k < ens.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", ens.family,
                  ens.x[k], ens.v[k], ens.m[k]);
    os << buf;
  }
}

}  // namespace gbmc
