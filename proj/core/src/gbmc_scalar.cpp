#include "gbmc/gbmc_scalar.hpp"

#include <utility>

#include "gbmc/error.hpp"

namespace gbmc {

GbmcState make_gbmc_state(const FluxModel& model, const ScalarProfile& u0,
                          const RelaxationConfig& config, std::size_t n,
                          std::uint64_t seed) {
  config.validate();
  RngStream rng(seed, 0);
  ParticleEnsemble ens =
      sample_gbmc_initial(u0, n, model, config.speed(0), rng, config.guard);
  GbmcState s{std::move(ens), config, model, u0.left_value(), u0.right_value(),
              CdfMode::blended, 0.0, std::move(rng), {}};
  return s;
}

void gbmc_step(GbmcState& s) {
  auto& ens = s.ensemble;
  const double a = s.config.speed(0);
  if (ens.speed != a) throw InvalidArgument("ensemble speed does not match the relaxation speed");
  transport(ens, s.config.dt);
  const CdfTable table(ens, s.u_left, s.u_right);
  const std::vector<double> u = table.at_particles(s.mode);
  const double q = s.config.interaction_probability();
  for (std::size_t k = 0; k < ens.size(); ++k) {
    if (q < 1.0 && !(s.rng.uniform() < q)) continue;
    const double p = plus_probability(s.model.flux_deriv(u[k]), a, s.config.guard,
                                      s.diag.clipped);
    ens.v[k] = s.rng.uniform() < p ? a : -a;
  }
  s.t += s.config.dt;
  ++s.diag.steps;
}

std::vector<double> reconstruct_solution(const GbmcState& s,
                                         const std::vector<double>& points) {
  return CdfTable(s.ensemble, s.u_left, s.u_right).evaluate(points, s.mode);
}

FieldOnGrid reconstruct_solution(const GbmcState& s, const Grid& output) {
  FieldOnGrid f(output, 1);
  f[0] = reconstruct_solution(s, output.centers());
  return f;
}

FieldOnGrid derivative_histogram(const GbmcState& s, const Grid& output) {
  return histogram(s.ensemble, output);
}

RunResult run_gbmc(const FluxModel& model, const ScalarProfile& u0,
                   const RelaxationConfig& config, std::size_t n,
                   double final_time, std::uint64_t seed, const Grid& output,
                   const RunOptions& options, CdfMode mode) {
  const Schedule schedule = make_schedule(final_time, config.dt, options.snapshot_times);
  GbmcState s = make_gbmc_state(model, u0, config, n, seed);
  s.mode = mode;
  RunResult r;
  r.method = "gbmc";
  r.component_names = {"u"};
  r.initial_mass = {s.ensemble.total_mass()};
  std::size_t next = 0;
  for (std::size_t step = 0;; ++step) {
    if (next < schedule.snapshot_steps.size() && schedule.snapshot_steps[next] == step) {
      Snapshot snap{static_cast<double>(step) * s.config.dt, reconstruct_solution(s, output),
                    std::nullopt};
      if (options.derivative_histogram) snap.derivative = derivative_histogram(s, output);
      r.snapshots.push_back(std::move(snap));
      ++next;
    }
    if (step == schedule.steps) break;
    gbmc_step(s);
  }
  r.final_mass = {s.ensemble.total_mass()};
  r.diagnostics = s.diag;
  if (options.keep_ensembles) r.ensembles.push_back(std::move(s.ensemble));
  return r;
}

}  // namespace gbmc
