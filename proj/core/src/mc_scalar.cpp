#include "gbmc/mc_scalar.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gbmc/error.hpp"

namespace gbmc {

namespace {

// Particle indices grouped by cell, each group in index order.
struct CellMembers {
  std::vector<std::size_t> offset;  // size cells + 1
  std::vector<std::size_t> index;

  CellMembers(const CellIndex& cells, std::size_t m) : offset(m + 1, 0) {
    for (std::size_t j = 0; j < m; ++j) offset[j + 1] = offset[j] + cells.count[j];
    index.resize(offset[m]);
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t k = 0; k < cells.cell.size(); ++k) {
      const long j = cells.cell[k];
      if (j >= 0) index[fill[static_cast<std::size_t>(j)]++] = k;
    }
  }
  std::size_t* begin(std::size_t j) { return index.data() + offset[j]; }
  std::size_t size(std::size_t j) const { return offset[j + 1] - offset[j]; }
};

// Moves a uniformly chosen subset of size k to the front (partial
// Fisher-Yates on the cell's member list).
void choose_front(std::size_t* members, std::size_t n, std::size_t k,
                  RngStream& rng) {
  for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
    const std::size_t r = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(members[i], members[r]);
  }
}

std::size_t interacting_count(std::size_t n, double q, RngStream& rng) {
  if (q >= 1.0) return n;
  return static_cast<std::size_t>(stochastic_round(q * static_cast<double>(n), rng));
}

std::vector<double> cell_values(const ParticleEnsemble& ens, const Grid& grid,
                                const CellIndex& cells) {
  std::vector<double> u(grid.cells(), 0.0);
  for (std::size_t k = 0; k < ens.size(); ++k) {
    if (cells.cell[k] >= 0) u[static_cast<std::size_t>(cells.cell[k])] += ens.m[k];
  }
  const double scale = 1.0 / (ens.normalization * grid.dx());
  for (double& uj : u) uj *= scale;
  return u;
}

// E+(u_j)/u_j per occupied cell for the positive-mass variants; NaN marks
// skipped cells.
std::vector<double> positive_probabilities(McState& s, const CellIndex& cells) {
  const double a = s.config.speed(0);
  const std::vector<double> u = cell_values(s.ensemble, s.grid, cells);
  std::vector<double> p(u.size(), std::nan(""));
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (cells.count[j] == 0) continue;
    if (u[j] == 0.0) {
      ++s.diag.empty_cells;
      continue;
    }
    const EquilibriumPair e = equilibrium_split(s.model, u[j], a);
    const double tol = 1e-12 * std::abs(u[j]);
    if (e.plus < -tol || e.minus < -tol || u[j] < 0.0) {
      throw NegativeEquilibrium(
          "negative equilibrium in cell " + std::to_string(j) +
          "; use a weighted variant for sign-changing data");
    }
    p[j] = std::clamp(e.plus / u[j], 0.0, 1.0);
  }
  return p;
}

void check_state(const McState& s) {
  if (s.ensemble.speed != s.config.speed(0)) {
    throw InvalidArgument("ensemble speed does not match the relaxation speed");
  }
}

}  // namespace

McState make_mc_state(const FluxModel& model, const ScalarProfile& u0,
                      const RelaxationConfig& config, const Grid& grid,
                      std::size_t n, std::uint64_t seed,
                      std::optional<Interval> sampling_domain) {
  config.validate();
  RngStream rng(seed, 0);
  const Interval domain =
      sampling_domain.value_or(Interval{grid.x_min(), grid.x_max()});
  ParticleEnsemble ens =
      sample_mc_initial(u0, domain, n, model, config.speed(0), rng);
  return McState{std::move(ens), grid, config, model, 0.0, std::move(rng), {},
                 false, {}};
}

void relax_baseline(McState& s) {
  check_state(s);
  const CellIndex cells = index_cells(s.ensemble, s.grid);
  const std::vector<double> p = positive_probabilities(s, cells);
  const double q = s.config.interaction_probability();
  const double a = s.config.speed(0);
  auto& ens = s.ensemble;
  for (std::size_t k = 0; k < ens.size(); ++k) {
    const long j = cells.cell[k];
    if (j < 0 || std::isnan(p[static_cast<std::size_t>(j)])) continue;
    if (q < 1.0 && !(s.rng.uniform() < q)) continue;
    ens.v[k] = s.rng.uniform() < p[static_cast<std::size_t>(j)] ? a : -a;
  }
}

void relax_low_variance(McState& s) {
  check_state(s);
  const CellIndex cells = index_cells(s.ensemble, s.grid);
  const std::vector<double> p = positive_probabilities(s, cells);
  const double q = s.config.interaction_probability();
  const double a = s.config.speed(0);
  CellMembers members(cells, s.grid.cells());
  for (std::size_t j = 0; j < s.grid.cells(); ++j) {
    const std::size_t nj = members.size(j);
    if (nj == 0 || std::isnan(p[j])) continue;
    std::size_t* list = members.begin(j);
    const std::size_t nc = interacting_count(nj, q, s.rng);
    choose_front(list, nj, nc, s.rng);
    const auto np = static_cast<std::size_t>(
        stochastic_round(p[j] * static_cast<double>(nc), s.rng));
    for (std::size_t i = 0; i < nc; ++i) s.ensemble.v[list[i]] = i < np ? a : -a;
  }
}

void relax_family_weighted(ParticleEnsemble& ens, const Grid& grid,
                           const CellIndex& cells,
                           const std::vector<double>& e_plus,
                           const std::vector<double>& e_minus,
                           const WeightedRelaxation& how, RngStream& rng,
                           Diagnostics& diag, std::vector<double>* cell_mass) {
  const std::size_t m = grid.cells();
  const double a = ens.speed;
  const double n_dx = ens.normalization * grid.dx();
  const double q = how.interaction;

  std::vector<double> p(m, std::nan(""));
  std::vector<double> mass(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (cells.count[j] == 0) continue;
    const double total = std::abs(e_plus[j]) + std::abs(e_minus[j]);
    if (total == 0.0) {
      ++diag.degenerate_cells;
      continue;
    }
    p[j] = std::abs(e_plus[j]) / total;
    mass[j] = total * n_dx / static_cast<double>(cells.count[j]);
  }
  auto sign = [](double e) { return e >= 0.0 ? 1.0 : -1.0; };

  if (how.strategy == WeightedStrategy::fixed_count) {
    if (cell_mass) *cell_mass = mass;
    if (!how.low_variance) {
      for (std::size_t k = 0; k < ens.size(); ++k) {
        const long jl = cells.cell[k];
        if (jl < 0) continue;
        const auto j = static_cast<std::size_t>(jl);
        if (std::isnan(p[j])) continue;
        if (q < 1.0 && !(rng.uniform() < q)) continue;
        const bool plus = rng.uniform() < p[j];
        ens.v[k] = plus ? a : -a;
        ens.m[k] = sign(plus ? e_plus[j] : e_minus[j]) * mass[j];
      }
      return;
    }
    CellMembers members(cells, m);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t nj = members.size(j);
      if (nj == 0 || std::isnan(p[j])) continue;
      std::size_t* list = members.begin(j);
      const std::size_t nc = interacting_count(nj, q, rng);
      choose_front(list, nj, nc, rng);
      const auto np = static_cast<std::size_t>(
          stochastic_round(p[j] * static_cast<double>(nc), rng));
      for (std::size_t i = 0; i < nc; ++i) {
        const bool plus = i < np;
        ens.v[list[i]] = plus ? a : -a;
        ens.m[list[i]] = sign(plus ? e_plus[j] : e_minus[j]) * mass[j];
      }
    }
    return;
  }

  // Fixed mass: kill / replicate towards SRound(|E+-| N dx / m) particles.
  const double unit = ens.mass_unit;
  if (!(unit > 0.0)) throw InvalidArgument("fixed-mass strategy needs a positive mass unit");
  if (cell_mass) cell_mass->assign(m, unit);
  CellMembers members(cells, m);
  std::vector<char> dead(ens.size(), 0);
  ParticleEnsemble born;
  std::vector<std::size_t> chosen;
  std::size_t killed = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t nj = members.size(j);
    if (nj == 0 || std::isnan(p[j])) continue;
    std::size_t* list = members.begin(j);
    std::size_t nc;
    if (how.low_variance) {
      nc = interacting_count(nj, q, rng);
      choose_front(list, nj, nc, rng);
      chosen.assign(list, list + nc);
    } else {
      chosen.clear();
      for (std::size_t i = 0; i < nj; ++i) {
        if (q >= 1.0 || rng.uniform() < q) chosen.push_back(list[i]);
      }
      nc = chosen.size();
      choose_front(chosen.data(), nc, nc, rng);
    }
    if (nc == 0) continue;
    const double scale = static_cast<double>(nc) / static_cast<double>(nj);
    const auto tp = static_cast<std::size_t>(
        stochastic_round(scale * std::abs(e_plus[j]) * n_dx / unit, rng));
    const auto tm = static_cast<std::size_t>(
        stochastic_round(scale * std::abs(e_minus[j]) * n_dx / unit, rng));
    const std::size_t target = tp + tm;
    for (std::size_t i = 0; i < std::max(target, nc); ++i) {
      if (i >= target) {
        dead[chosen[i]] = 1;
        ++killed;
        continue;
      }
      const bool plus = i < tp;
      const double vel = plus ? a : -a;
      const double mk = sign(plus ? e_plus[j] : e_minus[j]) * unit;
      if (i < nc) {
        ens.v[chosen[i]] = vel;
        ens.m[chosen[i]] = mk;
      } else {
        double x = grid.left_edge(j) + rng.uniform() * grid.dx();
        if (grid.cell_of(x) != static_cast<long>(j)) x = grid.center(j);
        born.push_back(x, vel, mk);
      }
    }
  }
  diag.killed += killed;
  diag.replicated += born.size();
  if (killed || !born.empty()) {
    std::size_t w = 0;
    for (std::size_t k = 0; k < ens.size(); ++k) {
      if (dead[k]) continue;
      ens.x[w] = ens.x[k];
      ens.v[w] = ens.v[k];
      ens.m[w] = ens.m[k];
      ++w;
    }
    ens.x.resize(w);
    ens.v.resize(w);
    ens.m.resize(w);
    for (std::size_t k = 0; k < born.size(); ++k) {
      ens.push_back(born.x[k], born.v[k], born.m[k]);
    }
  }
}

void relax_weighted(McState& s, WeightedStrategy strategy) {
  check_state(s);
  const CellIndex cells = index_cells(s.ensemble, s.grid);
  const std::vector<double> u = cell_values(s.ensemble, s.grid, cells);
  const double a = s.config.speed(0);
  std::vector<double> ep(u.size()), em(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const EquilibriumPair e = equilibrium_split(s.model, u[j], a);
    ep[j] = e.plus;
    em[j] = e.minus;
  }
  WeightedRelaxation how{strategy, s.low_variance, s.config.interaction_probability()};
  relax_family_weighted(s.ensemble, s.grid, cells, ep, em, how, s.rng, s.diag,
                        &s.cell_mass);
}

namespace {

void finish_step(McState& s) {
  s.t += s.config.dt;
  ++s.diag.steps;
  std::size_t out = 0;
  for (double x : s.ensemble.x) out += s.grid.cell_of(x) < 0;
  s.diag.outside = out;
}

}  // namespace

void mc_step(McState& s) {
  transport(s.ensemble, s.config.dt);
  relax_baseline(s);
  finish_step(s);
}

void mc_step_lowvar(McState& s) {
  transport(s.ensemble, s.config.dt);
  relax_low_variance(s);
  finish_step(s);
}

void mc_step_weighted(McState& s, WeightedStrategy strategy) {
  transport(s.ensemble, s.config.dt);
  relax_weighted(s, strategy);
  finish_step(s);
}

void mc_step(McState& s, McVariant variant) {
  switch (variant) {
    case McVariant::baseline:
      return mc_step(s);
    case McVariant::low_variance:
      return mc_step_lowvar(s);
    case McVariant::weighted_fixed_count:
      return mc_step_weighted(s, WeightedStrategy::fixed_count);
    case McVariant::weighted_fixed_mass:
      return mc_step_weighted(s, WeightedStrategy::fixed_mass);
  }
}

RunResult run_mc(const FluxModel& model, const ScalarProfile& u0,
                 const RelaxationConfig& config, const Grid& grid,
                 std::size_t n, double final_time, McVariant variant,
                 std::uint64_t seed, const RunOptions& options,
                 std::optional<Interval> sampling_domain) {
  const Schedule schedule = make_schedule(final_time, config.dt, options.snapshot_times);
  McState s = make_mc_state(model, u0, config, grid, n, seed, sampling_domain);
  RunResult r;
  r.method = std::string("mc-") + to_string(variant);
  r.component_names = {"u"};
  r.initial_mass = {s.ensemble.total_mass()};
  std::size_t next = 0;
  for (std::size_t step = 0;; ++step) {
    if (next < schedule.snapshot_steps.size() && schedule.snapshot_steps[next] == step) {
      r.snapshots.push_back(
          {static_cast<double>(step) * s.config.dt, histogram(s.ensemble, s.grid), std::nullopt});
      ++next;
    }
    if (step == schedule.steps) break;
    mc_step(s, variant);
  }
  r.final_mass = {s.ensemble.total_mass()};
  r.diagnostics = s.diag;
  if (options.keep_ensembles) r.ensembles.push_back(std::move(s.ensemble));
  return r;
}

const char* to_string(McVariant v) {
  switch (v) {
    case McVariant::baseline:
      return "baseline";
    case McVariant::low_variance:
      return "lowvar";
    case McVariant::weighted_fixed_count:
      return "weighted-count";
    case McVariant::weighted_fixed_mass:
      return "weighted-mass";
  }
  return "?";
}

}  // namespace gbmc
