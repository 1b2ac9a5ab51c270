#include "gbmc/systems.hpp"

#include <cmath>
#include <utility>

#include "gbmc/error.hpp"

namespace gbmc {

namespace {

std::vector<RngStream> make_streams(std::uint64_t seed, std::size_t n) {
  std::vector<RngStream> r;
  r.reserve(n);
  for (std::size_t h = 0; h < n; ++h) r.emplace_back(seed, h);
  return r;
}

void check_speeds(const RelaxationConfig& config, std::size_t n) {
  config.validate();
  if (config.speeds.size() != 1 && config.speeds.size() != n) {
    throw InvalidArgument("need one relaxation speed or one per component");
  }
}

std::vector<double> family_cell_values(const ParticleEnsemble& ens,
                                       const Grid& grid, const CellIndex& cells) {
  std::vector<double> u(grid.cells(), 0.0);
  for (std::size_t k = 0; k < ens.size(); ++k) {
    if (cells.cell[k] >= 0) u[static_cast<std::size_t>(cells.cell[k])] += ens.m[k];
  }
  const double scale = 1.0 / (ens.normalization * grid.dx());
  for (double& uj : u) uj *= scale;
  return u;
}

std::vector<double> masses(const std::vector<ParticleEnsemble>& families) {
  std::vector<double> out;
  for (const auto& f : families) out.push_back(f.total_mass());
  return out;
}

FieldOnGrid family_histograms(const std::vector<ParticleEnsemble>& families,
                              const Grid& grid, std::size_t* outside) {
  FieldOnGrid f(grid, families.size());
  std::size_t total = 0;
  for (std::size_t h = 0; h < families.size(); ++h) {
    std::size_t out = 0;
    f[h] = histogram(families[h], grid, &out)[0];
    total += out;
  }
  if (outside) *outside = total;
  return f;
}

FieldOnGrid pack(const Grid& grid, const std::vector<StateVector>& states,
                 std::size_t n) {
  FieldOnGrid f(grid, n);
  for (std::size_t j = 0; j < states.size(); ++j) {
    for (std::size_t k = 0; k < n; ++k) f[k][j] = states[j][k];
  }
  return f;
}

template <class State, class Step, class Fields>
RunResult drive(State& s, double final_time, const RunOptions& options,
                std::string method, std::vector<std::string> names,
                const Step& step, const Fields& fields,
                const Grid* derivative_grid) {
  const Schedule schedule = make_schedule(final_time, s.config.dt, options.snapshot_times);
  RunResult r;
  r.method = std::move(method);
  r.component_names = std::move(names);
  r.initial_mass = masses(s.families);
  std::size_t next = 0;
  for (std::size_t k = 0;; ++k) {
    if (next < schedule.snapshot_steps.size() && schedule.snapshot_steps[next] == k) {
      Snapshot snap{static_cast<double>(k) * s.config.dt, fields(s), std::nullopt};
      if (options.derivative_histogram && derivative_grid) {
        snap.derivative = family_histograms(s.families, *derivative_grid, nullptr);
      }
      r.snapshots.push_back(std::move(snap));
      ++next;
    }
    if (k == schedule.steps) break;
    step(s);
  }
  r.final_mass = masses(s.families);
  r.diagnostics = s.diag;
  if (options.keep_ensembles) r.ensembles = std::move(s.families);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Weighted MC

SystemMcState make_system_mc_state(const SystemModel& model,
                                   const VectorProfile& u0,
                                   const RelaxationConfig& config,
                                   const Grid& grid, std::size_t n,
                                   std::uint64_t seed,
                                   std::optional<Interval> sampling_domain) {
  const std::size_t nc = model.components();
  check_speeds(config, nc);
  const Interval domain =
      sampling_domain.value_or(Interval{grid.x_min(), grid.x_max()});
  SystemMcState s{{}, grid, config, model, 0.0, make_streams(seed, nc),
                  std::vector<std::vector<double>>(nc), WeightedStrategy::fixed_count,
                  false, {}};
  for (std::size_t h = 0; h < nc; ++h) {
    s.families.push_back(sample_mc_initial_component(u0, h, domain, n, model,
                                                     config.speed(h), s.rngs[h]));
  }
  return s;
}

void mc_systems_step(SystemMcState& s) {
  const std::size_t nc = s.model.components();
  const std::size_t m = s.grid.cells();
  for (auto& f : s.families) transport(f, s.config.dt);

  std::vector<CellIndex> cells;
  std::vector<std::vector<double>> u(nc);
  for (std::size_t h = 0; h < nc; ++h) {
    cells.push_back(index_cells(s.families[h], s.grid));
    u[h] = family_cell_values(s.families[h], s.grid, cells[h]);
  }
  std::vector<std::vector<double>> ep(nc, std::vector<double>(m));
  std::vector<std::vector<double>> em(nc, std::vector<double>(m));
  for (std::size_t j = 0; j < m; ++j) {
    StateVector uj{};
    for (std::size_t h = 0; h < nc; ++h) uj[h] = u[h][j];
    const StateVector f = s.model.flux(uj);
    for (std::size_t h = 0; h < nc; ++h) {
      const double a = s.config.speed(h);
      ep[h][j] = (a * uj[h] + f[h]) / (2.0 * a);
      em[h][j] = (a * uj[h] - f[h]) / (2.0 * a);
    }
  }
  const WeightedRelaxation how{s.strategy, s.low_variance,
                               s.config.interaction_probability()};
  std::size_t outside = 0;
  for (std::size_t h = 0; h < nc; ++h) {
    relax_family_weighted(s.families[h], s.grid, cells[h], ep[h], em[h], how,
                          s.rngs[h], s.diag, &s.cell_mass[h]);
    for (double x : s.families[h].x) outside += s.grid.cell_of(x) < 0;
  }
  s.diag.outside = outside;
  s.t += s.config.dt;
  ++s.diag.steps;
}

FieldOnGrid system_histograms(const SystemMcState& s) {
  return family_histograms(s.families, s.grid, nullptr);
}

// ---------------------------------------------------------------------------
// Characteristic GBMC

CharGbmcState make_char_gbmc_state(const CharacteristicModel& model,
                                   const VectorProfile& u0,
                                   const RelaxationConfig& config,
                                   std::size_t n, std::uint64_t seed) {
  const std::size_t nc = model.components();
  check_speeds(config, nc);
  if (u0.size() != nc) throw InvalidArgument("initial data do not match the model's components");
  const VectorProfile gamma =
      nc == 1 ? u0
              : map_states(u0, nc, [&](const StateVector& p) {
                  return model.to_invariants(p);
                });
  CharGbmcState s{{}, model, config, {}, {}, CdfMode::blended, 0.0,
                  make_streams(seed, nc), {}};
  for (std::size_t h = 0; h < nc; ++h) {
    s.gamma_left.push_back(gamma[h].left_value());
    s.gamma_right.push_back(gamma[h].right_value());
  }
  for (std::size_t h = 0; h < nc; ++h) {
    const double a = config.speed(h);
    BranchProbability p_plus = [&, h, a](double x, long atom) {
      StateVector g{};
      for (std::size_t k = 0; k < nc; ++k) {
        g[k] = atom >= 0 ? 0.5 * (gamma[k].left_limit(x) + gamma[k](x)) : gamma[k](x);
      }
      return plus_probability(model.char_speeds(g)[h], a, config.guard,
                              s.diag.clipped);
    };
    ParticleEnsemble ens = sample_gbmc_initial(gamma[h], n, a, p_plus, s.rngs[h]);
    ens.family = h;
    s.families.push_back(std::move(ens));
  }
  return s;
}

namespace {

std::vector<CdfTable> build_tables(const std::vector<ParticleEnsemble>& families,
                                   const std::vector<double>& left,
                                   const std::vector<double>& right) {
  std::vector<CdfTable> t;
  t.reserve(families.size());
  for (std::size_t h = 0; h < families.size(); ++h) {
    t.emplace_back(families[h], left[h], right[h]);
  }
  return t;
}

// values[k][i] = component k at query i.
std::vector<std::vector<double>> evaluate_all(const std::vector<CdfTable>& tables,
                                              const std::vector<double>& queries,
                                              CdfMode mode) {
  std::vector<std::vector<double>> v;
  v.reserve(tables.size());
  for (const auto& t : tables) v.push_back(t.evaluate(queries, mode));
  return v;
}

// Values at the particles of family `own`: rank order for its own table,
// tie midpoints for the other families.
std::vector<std::vector<double>> evaluate_at_family(const std::vector<CdfTable>& tables,
                                                    std::size_t own,
                                                    const std::vector<double>& x,
                                                    CdfMode mode) {
  std::vector<std::vector<double>> v;
  v.reserve(tables.size());
  for (std::size_t k = 0; k < tables.size(); ++k)
    v.push_back(k == own ? tables[k].at_particles(mode)
                         : tables[k].evaluate_midpoint(x, mode));
  return v;
}

}  // namespace

void gbmc_characteristic_step(CharGbmcState& s) {
  const std::size_t nc = s.model.components();
  for (auto& f : s.families) transport(f, s.config.dt);
  const std::vector<CdfTable> tables = build_tables(s.families, s.gamma_left, s.gamma_right);
  const double q = s.config.interaction_probability();
  for (std::size_t h = 0; h < nc; ++h) {
    auto& ens = s.families[h];
    const double a = s.config.speed(h);
    const auto gamma = evaluate_at_family(tables, h, ens.x, s.mode);
    auto& rng = s.rngs[h];
    for (std::size_t i = 0; i < ens.size(); ++i) {
      if (q < 1.0 && !(rng.uniform() < q)) continue;
      StateVector g{};
      for (std::size_t k = 0; k < nc; ++k) g[k] = gamma[k][i];
      const double p = plus_probability(s.model.char_speeds(g)[h], a,
                                        s.config.guard, s.diag.clipped);
      ens.v[i] = rng.uniform() < p ? a : -a;
    }
  }
  s.t += s.config.dt;
  ++s.diag.steps;
}

std::vector<StateVector> invariant_fields(const CharGbmcState& s,
                                          const std::vector<double>& queries) {
  const auto tables = build_tables(s.families, s.gamma_left, s.gamma_right);
  const auto v = evaluate_all(tables, queries, s.mode);
  std::vector<StateVector> out(queries.size(), StateVector{});
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (std::size_t k = 0; k < v.size(); ++k) out[i][k] = v[k][i];
  }
  return out;
}

std::vector<StateVector> physical_fields(const CharGbmcState& s,
                                         const std::vector<double>& queries,
                                         std::size_t* clamped) {
  std::vector<StateVector> gamma = invariant_fields(s, queries);
  std::size_t count = 0;
  for (auto& g : gamma) {
    StateVector p{};
    count += s.model.from_invariants(g, p);
    g = p;
  }
  if (clamped) *clamped = count;
  return gamma;
}

// ---------------------------------------------------------------------------
// Mesh-dependent GBMC

MeshedGbmcState make_meshed_gbmc_state(const SystemModel& model,
                                       const VectorProfile& u0,
                                       const RelaxationConfig& config,
                                       const Grid& grid, std::size_t n,
                                       std::uint64_t seed) {
  const std::size_t nc = model.components();
  check_speeds(config, nc);
  if (u0.size() != nc) throw InvalidArgument("initial data do not match the model's components");
  MeshedGbmcState s{{}, grid, model, config, {}, {}, CdfMode::blended, 0.0,
                    make_streams(seed, nc), WeightedStrategy::fixed_count, {}};
  for (std::size_t h = 0; h < nc; ++h) {
    s.u_left.push_back(u0[h].left_value());
    s.u_right.push_back(u0[h].right_value());
  }
  for (std::size_t h = 0; h < nc; ++h) {
    const double a = config.speed(h);
    BranchProbability p_plus = [&, h, a](double x, long atom) {
      StateVector u{};
      StateVector w{};
      for (std::size_t k = 0; k < nc; ++k) {
        if (atom >= 0) {
          u[k] = 0.5 * (u0[k].left_limit(x) + u0[k](x));
          w[k] = u0[k](x) - u0[k].left_limit(x);
        } else {
          u[k] = u0[k](x);
          w[k] = u0[k].smooth_derivative(x);
        }
      }
      const Jacobian jac = model.jacobian(u);
      double jw = 0.0;
      for (std::size_t k = 0; k < nc; ++k) jw += jac[h * kMaxComponents + k] * w[k];
      const double dp = std::abs(a * w[h] + jw);
      const double dm = std::abs(a * w[h] - jw);
      return dp + dm > 0.0 ? dp / (dp + dm) : 0.5;
    };
    ParticleEnsemble ens;
    if (derivative_measure(u0[h]).total_variation() > 0.0) {
      ens = sample_gbmc_initial(u0[h], n, a, p_plus, s.rngs[h]);
    } else {
      // A flat component starts with massless particles placed where another
      // component varies; relaxation assigns their masses.
      std::size_t donor = nc;
      for (std::size_t k = 0; k < nc && donor == nc; ++k)
        if (derivative_measure(u0[k]).total_variation() > 0.0) donor = k;
      if (donor == nc) throw ZeroVariation("every initial component is constant");
      ens = sample_gbmc_initial(u0[donor], n, a, p_plus, s.rngs[h]);
      for (double& mk : ens.m) mk = 0.0;
    }
    ens.family = h;
    s.families.push_back(std::move(ens));
  }
  return s;
}

void gbmc_meshed_step(MeshedGbmcState& s) {
  const std::size_t nc = s.model.components();
  const std::size_t m = s.grid.cells();
  for (auto& f : s.families) transport(f, s.config.dt);
  const auto tables = build_tables(s.families, s.u_left, s.u_right);

  std::vector<CellIndex> cells;
  std::vector<std::vector<double>> w(nc);
  for (std::size_t h = 0; h < nc; ++h) {
    cells.push_back(index_cells(s.families[h], s.grid));
    w[h] = family_cell_values(s.families[h], s.grid, cells[h]);
  }
  const double q = s.config.interaction_probability();
  std::size_t outside = 0;
  for (std::size_t h = 0; h < nc; ++h) {
    auto& ens = s.families[h];
    const double a = s.config.speed(h);
    const double n_dx = ens.normalization * s.grid.dx();
    const auto u = evaluate_at_family(tables, h, ens.x, s.mode);
    std::vector<double> dplus(ens.size(), 0.0);
    std::vector<double> dminus(ens.size(), 0.0);
    for (std::size_t i = 0; i < ens.size(); ++i) {
      const long j = cells[h].cell[i];
      if (j < 0) continue;
      StateVector ui{};
      for (std::size_t k = 0; k < nc; ++k) ui[k] = u[k][i];
      const Jacobian jac = s.model.jacobian(ui);
      double jw = 0.0;
      for (std::size_t k = 0; k < nc; ++k) {
        jw += jac[h * kMaxComponents + k] * w[k][static_cast<std::size_t>(j)];
      }
      const double wh = w[h][static_cast<std::size_t>(j)];
      dplus[i] = (a * wh + jw) / (2.0 * a);
      dminus[i] = (a * wh - jw) / (2.0 * a);
    }
    auto& rng = s.rngs[h];
    if (s.strategy == WeightedStrategy::fixed_count) {
      for (std::size_t i = 0; i < ens.size(); ++i) {
        const long j = cells[h].cell[i];
        if (j < 0) {
          ++outside;
          continue;
        }
        const double total = std::abs(dplus[i]) + std::abs(dminus[i]);
        if (total == 0.0) {
          ++s.diag.degenerate_cells;
          continue;
        }
        if (q < 1.0 && !(rng.uniform() < q)) continue;
        const bool plus = rng.uniform() * total < std::abs(dplus[i]);
        const double d = plus ? dplus[i] : dminus[i];
        const double mass =
            total * n_dx / static_cast<double>(cells[h].count[static_cast<std::size_t>(j)]);
        ens.v[i] = plus ? a : -a;
        ens.m[i] = (d >= 0.0 ? 1.0 : -1.0) * mass;
      }
    } else {
      // Kill / replicate on the cell means of D+-.
      std::vector<double> ep(m, 0.0), em(m, 0.0);
      for (std::size_t i = 0; i < ens.size(); ++i) {
        const long j = cells[h].cell[i];
        if (j < 0) {
          ++outside;
          continue;
        }
        const auto jj = static_cast<std::size_t>(j);
        const double c = static_cast<double>(cells[h].count[jj]);
        ep[jj] += dplus[i] / c;
        em[jj] += dminus[i] / c;
      }
      const WeightedRelaxation how{WeightedStrategy::fixed_mass, false, q};
      relax_family_weighted(ens, s.grid, cells[h], ep, em, how, rng, s.diag, nullptr);
    }
  }
  s.diag.outside = outside;
  s.t += s.config.dt;
  ++s.diag.steps;
}

std::vector<StateVector> conserved_fields(const MeshedGbmcState& s,
                                          const std::vector<double>& queries) {
  const auto tables = build_tables(s.families, s.u_left, s.u_right);
  const auto v = evaluate_all(tables, queries, s.mode);
  std::vector<StateVector> out(queries.size(), StateVector{});
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (std::size_t k = 0; k < v.size(); ++k) out[i][k] = v[k][i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Drivers

RunResult run_mc_systems(const SystemModel& model, const VectorProfile& u0,
                         const RelaxationConfig& config, const Grid& grid,
                         std::size_t n, double final_time, std::uint64_t seed,
                         bool low_variance, const RunOptions& options,
                         std::optional<Interval> sampling_domain,
                         WeightedStrategy strategy) {
  SystemMcState s = make_system_mc_state(model, u0, config, grid, n, seed, sampling_domain);
  s.low_variance = low_variance;
  s.strategy = strategy;
  return drive(
      s, final_time, options, low_variance ? "mc-systems-lowvar" : "mc-systems",
      model.component_names(), [](SystemMcState& st) { mc_systems_step(st); },
      [](const SystemMcState& st) { return system_histograms(st); }, nullptr);
}

RunResult run_gbmc_characteristic(const CharacteristicModel& model,
                                  const VectorProfile& u0,
                                  const RelaxationConfig& config, std::size_t n,
                                  double final_time, std::uint64_t seed,
                                  const Grid& output, const RunOptions& options) {
  CharGbmcState s = make_char_gbmc_state(model, u0, config, n, seed);
  const std::vector<double> centers = output.centers();
  return drive(
      s, final_time, options, "gbmc-char", model.physical_names(),
      [](CharGbmcState& st) { gbmc_characteristic_step(st); },
      [&](CharGbmcState& st) {
        std::size_t clamped = 0;
        FieldOnGrid f = pack(output, physical_fields(st, centers, &clamped),
                             st.model.components());
        st.diag.clamped += clamped;
        return f;
      },
      &output);
}

RunResult run_gbmc_meshed(const SystemModel& model, const VectorProfile& u0,
                          const RelaxationConfig& config, const Grid& grid,
                          std::size_t n, double final_time, std::uint64_t seed,
                          const Grid& output, const RunOptions& options) {
  MeshedGbmcState s = make_meshed_gbmc_state(model, u0, config, grid, n, seed);
  const std::vector<double> centers = output.centers();
  return drive(
      s, final_time, options, "gbmc-meshed", model.component_names(),
      [](MeshedGbmcState& st) { gbmc_meshed_step(st); },
      [&](const MeshedGbmcState& st) {
        return pack(output, conserved_fields(st, centers), st.model.components());
      },
      &output);
}

}  // namespace gbmc
