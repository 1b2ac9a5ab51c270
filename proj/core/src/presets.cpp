#include "gbmc/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gbmc/error.hpp"
#include "gbmc/gbmc_scalar.hpp"
#include "gbmc/reference.hpp"
#include "gbmc/systems.hpp"

namespace gbmc {

namespace {

struct MethodName {
  Method method;
  const char* name;
};

constexpr MethodName kMethods[] = {
    {Method::mc, "mc"},
    {Method::mc_lowvar, "mc-lowvar"},
    {Method::mc_weighted, "mc-weighted"},
    {Method::gbmc, "gbmc"},
    {Method::mc_systems, "mc-systems"},
    {Method::gbmc_char, "gbmc-char"},
    {Method::gbmc_meshed, "gbmc-meshed"},
    {Method::fv_reference, "fv-reference"},
};

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw InvalidArgument(field + ": " + what);
}

std::size_t natural_components(const RunConfig& cfg) {
  return is_system_model(cfg.model) ? 2 : 1;
}

StateVector to_conserved(const RunConfig& cfg, const StateVector& s) {
  if (cfg.model == "swe") return swe_conserved(s[0], s[1]);
  if (cfg.model == "awr") return awr_conserved(s[0], s[1], cfg.cv);
  return s;
}

// Conserved -> natural variables (identity for scalar laws and Euler).
StateVector to_natural(const RunConfig& cfg, const StateVector& q) {
  StateVector s = q;
  if (cfg.model == "swe") {
    s[1] = q[0] > kVacuum ? q[1] / q[0] : 0.0;
  } else if (cfg.model == "awr") {
    s[1] = q[0] > kVacuum ? q[1] / q[0] - cfg.cv * q[0] : 0.0;
  }
  return s;
}

// Natural states sampled over the configuration's intervals.
std::vector<StateVector> sampled_states(const RunConfig& cfg) {
  VectorProfile u0 = initial_profile(cfg);
  std::vector<StateVector> out;
  double lo = std::min({cfg.domain.lo, cfg.window.lo}) - 1.0;
  double hi = std::max({cfg.domain.hi, cfg.window.hi}) + 1.0;
  const int samples = 2000;
  for (int i = 0; i <= samples; ++i) out.push_back(evaluate(u0, lo + (hi - lo) * i / samples));
  for (double b : cfg.initial.breaks) {
    out.push_back(evaluate(u0, b));
    StateVector left{};
    for (std::size_t k = 0; k < u0.size(); ++k) left[k] = u0[k].left_limit(b);
    out.push_back(left);
  }
  return out;
}

}  // namespace

const char* to_string(Method m) {
  for (const auto& e : kMethods)
    if (e.method == m) return e.name;
  return "?";
}

Method method_from_string(const std::string& s) {
  for (const auto& e : kMethods)
    if (s == e.name) return e.method;
  bad("method", "unknown method '" + s + "'");
}

bool is_system_model(const std::string& model) {
  return model == "swe" || model == "awr" || model == "euler";
}

VectorProfile initial_profile(const RunConfig& cfg) {
  const InitialData& d = cfg.initial;
  const std::size_t n = natural_components(cfg);
  if (d.kind == "piecewise") {
    if (d.states.size() != d.breaks.size() + 1)
      bad("initial.states", "need one more state than breaks");
    return piecewise_constant_states(d.breaks, d.states, n);
  }
  if (n != 1) bad("initial.kind", "system models take piecewise data");
  if (d.kind == "gaussian") {
    if (!(d.sd > 0.0)) bad("initial.sd", "must be positive");
    return {ScalarProfile::gaussian(d.mean, d.sd, d.amplitude)};
  }
  if (d.kind == "sine") return {ScalarProfile::sine_window(d.lo, d.amplitude)};
  if (d.kind == "square") {
    if (!(d.hi > d.lo)) bad("initial.hi", "must exceed initial.lo");
    return {ScalarProfile::square_wave(d.lo, d.hi, d.height)};
  }
  bad("initial.kind", "unknown kind '" + d.kind + "'");
}

VectorProfile conserved_profile(const RunConfig& cfg) {
  VectorProfile u0 = initial_profile(cfg);
  if (cfg.model != "swe" && cfg.model != "awr") return u0;
  return map_states(u0, 2, [&](const StateVector& s) { return to_conserved(cfg, s); });
}

SystemModel system_model(const RunConfig& cfg) {
  if (cfg.model == "swe") return shallow_water(cfg.gravity);
  if (cfg.model == "awr") return aw_rascle(cfg.cv);
  if (cfg.model == "euler") return isentropic_euler();
  return system_from_scalar(scalar_model_by_name(cfg.model));
}

CharacteristicModel characteristic_model(const RunConfig& cfg) {
  if (cfg.model == "swe") return swe_characteristic(cfg.gravity);
  if (cfg.model == "awr") return awr_characteristic(cfg.cv);
  if (cfg.model == "euler")
    bad("model", "euler has no characteristic form here; use gbmc-meshed");
  return characteristic_from_scalar(scalar_model_by_name(cfg.model));
}

RelaxationConfig relaxation_config(const RunConfig& cfg) {
  RelaxationConfig rc;
  rc.epsilon = cfg.epsilon;
  rc.speeds = cfg.speeds;
  rc.dt = cfg.dt;
  return rc;
}

void validate(const RunConfig& cfg) {
  const bool system = is_system_model(cfg.model);
  if (!system) scalar_model_by_name(cfg.model);
  if (cfg.model == "swe" && !(cfg.gravity > 0.0)) bad("gravity", "must be positive");
  if (cfg.model == "awr" && !(cfg.cv > 0.0)) bad("cv", "must be positive");
  if (cfg.speeds.empty()) bad("speeds", "at least one speed is required");
  for (double a : cfg.speeds)
    if (!(a > 0.0)) bad("speeds", "must be positive");
  if (cfg.method != Method::fv_reference && cfg.particles == 0)
    bad("particles", "must be positive");
  if (!(cfg.domain.hi > cfg.domain.lo)) bad("domain", "hi must exceed lo");
  if (!(cfg.window.hi > cfg.window.lo)) bad("window", "hi must exceed lo");
  if (cfg.cells == 0) bad("cells", "must be positive");
  if (cfg.output_points == 0) bad("output_points", "must be positive");
  if (!(cfg.dt > 0.0)) bad("dt", "must be positive");
  if (cfg.epsilon && !(*cfg.epsilon > 0.0)) bad("epsilon", "must be positive or \"zero\"");
  if (!(cfg.final_time >= 0.0)) bad("final_time", "must be non-negative");
  if (cfg.sampling_domain && !(cfg.sampling_domain->hi > cfg.sampling_domain->lo))
    bad("sampling_domain", "hi must exceed lo");
  if (!(cfg.reference_cfl > 0.0 && cfg.reference_cfl <= 1.0))
    bad("reference_cfl", "must lie in (0, 1]");

  const bool scalar_method = cfg.method == Method::mc || cfg.method == Method::mc_lowvar ||
                             cfg.method == Method::mc_weighted || cfg.method == Method::gbmc;
  if (system && scalar_method)
    bad("method", std::string(to_string(cfg.method)) + " needs a scalar model");
  if (cfg.method == Method::gbmc_char && cfg.model == "euler")
    bad("method", "gbmc-char needs swe, awr or a scalar model");
  if (cfg.method != Method::fv_reference)
    make_schedule(cfg.final_time, cfg.dt, cfg.snapshot_times);

  initial_profile(cfg);
  std::vector<StateVector> states = sampled_states(cfg);
  if (!system) {
    FluxModel model = scalar_model_by_name(cfg.model);
    double lo = states.front()[0], hi = lo;
    for (const auto& s : states) {
      lo = std::min(lo, s[0]);
      hi = std::max(hi, s[0]);
    }
    try {
      validate_subcharacteristic(model, cfg.speeds.front(), {lo, hi}, 1000);
    } catch (const SubcharacteristicViolation& e) {
      throw SubcharacteristicViolation(std::string("speeds: ") + e.what());
    }
    return;
  }
  if (cfg.model == "swe" || cfg.model == "awr")
    for (const auto& s : states)
      if (s[0] < 0.0) bad("initial.states", "depth/density must be non-negative");
  if (cfg.method == Method::gbmc_char) {
    CharacteristicModel cm = characteristic_model(cfg);
    for (const auto& s : states) {
      StateVector lam = cm.char_speeds(cm.to_invariants(s));
      for (std::size_t h = 0; h < 2; ++h) {
        double a = h < cfg.speeds.size() ? cfg.speeds[h] : cfg.speeds.back();
        if (!(std::abs(lam[h]) < a))
          throw SubcharacteristicViolation("speeds: |lambda_" + std::to_string(h + 1) +
                                           "| = " + std::to_string(std::abs(lam[h])) +
                                           " is not below " + std::to_string(a));
      }
    }
    return;
  }
  SystemModel sm = system_model(cfg);
  double a_min = *std::min_element(cfg.speeds.begin(), cfg.speeds.end());
  for (const auto& s : states) {
    StateVector lam = sm.eigenvalues(to_conserved(cfg, s));
    for (std::size_t k = 0; k < sm.components(); ++k)
      if (!(std::abs(lam[k]) < a_min))
        throw SubcharacteristicViolation("speeds: |lambda| = " + std::to_string(std::abs(lam[k])) +
                                         " is not below " + std::to_string(a_min));
  }
}

RunResult execute(const RunConfig& cfg, unsigned workers) {
  (void)workers;
  validate(cfg);
  RelaxationConfig rc = relaxation_config(cfg);
  Grid grid(cfg.domain.lo, cfg.domain.hi, cfg.cells);
  Grid output(cfg.window.lo, cfg.window.hi, cfg.output_points);
  RunOptions opts;
  opts.snapshot_times = cfg.snapshot_times;
  opts.derivative_histogram = cfg.derivative_histogram;

  switch (cfg.method) {
    case Method::mc:
    case Method::mc_lowvar:
    case Method::mc_weighted: {
      McVariant v = McVariant::baseline;
      if (cfg.method == Method::mc_lowvar) v = McVariant::low_variance;
      if (cfg.method == Method::mc_weighted)
        v = cfg.strategy == WeightedStrategy::fixed_count ? McVariant::weighted_fixed_count
                                                          : McVariant::weighted_fixed_mass;
      return run_mc(scalar_model_by_name(cfg.model), initial_profile(cfg)[0], rc, grid,
                    cfg.particles, cfg.final_time, v, cfg.seed, opts, cfg.sampling_domain);
    }
    case Method::gbmc:
      return run_gbmc(scalar_model_by_name(cfg.model), initial_profile(cfg)[0], rc,
                      cfg.particles, cfg.final_time, cfg.seed, output, opts,
                      cfg.reconstruction);
    case Method::mc_systems:
      return run_mc_systems(system_model(cfg), conserved_profile(cfg), rc, grid,
                            cfg.particles, cfg.final_time, cfg.seed, cfg.low_variance,
                            opts, cfg.sampling_domain, cfg.strategy);
    case Method::gbmc_char:
      return run_gbmc_characteristic(characteristic_model(cfg), initial_profile(cfg), rc,
                                     cfg.particles, cfg.final_time, cfg.seed, output, opts);
    case Method::gbmc_meshed:
      return run_gbmc_meshed(system_model(cfg), conserved_profile(cfg), rc, grid,
                             cfg.particles, cfg.final_time, cfg.seed, output, opts);
    case Method::fv_reference: {
      RunResult r;
      r.method = "fv-reference";
      SystemModel sm = system_model(cfg);
      r.component_names = sm.component_names();
      FvSolution fv = is_system_model(cfg.model)
                          ? relaxation_fv_system(sm, conserved_profile(cfg), grid,
                                                 cfg.final_time, cfg.speeds, cfg.reference_cfl)
                          : godunov_scalar(scalar_model_by_name(cfg.model),
                                           initial_profile(cfg)[0], grid, cfg.final_time,
                                           cfg.reference_cfl);
      r.diagnostics.steps = fv.steps;
      r.snapshots.push_back({fv.t, fv.field, std::nullopt});
      for (std::size_t k = 0; k < fv.field.components(); ++k) {
        r.initial_mass.push_back(0.0);
        r.final_mass.push_back(fv.field.integral(k));
      }
      return r;
    }
  }
  bad("method", "unsupported");
}

std::optional<FieldOnGrid> reference_solution(const RunConfig& cfg) {
  if (cfg.reference_cells == 0) return std::nullopt;
  validate(cfg);
  Grid ref_grid(cfg.window.lo, cfg.window.hi, cfg.reference_cells);
  const bool physical = cfg.method == Method::gbmc_char;

  if (!is_system_model(cfg.model)) {
    FvSolution fv = godunov_scalar(scalar_model_by_name(cfg.model), initial_profile(cfg)[0],
                                   ref_grid, cfg.final_time, cfg.reference_cfl);
    return fv.field;
  }

  FieldOnGrid out(ref_grid, 2);
  const auto& d = cfg.initial;
  if (cfg.model == "swe" && d.kind == "piecewise" && d.breaks.size() == 1 &&
      cfg.final_time > 0.0) {
    std::vector<double> xi;
    for (double x : ref_grid.centers()) xi.push_back((x - d.breaks[0]) / cfg.final_time);
    auto states = swe_exact_riemann({d.states[0][0], d.states[0][1]},
                                    {d.states[1][0], d.states[1][1]}, cfg.gravity, xi);
    for (std::size_t j = 0; j < states.size(); ++j) {
      StateVector s{states[j].h, states[j].u, 0.0, 0.0};
      if (!physical) s = to_conserved(cfg, s);
      out[0][j] = s[0];
      out[1][j] = s[1];
    }
    return out;
  }
  FvSolution fv = relaxation_fv_system(system_model(cfg), conserved_profile(cfg), ref_grid,
                                       cfg.final_time, cfg.speeds, cfg.reference_cfl);
  for (std::size_t j = 0; j < ref_grid.cells(); ++j) {
    StateVector q{fv.field[0][j], fv.field[1][j], 0.0, 0.0};
    StateVector s = physical ? to_natural(cfg, q) : q;
    out[0][j] = s[0];
    out[1][j] = s[1];
  }
  return out;
}

namespace {

RunConfig scalar_base(const std::string& model, double a, double dt, double t) {
  RunConfig c;
  c.model = model;
  c.speeds = {a};
  c.dt = dt;
  c.final_time = t;
  c.reference_cells = 10000;
  c.derivative_histogram = true;
  return c;
}

RunConfig riemann_system(const std::string& model, double x0, StateVector left,
                         StateVector right, Interval domain) {
  RunConfig c;
  c.model = model;
  c.initial.kind = "piecewise";
  c.initial.breaks = {x0};
  c.initial.states = {left, right};
  c.domain = domain;
  c.window = domain;
  c.reference_cells = 10000;
  c.reference_cfl = 0.9;
  return c;
}

// Widens the MC particle domain by max(a) T on each side (whole cells, same
// dx) so outflow through the grid ends never reaches the window.
void pad_for_outflow(RunConfig& c) {
  const double dx = (c.domain.hi - c.domain.lo) / static_cast<double>(c.cells);
  const double reach = *std::max_element(c.speeds.begin(), c.speeds.end()) * c.final_time;
  const auto pad = static_cast<std::size_t>(std::ceil(reach / dx - 1e-9));
  c.domain = {c.domain.lo - static_cast<double>(pad) * dx,
              c.domain.hi + static_cast<double>(pad) * dx};
  c.cells += 2 * pad;
  c.sampling_domain = c.domain;
}

RunConfig make_preset(const std::string& name) {
  constexpr double pi = std::numbers::pi;
  RunConfig c;
  if (name == "test1a" || name == "test1a-mc") {
    c = scalar_base("burgers", 0.4, 0.1, 10.0);
    c.domain = c.window = {-5.0, 5.0};
    c.description = "Burgers, Gaussian density, T=10";
    if (name == "test1a") {
      c.method = Method::gbmc;
      c.particles = 1000;
    } else {
      c.method = Method::mc;
      c.particles = 10000;
      c.cells = 100;
    }
  } else if (name == "test1b" || name == "test1b-mc") {
    c = scalar_base("burgers", 0.6, 0.01, 10.0);
    c.initial.kind = "square";
    c.initial.lo = -2.0;
    c.initial.hi = 2.0;
    c.initial.height = 0.4;
    c.domain = c.window = {-4.0, 6.0};
    c.description = "Burgers, square wave 0.4 on [-2,2], T=10";
    if (name == "test1b") {
      c.method = Method::gbmc;
      c.particles = 1000;
    } else {
      c.method = Method::mc;
      c.particles = 10000;
      c.cells = 100;
    }
  } else if (name == "test1c" || name == "test1c-mc") {
    c = scalar_base("burgers", 1.5, 0.01, 3.0);
    c.initial.kind = "sine";
    c.initial.lo = 0.0;
    c.initial.amplitude = 1.0;
    c.domain = c.window = {-pi / 2.0, 5.0 * pi / 2.0};
    c.description = "Burgers, sin(x) on [0, 2pi], T=3";
    if (name == "test1c") {
      c.method = Method::gbmc;
      c.particles = 1000;
    } else {
      c.method = Method::mc_weighted;
      c.particles = 10000;
      c.cells = 100;
    }
  } else if (name == "test2" || name == "test2-mc") {
    c = scalar_base("lwr", 1.2, 0.01, 0.5);
    c.initial.kind = "piecewise";
    c.initial.breaks = {-1.0, 0.0, 1.0};
    c.initial.states = {{0.0}, {0.4}, {0.8}, {0.0}};
    c.domain = c.window = {-2.0, 2.0};
    c.description = "LWR Riemann data 0.4 | 0.8, T=0.5";
    if (name == "test2") {
      c.method = Method::gbmc;
      c.particles = 1000;
    } else {
      c.method = Method::mc;
      c.particles = 10000;
      c.cells = 100;
    }
  } else if (name == "test3a" || name == "test3a-mc") {
    c = riemann_system("swe", 0.0, {1.0, 0.0}, {2.0, 0.0}, {-0.5, 0.5});
    c.speeds = {4.45, 5.10};
    c.epsilon = 1e-8;
    c.final_time = 0.075;
    c.description = "Shallow water, h 1 | 2 at rest, T=0.075";
    if (name == "test3a") {
      c.method = Method::gbmc_char;
      c.particles = 2000;
      c.dt = 1e-4;
    } else {
      c.method = Method::mc_systems;
      c.particles = 100000;
      c.cells = 100;
      c.dt = 1e-3;
      c.low_variance = true;
    }
  } else if (name == "test3b" || name == "test3b-mc") {
    c = riemann_system("swe", 0.0, {1.0, -5.0}, {1.0, 5.0}, {-1.0, 1.0});
    c.speeds = {8.2, 8.2};
    c.epsilon = 1e-8;
    c.final_time = 0.1;
    c.description = "Shallow water, u -5 | 5 (near-dry bed), T=0.1";
    if (name == "test3b") {
      c.method = Method::gbmc_char;
      c.particles = 2000;
      c.dt = 5e-5;
    } else {
      c.method = Method::mc_systems;
      c.particles = 100000;
      c.cells = 100;
      c.dt = 1e-3;
      c.low_variance = true;
    }
  } else if (name == "test4" || name == "test4-mc") {
    c = riemann_system("awr", 0.0, {0.05, 0.05}, {0.05, 0.5}, {-1.5, 1.5});
    c.cv = 6.0;
    c.speeds = {0.8, 0.8};
    c.epsilon = 1e-8;
    c.final_time = 1.0;
    c.description = "Aw-Rascle, c_v=6, u 0.05 | 0.5 (vacuum), T=1";
    if (name == "test4") {
      c.method = Method::gbmc_char;
      c.particles = 2000;
      c.dt = 5e-4;
    } else {
      c.method = Method::mc_systems;
      c.particles = 100000;
      c.cells = 100;
      c.dt = 5e-3;
      c.low_variance = true;
    }
  } else if (name == "test5a" || name == "test5a-gbmc") {
    c = riemann_system("euler", 0.2, {2.0, 1.0}, {1.0, 0.13962}, {-1.0, 1.0});
    c.speeds = {1.0, 1.0};
    c.epsilon = 1e-8;
    c.final_time = 0.5;
    c.dt = 5e-3;
    c.cells = 200;
    c.description = "Isentropic Euler, (rho, m) (2, 1) | (1, 0.13962) at x=0.2, T=0.5";
    if (name == "test5a") {
      c.method = Method::mc_systems;
      c.particles = 200000;
    } else {
      c.method = Method::gbmc_meshed;
      c.particles = 2000;
    }
  } else if (name == "test5b" || name == "test5b-gbmc") {
    c = riemann_system("euler", 0.0, {1.0, 0.0}, {0.2, 0.0}, {-1.0, 1.0});
    c.speeds = {1.0, 1.0};
    c.epsilon = 1e-8;
    c.final_time = 0.5;
    c.dt = 5e-3;
    c.cells = 200;
    c.description = "Isentropic Euler, rho 1 | 0.2 at rest, T=0.5";
    if (name == "test5b") {
      c.method = Method::mc_systems;
      c.particles = 200000;
    } else {
      c.method = Method::gbmc_meshed;
      c.particles = 5000;
    }
  } else {
    bad("preset", "unknown preset '" + name + "'");
  }
  c.name = name;
  const bool mc = c.method == Method::mc || c.method == Method::mc_lowvar ||
                  c.method == Method::mc_weighted || c.method == Method::mc_systems;
  if (mc) pad_for_outflow(c);
  if (c.method == Method::mc_systems) c.strategy = WeightedStrategy::fixed_mass;
  return c;
}

constexpr const char* kRunPresets[] = {
    "test1a", "test1a-mc", "test1b", "test1b-mc", "test1c", "test1c-mc",
    "test2",  "test2-mc",  "test3a", "test3a-mc", "test3b", "test3b-mc",
    "test4",  "test4-mc",  "test5a", "test5a-gbmc", "test5b", "test5b-gbmc",
};

}  // namespace

std::vector<PresetInfo> run_presets() {
  std::vector<PresetInfo> out;
  for (const char* n : kRunPresets) {
    RunConfig c = make_preset(n);
    out.push_back({n, std::string(to_string(c.method)) + ": " + c.description});
  }
  return out;
}

RunConfig run_preset(const std::string& name) { return make_preset(name); }

std::vector<PresetInfo> study_presets() {
  return {
      {"converge-gaussian",
       "Burgers, Gaussian, T=2.5, dt=0.005, N=1e2..1e5, R=5: MC, MC_opt, GBMC"},
      {"converge-sine", "Burgers, sin(x) on [0, 2pi], T=0.5, dt=0.005, N=1e2..1e4, R=5"},
  };
}

StudyPreset study_preset(const std::string& name) {
  constexpr double pi = std::numbers::pi;
  StudyPreset p;
  p.name = name;
  StudySpec& s = p.spec;
  s.model = burgers();
  s.dt = 0.005;
  s.runs = 5;
  s.seed = 1;
  if (name == "converge-gaussian") {
    p.description = study_presets()[0].description;
    s.u0 = ScalarProfile::gaussian();
    s.speed = 0.4;
    s.final_time = 2.5;
    s.ns = {100, 1000, 10000, 100000};
    s.mc_variant = McVariant::baseline;
    s.mc_grid = Grid(-5.0, 5.0, 50);
    s.output = Grid(-5.0, 5.0, 1000);
    p.reference_domain = {-5.0, 5.0};
  } else if (name == "converge-sine") {
    p.description = study_presets()[1].description;
    s.u0 = ScalarProfile::sine_window(0.0, 1.0);
    s.speed = 1.5;
    s.final_time = 0.5;
    s.ns = {100, 1000, 10000};
    s.mc_variant = McVariant::weighted_fixed_count;
    s.mc_grid = Grid(0.0, 2.0 * pi, 50);
    s.output = Grid(0.0, 2.0 * pi, 1000);
    p.reference_domain = {0.0, 2.0 * pi};
  } else {
    bad("preset", "unknown study preset '" + name + "'");
  }
  return p;
}

FvSolution study_reference(const StudyPreset& preset) {
  Grid g(preset.reference_domain.lo, preset.reference_domain.hi, preset.reference_cells);
  return godunov_scalar(preset.spec.model, preset.spec.u0, g, preset.spec.final_time, 0.9);
}

}  // namespace gbmc
