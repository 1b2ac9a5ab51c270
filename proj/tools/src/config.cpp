#include "gbmc_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "gbmc/error.hpp"

namespace gbmc::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw InvalidArgument(path + ": " + msg);
}

// Typed access to one JSON object; finish() rejects keys nobody read.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <class T, class Conv>
  void read(const std::string& key, T& out, Conv conv) {
    if (const json* v = find(key)) out = conv(*v, at(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(at(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

// Integers may be written as 1e5; anything non-integral is rejected.
std::uint64_t count(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) fail(path, "must be non-negative");
  double d = number(v, path);
  if (!(d >= 0.0) || d != std::floor(d) || d > 9.007199254740992e15)
    fail(path, "expected a non-negative integer");
  return static_cast<std::uint64_t>(d);
}

std::size_t size(const json& v, const std::string& path) {
  return static_cast<std::size_t>(count(v, path));
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  return v.get<bool>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) fail(path, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Interval interval(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [lo, hi]");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

std::optional<Interval> maybe_interval(const json& v, const std::string& path) {
  if (v.is_null()) return std::nullopt;
  return interval(v, path);
}

StateVector state(const json& v, const std::string& path) {
  std::vector<double> xs = numbers(v, path);
  if (xs.empty() || xs.size() > kMaxComponents)
    fail(path, "expected 1 to " + std::to_string(kMaxComponents) + " components");
  StateVector s{};
  for (std::size_t k = 0; k < xs.size(); ++k) s[k] = xs[k];
  return s;
}

std::optional<double> epsilon(const json& v, const std::string& path) {
  if (v.is_null() || (v.is_string() && v.get<std::string>() == "zero")) return std::nullopt;
  if (v.is_string()) fail(path, "expected a positive number or \"zero\"");
  return number(v, path);
}

WeightedStrategy strategy(const json& v, const std::string& path) {
  std::string s = text(v, path);
  if (s == "fixed-count") return WeightedStrategy::fixed_count;
  if (s == "fixed-mass") return WeightedStrategy::fixed_mass;
  fail(path, "expected \"fixed-count\" or \"fixed-mass\"");
}

CdfMode cdf_mode(const json& v, const std::string& path) {
  std::string s = text(v, path);
  if (s == "left") return CdfMode::left;
  if (s == "right") return CdfMode::right;
  if (s == "blended") return CdfMode::blended;
  fail(path, "expected \"left\", \"right\" or \"blended\"");
}

McVariant mc_variant(const json& v, const std::string& path) {
  std::string s = text(v, path);
  for (McVariant m : {McVariant::baseline, McVariant::low_variance,
                      McVariant::weighted_fixed_count, McVariant::weighted_fixed_mass})
    if (s == gbmc::to_string(m)) return m;
  fail(path, "expected baseline, lowvar, weighted-count or weighted-mass");
}

void read_initial(const json& v, const std::string& path, InitialData& d) {
  Section s(v, path);
  s.read("kind", d.kind, text);
  s.read("mean", d.mean, number);
  s.read("sd", d.sd, number);
  s.read("amplitude", d.amplitude, number);
  s.read("lo", d.lo, number);
  s.read("hi", d.hi, number);
  s.read("height", d.height, number);
  s.read("breaks", d.breaks, numbers);
  if (const json* st = s.find("states")) {
    if (!st->is_array()) fail(s.at("states"), "expected an array of states");
    d.states.clear();
    for (std::size_t i = 0; i < st->size(); ++i)
      d.states.push_back(state((*st)[i], s.at("states") + "[" + std::to_string(i) + "]"));
  }
  s.finish();
}

json initial_json(const InitialData& d, std::size_t components) {
  json j{{"kind", d.kind}};
  if (d.kind == "gaussian") {
    j["mean"] = d.mean;
    j["sd"] = d.sd;
    j["amplitude"] = d.amplitude;
  } else if (d.kind == "sine") {
    j["lo"] = d.lo;
    j["amplitude"] = d.amplitude;
  } else if (d.kind == "square") {
    j["lo"] = d.lo;
    j["hi"] = d.hi;
    j["height"] = d.height;
  } else {
    j["breaks"] = d.breaks;
    json states = json::array();
    for (const auto& st : d.states)
      states.push_back(std::vector<double>(st.begin(), st.begin() + static_cast<long>(components)));
    j["states"] = states;
  }
  return j;
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

std::size_t natural_components(const std::string& model) {
  return is_system_model(model) ? 2 : 1;
}

// Resolves a model name to the components of a scalar study.
FluxModel scalar_model(const std::string& name, const std::string& path) {
  try {
    return scalar_model_by_name(name);
  } catch (const InvalidArgument& e) {
    fail(path, e.what());
  }
}

}  // namespace

const char* to_string(WeightedStrategy s) {
  return s == WeightedStrategy::fixed_count ? "fixed-count" : "fixed-mass";
}

const char* to_string(CdfMode m) {
  switch (m) {
    case CdfMode::left:
      return "left";
    case CdfMode::right:
      return "right";
    case CdfMode::blended:
      return "blended";
  }
  return "?";
}

RunConfig run_config_from_json(const json& j) {
  Section s(j, "");
  RunConfig c;
  if (const json* p = s.find("preset")) {
    std::string name = text(*p, "preset");
    try {
      c = run_preset(name);
    } catch (const InvalidArgument&) {
      fail("preset", "unknown preset '" + name + "'");
    }
  }
  s.read("name", c.name, text);
  s.read("description", c.description, text);
  if (const json* m = s.find("method")) {
    try {
      c.method = method_from_string(text(*m, "method"));
    } catch (const InvalidArgument& e) {
      fail("method", e.what());
    }
  }
  s.read("model", c.model, text);
  s.read("gravity", c.gravity, number);
  s.read("cv", c.cv, number);
  s.read("speeds", c.speeds, numbers);
  if (const json* init = s.find("initial")) {
    // An explicit kind starts from fresh defaults, not the preset's data.
    if (init->is_object() && init->contains("kind")) c.initial = InitialData{};
    read_initial(*init, "initial", c.initial);
  }
  s.read("particles", c.particles, size);
  s.read("domain", c.domain, interval);
  s.read("cells", c.cells, size);
  s.read("sampling_domain", c.sampling_domain, maybe_interval);
  s.read("window", c.window, interval);
  s.read("output_points", c.output_points, size);
  s.read("dt", c.dt, number);
  s.read("epsilon", c.epsilon, epsilon);
  s.read("final_time", c.final_time, number);
  s.read("seed", c.seed, count);
  s.read("snapshot_times", c.snapshot_times, numbers);
  s.read("strategy", c.strategy, strategy);
  s.read("low_variance", c.low_variance, boolean);
  s.read("reconstruction", c.reconstruction, cdf_mode);
  s.read("derivative_histogram", c.derivative_histogram, boolean);
  s.read("reference_cells", c.reference_cells, size);
  s.read("reference_cfl", c.reference_cfl, number);
  s.finish();
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["name"] = c.name;
  j["description"] = c.description;
  j["method"] = gbmc::to_string(c.method);
  j["model"] = c.model;
  j["gravity"] = c.gravity;
  j["cv"] = c.cv;
  j["speeds"] = c.speeds;
  j["initial"] = initial_json(c.initial, natural_components(c.model));
  j["particles"] = c.particles;
  j["domain"] = interval_json(c.domain);
  j["cells"] = c.cells;
  j["sampling_domain"] = c.sampling_domain ? interval_json(*c.sampling_domain) : json(nullptr);
  j["window"] = interval_json(c.window);
  j["output_points"] = c.output_points;
  j["dt"] = c.dt;
  j["epsilon"] = c.epsilon ? json(*c.epsilon) : json("zero");
  j["final_time"] = c.final_time;
  j["seed"] = c.seed;
  j["snapshot_times"] = c.snapshot_times;
  j["strategy"] = to_string(c.strategy);
  j["low_variance"] = c.low_variance;
  j["reconstruction"] = to_string(c.reconstruction);
  j["derivative_histogram"] = c.derivative_histogram;
  j["reference_cells"] = c.reference_cells;
  j["reference_cfl"] = c.reference_cfl;
  return j;
}

namespace {

InitialData study_initial(const std::string& preset) {
  InitialData d;
  if (preset == "converge-sine") {
    d.kind = "sine";
    d.lo = 0.0;
    d.amplitude = 1.0;
  }
  return d;
}

}  // namespace

StudyConfig study_from_json(const json& j) {
  Section s(j, "");
  StudyConfig c;
  std::string preset = "converge-gaussian";
  s.read("preset", preset, text);
  try {
    c.study = study_preset(preset);
  } catch (const InvalidArgument&) {
    fail("preset", "unknown study preset '" + preset + "'");
  }
  c.initial = study_initial(preset);
  StudySpec& sp = c.study.spec;

  bool rebuild = false;
  if (const json* m = s.find("model")) {
    c.model = text(*m, "model");
    sp.model = scalar_model(c.model, "model");
  }
  if (const json* init = s.find("initial")) {
    if (init->is_object() && init->contains("kind")) c.initial = InitialData{};
    read_initial(*init, "initial", c.initial);
    rebuild = true;
  }
  if (rebuild) {
    RunConfig rc;
    rc.model = c.model;
    rc.initial = c.initial;
    sp.u0 = initial_profile(rc).at(0);
  }
  if (const json* ns = s.find("ns")) {
    if (!ns->is_array()) fail("ns", "expected an array of particle counts");
    sp.ns.clear();
    for (std::size_t i = 0; i < ns->size(); ++i)
      sp.ns.push_back(size((*ns)[i], "ns[" + std::to_string(i) + "]"));
  }
  if (sp.ns.empty()) fail("ns", "at least one particle count is required");
  s.read("speed", sp.speed, number);
  s.read("dt", sp.dt, number);
  s.read("final_time", sp.final_time, number);
  s.read("runs", sp.runs, size);
  s.read("repetitions", sp.repetitions, size);
  s.read("seed", sp.seed, count);
  s.read("mc_variant", sp.mc_variant, mc_variant);
  s.read("sampling_domain", sp.sampling_domain, maybe_interval);
  s.read("p", sp.p, number);
  s.read("with_mc", sp.with_mc, boolean);
  s.read("with_mc_opt", sp.with_mc_opt, boolean);
  s.read("with_gbmc", sp.with_gbmc, boolean);
  s.read("pilot_n", sp.pilot_n, size);
  if (const json* dx = s.find("pilot_dx")) {
    std::vector<double> v = numbers(*dx, "pilot_dx");
    if (v.size() != 2) fail("pilot_dx", "expected [dx1, dx2]");
    sp.pilot_dx1 = v[0];
    sp.pilot_dx2 = v[1];
  }
  if (const json* c1 = s.find("c1")) {
    if (c1->is_null())
      sp.c1.reset();
    else
      sp.c1 = number(*c1, "c1");
  }
  unsigned workers = sp.workers;
  s.read("workers", workers, [](const json& v, const std::string& p) {
    return static_cast<unsigned>(count(v, p));
  });
  sp.workers = workers;

  Interval mc_domain{sp.mc_grid.x_min(), sp.mc_grid.x_max()};
  std::size_t mc_cells = sp.mc_grid.cells();
  s.read("mc_domain", mc_domain, interval);
  s.read("mc_cells", mc_cells, size);
  Interval window{sp.output.x_min(), sp.output.x_max()};
  std::size_t points = sp.output.cells();
  s.read("window", window, interval);
  s.read("output_points", points, size);
  s.read("reference_domain", c.study.reference_domain, interval);
  s.read("reference_cells", c.study.reference_cells, size);
  s.finish();

  auto grid = [](Interval i, std::size_t n, const std::string& a, const std::string& b) {
    if (!(i.hi > i.lo)) fail(a, "hi must exceed lo");
    if (n == 0) fail(b, "must be positive");
    return Grid(i.lo, i.hi, n);
  };
  sp.mc_grid = grid(mc_domain, mc_cells, "mc_domain", "mc_cells");
  sp.output = grid(window, points, "window", "output_points");
  grid(c.study.reference_domain, c.study.reference_cells, "reference_domain",
       "reference_cells");
  if (!(sp.speed > 0.0)) fail("speed", "must be positive");
  if (!(sp.dt > 0.0)) fail("dt", "must be positive");
  if (!(sp.final_time > 0.0)) fail("final_time", "must be positive");
  if (sp.runs < 2) fail("runs", "must be at least 2");
  if (sp.repetitions < 1) fail("repetitions", "must be at least 1");
  if (!(sp.p >= 1.0)) fail("p", "must be at least 1");
  for (std::size_t i = 0; i < sp.ns.size(); ++i)
    if (sp.ns[i] == 0) fail("ns[" + std::to_string(i) + "]", "must be positive");
  if (sp.c1 && !(*sp.c1 > 0.0)) fail("c1", "must be positive");
  return c;
}

json to_json(const StudyConfig& c) {
  const StudySpec& sp = c.study.spec;
  json j;
  j["preset"] = c.study.name;
  j["model"] = c.model;
  j["initial"] = initial_json(c.initial, 1);
  j["ns"] = sp.ns;
  j["speed"] = sp.speed;
  j["dt"] = sp.dt;
  j["final_time"] = sp.final_time;
  j["runs"] = sp.runs;
  j["repetitions"] = sp.repetitions;
  j["seed"] = sp.seed;
  j["mc_variant"] = gbmc::to_string(sp.mc_variant);
  j["sampling_domain"] = sp.sampling_domain ? interval_json(*sp.sampling_domain) : json(nullptr);
  j["p"] = sp.p;
  j["with_mc"] = sp.with_mc;
  j["with_mc_opt"] = sp.with_mc_opt;
  j["with_gbmc"] = sp.with_gbmc;
  j["pilot_n"] = sp.pilot_n;
  if (sp.pilot_dx1 && sp.pilot_dx2) j["pilot_dx"] = {*sp.pilot_dx1, *sp.pilot_dx2};
  j["c1"] = sp.c1 ? json(*sp.c1) : json(nullptr);
  j["workers"] = sp.workers;
  j["mc_domain"] = json::array({sp.mc_grid.x_min(), sp.mc_grid.x_max()});
  j["mc_cells"] = sp.mc_grid.cells();
  j["window"] = json::array({sp.output.x_min(), sp.output.x_max()});
  j["output_points"] = sp.output.cells();
  j["reference_domain"] = interval_json(c.study.reference_domain);
  j["reference_cells"] = c.study.reference_cells;
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(path + ": cannot open");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

}  // namespace gbmc::cli
