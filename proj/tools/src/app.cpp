#include "gbmc_cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "gbmc/csv.hpp"
#include "gbmc/error.hpp"
#include "gbmc/presets.hpp"
#include "gbmc/reference.hpp"
#include "gbmc_cli/config.hpp"

#ifndef GBMC_VERSION
#define GBMC_VERSION "unknown"
#endif

namespace gbmc::cli {

namespace fs = std::filesystem;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

unsigned env_workers() {
  std::string v = env_or("GBMC_WORKERS", "");
  if (v.empty()) return 1;
  char* end = nullptr;
  unsigned long w = std::strtoul(v.c_str(), &end, 10);
  if (*end != '\0' || w == 0) throw ConfigError("GBMC_WORKERS: expected a positive integer");
  return static_cast<unsigned>(w);
}

fs::path output_dir(const std::string& flag, const std::string& name) {
  if (!flag.empty()) return flag;
  return fs::path(env_or("GBMC_OUTPUT_DIR", "gbmc-out")) / name;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error(path.string() + ": cannot write");
  body(os);
  if (!os) throw std::runtime_error(path.string() + ": write failed");
}

void write_table(const fs::path& path, const CsvTable& t) {
  write_file(path, [&](std::ostream& os) { write_csv(os, t); });
}

void write_json(const fs::path& path, const json& j) {
  write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

CsvTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  try {
    return read_csv(in);
  } catch (const InvalidArgument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

CsvTable particles_table(const RunResult& r) {
  CsvTable t;
  t.columns = {"family", "x", "v", "m"};
  for (const auto& e : r.ensembles)
    for (std::size_t k = 0; k < e.size(); ++k)
      t.rows.push_back({static_cast<double>(e.family), e.x[k], e.v[k], e.m[k]});
  return t;
}

void add_metadata(CsvTable& t, const std::vector<std::pair<std::string, std::string>>& meta) {
  t.metadata.insert(t.metadata.begin(), meta.begin(), meta.end());
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> particles;
  std::optional<unsigned> workers;
  bool no_particles = false;
  bool no_reference = false;
};

RunConfig load_run(const RunArgs& a) {
  if (a.config.empty() == a.preset.empty())
    throw ConfigError("run: give exactly one of CONFIG or --preset");
  json j = a.config.empty() ? json{{"preset", a.preset}} : load_json_file(a.config);
  RunConfig c = run_config_from_json(j);
  if (a.seed) c.seed = *a.seed;
  if (a.particles) c.particles = *a.particles;
  if (a.no_reference) c.reference_cells = 0;
  validate(c);
  return c;
}

int do_run(const RunArgs& a, std::ostream& out) {
  RunConfig c;
  unsigned workers = 1;
  try {
    c = load_run(a);
    workers = a.workers ? *a.workers : env_workers();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  const fs::path dir = output_dir(a.out, c.name);
  fs::create_directories(dir);
  const json config = to_json(c);
  const std::vector<std::pair<std::string, std::string>> meta = {
      {"name", c.name},
      {"method", to_string(c.method)},
      {"seed", std::to_string(c.seed)},
      {"version", GBMC_VERSION},
      {"config", config.dump()}};

  const auto t0 = std::chrono::steady_clock::now();
  RunResult r = execute(c, workers);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  CsvTable solution = snapshot_table(r);
  add_metadata(solution, meta);
  write_table(dir / "solution.csv", solution);
  CsvTable diag = diagnostics_table(r);
  add_metadata(diag, meta);
  write_table(dir / "diagnostics.csv", diag);
  if (!a.no_particles) {
    CsvTable parts = particles_table(r);
    add_metadata(parts, meta);
    write_table(dir / "particles.csv", parts);
  }

  std::optional<CsvTable> reference;
  if (std::optional<FieldOnGrid> ref = reference_solution(c)) {
    reference = field_table(*ref, r.component_names);
    add_metadata(*reference, meta);
    reference->metadata.emplace_back("t", format_number(c.final_time));
    write_table(dir / "reference.csv", *reference);
  }

  json files = {"solution.csv", "diagnostics.csv"};
  if (!a.no_particles) files.push_back("particles.csv");
  if (reference) files.push_back("reference.csv");
  write_json(dir / "metadata.json", json{{"version", GBMC_VERSION},
                                         {"command", "run"},
                                         {"files", files},
                                         {"config", config}});

  out << c.name << " (" << to_string(c.method) << "): " << r.diagnostics.steps << " steps, "
      << fixed(seconds, 3) << " s, output " << dir.string() << '\n';
  for (std::size_t h = 0; h < r.initial_mass.size(); ++h)
    out << "  family " << h << " mass " << fixed(r.initial_mass[h], 10) << " -> "
        << fixed(r.final_mass[h], 10) << '\n';
  if (reference) {
    for (const auto& name : r.component_names) {
      CompareSummary s = compare_tables(solution, *reference, name, 1.0);
      out << "  " << name << ": relative L1 error " << fixed(s.relative_error, 4) << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ConvergeArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::vector<std::size_t> ns;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> repetitions;
  std::optional<std::uint64_t> seed;
  std::optional<double> c1;
  std::optional<unsigned> workers;
  bool timings = false;
};

int do_converge(const ConvergeArgs& a, std::ostream& out) {
  StudyConfig c;
  try {
    if (a.config.empty() == a.preset.empty())
      throw ConfigError("converge: give exactly one of CONFIG or --preset");
    json j = a.config.empty() ? json{{"preset", a.preset}} : load_json_file(a.config);
    if (!a.ns.empty()) j["ns"] = a.ns;
    if (a.runs) j["runs"] = *a.runs;
    if (a.repetitions) j["repetitions"] = *a.repetitions;
    if (a.seed) j["seed"] = *a.seed;
    if (a.c1) j["c1"] = *a.c1;
    if (a.workers)
      j["workers"] = *a.workers;
    else if (!j.contains("workers"))
      j["workers"] = env_workers();
    c = study_from_json(j);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  const fs::path dir = output_dir(a.out, c.study.name);
  fs::create_directories(dir);
  const json config = to_json(c);
  const std::vector<std::pair<std::string, std::string>> meta = {
      {"name", c.study.name}, {"version", GBMC_VERSION}, {"config", config.dump()}};

  FvSolution ref = study_reference(c.study);
  CsvTable ref_table = field_table(ref.field, {"u"});
  add_metadata(ref_table, meta);
  write_table(dir / "reference.csv", ref_table);

  ErrorReport report = convergence_study(c.study.spec, ref);
  CsvTable errors = error_report_table(report, a.timings);
  add_metadata(errors, meta);
  write_table(dir / "errors.csv", errors);
  write_json(dir / "metadata.json", json{{"version", GBMC_VERSION},
                                         {"command", "converge"},
                                         {"files", {"errors.csv", "reference.csv"}},
                                         {"config", config}});

  out << c.study.name << ": C1 " << fixed(report.c1, 4) << ", output " << dir.string() << '\n';
  out << "         N      L2 MC  L2 MC_opt    L2 GBMC   MC/GBMC MC_opt/GBMC\n";
  for (const auto& r : report.rows)
    out << std::setw(10) << r.n << ' ' << std::setw(10) << fixed(r.error_mc, 4) << ' '
        << std::setw(10) << fixed(r.error_mc_opt, 4) << ' ' << std::setw(10)
        << fixed(r.error_gbmc, 4) << ' ' << std::setw(9) << fixed(r.ratio, 3) << ' '
        << std::setw(11) << fixed(r.ratio_opt, 3) << '\n';
  out << "slopes: MC " << fixed(report.slope_mc, 3) << ", MC_opt "
      << fixed(report.slope_mc_opt, 3) << ", GBMC " << fixed(report.slope_gbmc, 3) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> runs;
  std::string reference;
  std::vector<std::string> columns;
  double p = 1.0;
  bool no_interpolate = false;
};

int do_compare(const CompareArgs& a, std::ostream& out) {
  if (a.runs.empty() || a.runs.size() > 2) throw ConfigError("compare: give one or two run files");
  if (!(a.p >= 1.0)) throw ConfigError("--p: must be at least 1");
  CsvTable ref = read_table(a.reference);
  std::vector<CsvTable> runs;
  for (const auto& f : a.runs) runs.push_back(read_table(f));

  std::vector<std::string> columns = a.columns;
  if (columns.empty()) {
    for (const auto& col : runs.front().columns) {
      if (col == "t" || col == "x") continue;
      bool everywhere = std::find(ref.columns.begin(), ref.columns.end(), col) != ref.columns.end();
      for (const auto& r : runs)
        everywhere = everywhere && std::find(r.columns.begin(), r.columns.end(), col) != r.columns.end();
      if (everywhere) columns.push_back(col);
    }
    if (columns.empty()) throw ConfigError("compare: no common columns");
  }

  CsvTable summary;
  summary.columns = {"run", "p", "relative_error", "absolute_error", "max_difference",
                     "max_location"};
  std::vector<std::vector<CompareSummary>> results(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (const auto& col : columns) {
      try {
        results[i].push_back(compare_tables(runs[i], ref, col, a.p, !a.no_interpolate));
      } catch (const InvalidArgument& e) {
        throw ConfigError(a.runs[i] + ": " + e.what());
      }
    }
  }
  out << "file,column,p,relative_error,absolute_error,max_difference,max_location\n";
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (const auto& s : results[i])
      out << a.runs[i] << ',' << s.column << ',' << format_number(a.p) << ','
          << format_number(s.relative_error) << ',' << format_number(s.absolute_error) << ','
          << format_number(s.max_difference) << ',' << format_number(s.max_location) << '\n';
  if (runs.size() == 2)
    for (std::size_t k = 0; k < columns.size(); ++k)
      out << "# ratio " << columns[k] << " = "
          << format_number(results[0][k].relative_error / results[1][k].relative_error) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

int do_presets(const std::string& show, bool as_json, std::ostream& out) {
  if (!show.empty()) {
    try {
      out << to_json(run_config_from_json(json{{"preset", show}})).dump(2) << '\n';
    } catch (const InvalidArgument&) {
      out << to_json(study_from_json(json{{"preset", show}})).dump(2) << '\n';
    }
    return kExitOk;
  }
  if (as_json) {
    json j{{"run", json::array()}, {"converge", json::array()}};
    for (const auto& p : run_presets()) j["run"].push_back({{"name", p.name}, {"description", p.description}});
    for (const auto& p : study_presets())
      j["converge"].push_back({{"name", p.name}, {"description", p.description}});
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "run presets:\n";
  for (const auto& p : run_presets()) out << "  " << std::left << std::setw(13) << p.name << p.description << '\n';
  out << "converge presets:\n";
  for (const auto& p : study_presets())
    out << "  " << std::left << std::setw(19) << p.name << p.description << '\n';
  return kExitOk;
}

}  // namespace

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo particle solvers for conservation laws in Jin-Xin relaxation form"};
  app.set_version_flag("--version", GBMC_VERSION);
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one configuration and write CSV artifacts");
  run_cmd->add_option("config", run.config, "JSON run configuration");
  run_cmd->add_option("--preset", run.preset, "Built-in preset instead of a file");
  run_cmd->add_option("-o,--out", run.out, "Output directory (default $GBMC_OUTPUT_DIR/<name>)");
  run_cmd->add_option("--seed", run.seed, "Override the seed");
  run_cmd->add_option("--particles", run.particles, "Override the particle count");
  run_cmd->add_option("--workers", run.workers, "Worker threads (default $GBMC_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--no-particles", run.no_particles, "Skip particles.csv");
  run_cmd->add_flag("--no-reference", run.no_reference, "Skip the reference solution");

  ConvergeArgs conv;
  CLI::App* conv_cmd = app.add_subcommand("converge", "Run a convergence study");
  conv_cmd->add_option("config", conv.config, "JSON study configuration");
  conv_cmd->add_option("--preset", conv.preset, "Built-in study preset");
  conv_cmd->add_option("-o,--out", conv.out, "Output directory (default $GBMC_OUTPUT_DIR/<name>)");
  conv_cmd->add_option("--ns", conv.ns, "Particle counts")->delimiter(',');
  conv_cmd->add_option("--runs", conv.runs, "Independent runs per ensemble mean");
  conv_cmd->add_option("--repetitions", conv.repetitions, "Independent studies combined by RMS");
  conv_cmd->add_option("--seed", conv.seed, "Base seed");
  conv_cmd->add_option("--c1", conv.c1, "Fixed histogram-bias constant (skips the pilot)");
  conv_cmd->add_option("--workers", conv.workers, "Worker threads (default $GBMC_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  conv_cmd->add_flag("--timings", conv.timings, "Add wall-time columns to errors.csv");

  CompareArgs cmp;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "L^p errors of one or two runs against a reference");
  cmp_cmd->add_option("runs", cmp.runs, "solution.csv files")->required();
  cmp_cmd->add_option("-r,--reference", cmp.reference, "Reference CSV")->required();
  cmp_cmd->add_option("-c,--column", cmp.columns, "Columns to compare (default: all shared)");
  cmp_cmd->add_option("-p,--p", cmp.p, "Exponent of the L^p norm");
  cmp_cmd->add_flag("--no-interpolate", cmp.no_interpolate, "Require identical grids");

  std::string show;
  bool as_json = false;
  CLI::App* pre_cmd = app.add_subcommand("presets", "List the built-in presets");
  pre_cmd->add_option("--show", show, "Print one preset as a JSON configuration");
  pre_cmd->add_flag("--json", as_json, "List as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return do_run(run, out);
    if (conv_cmd->parsed()) return do_converge(conv, out);
    if (cmp_cmd->parsed()) return do_compare(cmp, out);
    return do_presets(show, as_json, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace gbmc::cli
