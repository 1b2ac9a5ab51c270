#pragma once

// Run configurations, the named test-case presets and a dispatcher that
// executes a configuration with the matching solver.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gbmc/analysis.hpp"
#include "gbmc/grid.hpp"
#include "gbmc/mc_scalar.hpp"
#include "gbmc/models.hpp"
#include "gbmc/profile.hpp"
#include "gbmc/reconstruct.hpp"
#include "gbmc/run.hpp"

namespace gbmc {

enum class Method {
  mc,
  mc_lowvar,
  mc_weighted,
  gbmc,
  mc_systems,
  gbmc_char,
  gbmc_meshed,
  fv_reference,
};

const char* to_string(Method m);
/// Accepts "mc", "mc-lowvar", "mc-weighted", "gbmc", "mc-systems",
/// "gbmc-char", "gbmc-meshed", "fv-reference".
Method method_from_string(const std::string& s);
bool is_system_model(const std::string& model);

/// Initial data in the model's natural variables: u for scalar laws,
/// (h, u) for "swe", (rho, u) for "awr", (rho, m) for "euler".
struct InitialData {
  std::string kind = "gaussian";  ///< gaussian | sine | square | piecewise
  double mean = 0.0;
  double sd = 1.0;
  double amplitude = 0.3989422804014327;
  double lo = 0.0;
  double hi = 0.0;
  double height = 0.0;
  std::vector<double> breaks;
  std::vector<StateVector> states;
};

struct RunConfig {
  std::string name = "custom";
  std::string description;
  Method method = Method::gbmc;
  /// burgers | lwr | linear:<c> | swe | awr | euler
  std::string model = "burgers";
  double gravity = 9.8;
  double cv = 1.0;
  std::vector<double> speeds;
  InitialData initial;
  std::size_t particles = 1000;
  /// Relaxation grid of the MC and meshed solvers (and the FV method).
  Interval domain{-5.0, 5.0};
  std::size_t cells = 50;
  std::optional<Interval> sampling_domain;
  /// GBMC output points (cell centers of window / output_points).
  Interval window{-5.0, 5.0};
  std::size_t output_points = 1000;
  double dt = 0.01;
  std::optional<double> epsilon;  ///< empty = zero limit
  double final_time = 1.0;
  std::uint64_t seed = 1;
  std::vector<double> snapshot_times;
  WeightedStrategy strategy = WeightedStrategy::fixed_count;
  bool low_variance = false;
  CdfMode reconstruction = CdfMode::blended;
  bool derivative_histogram = false;
  /// Fine reference solution on `window`; 0 disables it.
  std::size_t reference_cells = 0;
  double reference_cfl = 0.9;
};

/// Checks every field and the subcharacteristic condition on the initial
/// states. Throws InvalidArgument (message starts with the field name) or
/// SubcharacteristicViolation.
void validate(const RunConfig& cfg);

/// Initial data in natural variables.
VectorProfile initial_profile(const RunConfig& cfg);
/// Initial data in conserved variables.
VectorProfile conserved_profile(const RunConfig& cfg);
SystemModel system_model(const RunConfig& cfg);
/// Throws InvalidArgument for models without a diagonal form.
CharacteristicModel characteristic_model(const RunConfig& cfg);
RelaxationConfig relaxation_config(const RunConfig& cfg);

/// Validates and runs. Snapshots hold conserved variables, except for
/// "gbmc-char" which reports the physical pair.
RunResult execute(const RunConfig& cfg, unsigned workers = 1);

/// Reference at the final time on `window` with `reference_cells` cells,
/// in the same variables as execute(). Exact for shallow-water Riemann
/// data, fine Godunov for scalar laws, the relaxation scheme otherwise.
std::optional<FieldOnGrid> reference_solution(const RunConfig& cfg);

struct PresetInfo {
  std::string name;
  std::string description;
};
std::vector<PresetInfo> run_presets();
/// Throws InvalidArgument for unknown names.
RunConfig run_preset(const std::string& name);

/// Convergence-study presets: the study and its fine Godunov reference.
struct StudyPreset {
  std::string name;
  std::string description;
  StudySpec spec;
  Interval reference_domain{-5.0, 5.0};
  std::size_t reference_cells = 10000;
};
std::vector<PresetInfo> study_presets();
StudyPreset study_preset(const std::string& name);
FvSolution study_reference(const StudyPreset& preset);

}  // namespace gbmc
