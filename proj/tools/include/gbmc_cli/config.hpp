#pragma once

// JSON run and study configurations. Keys mirror the RunConfig and
// StudySpec fields; a "preset" key selects a built-in base that the other
// keys override. Errors are InvalidArgument with a "path: message" text.

#include <string>

#include "gbmc/presets.hpp"
#include "json.hpp"

namespace gbmc::cli {

using nlohmann::json;

RunConfig run_config_from_json(const json& j);
json to_json(const RunConfig& cfg);

/// A convergence study with the data needed to write it back out.
struct StudyConfig {
  std::string model = "burgers";
  InitialData initial;
  StudyPreset study;
};
StudyConfig study_from_json(const json& j);
json to_json(const StudyConfig& cfg);

/// Parses a file; throws InvalidArgument with the parser's position.
json load_json_file(const std::string& path);

const char* to_string(WeightedStrategy s);
const char* to_string(CdfMode m);

}  // namespace gbmc::cli
