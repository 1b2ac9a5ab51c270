#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gbmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point of the gbmc tool. `args` excludes the program name.
/// Reads GBMC_OUTPUT_DIR and GBMC_WORKERS from the environment.
int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gbmc::cli
