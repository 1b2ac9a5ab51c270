#include "gbmc/run.hpp"

#include <algorithm>
#include <cmath>

#include "gbmc/error.hpp"

namespace gbmc {

Diagnostics& Diagnostics::operator+=(const Diagnostics& o) {
  steps += o.steps;
  clipped += o.clipped;
  empty_cells += o.empty_cells;
  degenerate_cells += o.degenerate_cells;
  outside = o.outside;
  killed += o.killed;
  replicated += o.replicated;
  clamped += o.clamped;
  return *this;
}

namespace {

std::size_t steps_for(double t, double dt) {
  const double k = std::round(t / dt);
  if (std::abs(k * dt - t) > 1e-9 * std::max(1.0, t)) {
    throw InvalidArgument("time " + std::to_string(t) +
                          " is not a multiple of dt = " + std::to_string(dt));
  }
  return static_cast<std::size_t>(k);
}

}  // namespace

Schedule make_schedule(double final_time, double dt,
                       const std::vector<double>& snapshot_times) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(final_time >= 0.0)) throw InvalidArgument("final time must be >= 0");
  Schedule s;
  s.steps = steps_for(final_time, dt);
  for (double t : snapshot_times) {
    if (t < 0.0 || t > final_time * (1.0 + 1e-12)) {
      throw InvalidArgument("snapshot time outside [0, T]");
    }
    s.snapshot_steps.push_back(steps_for(t, dt));
  }
  s.snapshot_steps.push_back(s.steps);
  std::sort(s.snapshot_steps.begin(), s.snapshot_steps.end());
  s.snapshot_steps.erase(
      std::unique(s.snapshot_steps.begin(), s.snapshot_steps.end()),
      s.snapshot_steps.end());
  return s;
}

}  // namespace gbmc
