#pragma once

// Error norms, log-log slope fits, the optimal MC mesh size, the empirical
// CDF variance check and the MC-versus-GBMC convergence study.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gbmc/grid.hpp"
#include "gbmc/mc_scalar.hpp"
#include "gbmc/models.hpp"
#include "gbmc/profile.hpp"
#include "gbmc/reference.hpp"

namespace gbmc {

/// (sum |v_i|^p w)^(1/p) with uniform weight w.
double lp_norm(const std::vector<double>& v, double weight, double p);
/// Absolute distance (sum |a_i - b_i|^p w)^(1/p).
double lp_distance(const std::vector<double>& a, const std::vector<double>& b,
                   double weight, double p);
/// ||num - ref||_p / ||ref||_p on a common uniform grid (midpoint rule).
/// Throws ZeroReference when ||ref||_p == 0.
double relative_lp_error(const std::vector<double>& num,
                         const std::vector<double>& ref, double p);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
/// Least-squares fit of log(y) against log(x). Needs >= 2 positive points.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// (||u|| / (4 C1^2 N))^(1/3).
double optimal_dx(double n, double c1, double norm);
/// Mesh-error constant from two pilot errors: |e1 - e2| / |dx1 - dx2|.
double estimate_c1(double dx1, double e1, double dx2, double e2);

/// Sample variance of the empirical CDF over R independent ensembles
/// against the binomial value u(1-u)/N.
struct CdfVariancePoint {
  double x = 0.0;
  double u = 0.0;
  double sample_variance = 0.0;
  double expected_variance = 0.0;
  double standard_error = 0.0;
  bool pass = false;
};
struct CdfVarianceReport {
  std::vector<CdfVariancePoint> points;
  double pass_fraction = 0.0;
};
/// Standard error of the sample variance of R draws of Bin(N, u)/N.
double binomial_variance_standard_error(double u, std::size_t n, std::size_t r);
/// `target` must increase from 0 to 1. A point passes when
/// |s^2 - u(1-u)/N| <= `bands` standard errors.
CdfVarianceReport cdf_variance_check(const ScalarProfile& target, std::size_t n,
                                     const std::vector<double>& xs,
                                     std::size_t replications, std::uint64_t seed,
                                     double bands = 5.0, unsigned workers = 1);

/// Convergence study of MC (fixed dx), MC with dx = optimal_dx(N) and GBMC
/// against a fine reference. Each error is the relative L^p error of the
/// mean field over `runs` replications. With `repetitions` K > 1 the study
/// is repeated with disjoint seeds and the K errors are combined as a root
/// mean square. Repetition k, run r uses seed + k * runs + r.
struct StudySpec {
  FluxModel model = burgers();
  ScalarProfile u0;
  double speed = 0.4;
  double dt = 0.005;
  double final_time = 2.5;
  std::vector<std::size_t> ns;
  std::size_t runs = 5;
  std::size_t repetitions = 1;
  std::uint64_t seed = 1;
  McVariant mc_variant = McVariant::baseline;
  Grid mc_grid{-5.0, 5.0, 50};
  /// GBMC error evaluation points (cell centers).
  Grid output{-5.0, 5.0, 1000};
  std::optional<Interval> sampling_domain;
  double p = 2.0;
  bool with_mc = true;
  bool with_mc_opt = true;
  bool with_gbmc = true;
  /// Pilot estimate of C1: N and the two mesh sizes (default: twice the
  /// fixed MC mesh size and the fixed mesh size itself).
  std::size_t pilot_n = 100000;
  std::optional<double> pilot_dx1;
  std::optional<double> pilot_dx2;
  /// Fixed C1 (skips the pilot).
  std::optional<double> c1;
  unsigned workers = 1;
};

struct ErrorRow {
  std::size_t n = 0;
  double error_mc = 0.0;
  double error_mc_opt = 0.0;
  double error_gbmc = 0.0;
  double ratio = 0.0;      ///< error_mc / error_gbmc
  double ratio_opt = 0.0;  ///< error_mc_opt / error_gbmc
  double dx_opt = 0.0;
  double seconds_mc = 0.0;    ///< mean wall time of one run
  double seconds_gbmc = 0.0;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
  double slope_mc = 0.0;
  double slope_mc_opt = 0.0;
  double slope_gbmc = 0.0;
  double c1 = 0.0;
  double norm = 0.0;  ///< ||u_ref||_{L^{p/2}}
};

ErrorReport convergence_study(const StudySpec& spec, const FvSolution& reference);

/// Per-N (N, MC/GBMC, MC_opt/GBMC) ratios of a report.
struct RatioRow {
  std::size_t n = 0;
  double ratio = 0.0;
  double ratio_opt = 0.0;
};
std::vector<RatioRow> variance_ratio(const ErrorReport& report);

/// Runs `count` independent jobs on up to `workers` threads; job i writes
/// only its own output slot.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& job);

}  // namespace gbmc
