#include "gbmc/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "gbmc/error.hpp"
#include "gbmc/gbmc_scalar.hpp"
#include "gbmc/particles.hpp"
#include "gbmc/reconstruct.hpp"
#include "gbmc/rng.hpp"

namespace gbmc {

double lp_norm(const std::vector<double>& v, double weight, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1");
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s * weight, 1.0 / p);
}

double lp_distance(const std::vector<double>& a, const std::vector<double>& b,
                   double weight, double p) {
  if (a.size() != b.size()) throw InvalidArgument("lp_distance: size mismatch");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return lp_norm(d, weight, p);
}

double relative_lp_error(const std::vector<double>& num,
                         const std::vector<double>& ref, double p) {
  double den = lp_norm(ref, 1.0, p);
  if (den == 0.0) throw ZeroReference("relative_lp_error: reference norm is zero");
  return lp_distance(num, ref, 1.0, p) / den;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("fit_loglog: need at least two points");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InvalidArgument("fit_loglog: values must be positive");
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double den = n * sxx - sx * sx;
  if (den == 0.0) throw InvalidArgument("fit_loglog: x values coincide");
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

double optimal_dx(double n, double c1, double norm) {
  if (!(n >= 1.0)) throw InvalidArgument("optimal_dx: N must be >= 1");
  if (!(c1 > 0.0)) throw InvalidArgument("optimal_dx: C1 must be positive");
  if (!(norm > 0.0)) throw InvalidArgument("optimal_dx: norm must be positive");
  return std::cbrt(norm / (4.0 * c1 * c1 * n));
}

double estimate_c1(double dx1, double e1, double dx2, double e2) {
  if (dx1 == dx2) throw InvalidArgument("estimate_c1: mesh sizes coincide");
  return std::abs(e1 - e2) / std::abs(dx1 - dx2);
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& job) {
  unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (w <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (unsigned t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double binomial_variance_standard_error(double u, std::size_t n, std::size_t r) {
  if (r < 4) throw InvalidArgument("binomial_variance_standard_error: R must be >= 4");
  double nn = static_cast<double>(n);
  double rr = static_cast<double>(r);
  double pq = u * (1.0 - u);
  double sigma2 = pq / nn;
  // Fourth central moment of Bin(N, u) / N.
  double mu4 = nn * pq * (1.0 + 3.0 * (nn - 2.0) * pq) / (nn * nn * nn * nn);
  double var = (mu4 - sigma2 * sigma2 * (rr - 3.0) / (rr - 1.0)) / rr;
  return std::sqrt(std::max(var, 0.0));
}

CdfVarianceReport cdf_variance_check(const ScalarProfile& target, std::size_t n,
                                     const std::vector<double>& xs,
                                     std::size_t replications, std::uint64_t seed,
                                     double bands, unsigned workers) {
  if (n == 0) throw InvalidArgument("cdf_variance_check: N must be positive");
  if (replications < 4) throw InvalidArgument("cdf_variance_check: R must be >= 4");
  SignedMeasure measure = derivative_measure(target);
  // values[r][k] = empirical CDF of replication r at xs[k].
  std::vector<std::vector<double>> values(replications);
  parallel_for(replications, workers, [&](std::size_t r) {
    RngStream rng(seed, r);
    std::vector<double> x(n);
    for (auto& xi : x) xi = measure.sample(rng).x;
    std::sort(x.begin(), x.end());
    auto& out = values[r];
    out.resize(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      auto it = std::upper_bound(x.begin(), x.end(), xs[k]);
      out[k] = static_cast<double>(it - x.begin()) / static_cast<double>(n);
    }
  });

  CdfVarianceReport rep;
  std::size_t passed = 0;
  double rr = static_cast<double>(replications);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    CdfVariancePoint pt;
    pt.x = xs[k];
    pt.u = target(xs[k]);
    double mean = 0.0;
    for (std::size_t r = 0; r < replications; ++r) mean += values[r][k];
    mean /= rr;
    double ss = 0.0;
    for (std::size_t r = 0; r < replications; ++r) {
      double d = values[r][k] - mean;
      ss += d * d;
    }
    pt.sample_variance = ss / (rr - 1.0);
    double u = std::clamp(pt.u, 0.0, 1.0);
    pt.expected_variance = u * (1.0 - u) / static_cast<double>(n);
    pt.standard_error = binomial_variance_standard_error(u, n, replications);
    pt.pass = std::abs(pt.sample_variance - pt.expected_variance) <=
              bands * pt.standard_error;
    if (pt.pass) ++passed;
    rep.points.push_back(pt);
  }
  rep.pass_fraction = xs.empty() ? 1.0
                                 : static_cast<double>(passed) /
                                       static_cast<double>(xs.size());
  return rep;
}

namespace {

struct TrackResult {
  double error = 0.0;
  double seconds = 0.0;
};

RelaxationConfig study_config(const StudySpec& spec) {
  RelaxationConfig c;
  c.speeds = {spec.speed};
  c.dt = spec.dt;
  return c;
}

// Relative error of the R-run mean field, RMS-combined over repetitions.
// `run_field(seed)` returns one run's field; `points` are its x values.
template <class RunField>
TrackResult track(const StudySpec& spec, const FvSolution& reference,
                  const std::vector<double>& points, RunField run_field) {
  const std::size_t total = spec.runs * spec.repetitions;
  std::vector<std::vector<double>> fields(total);
  std::vector<double> seconds(total, 0.0);
  parallel_for(total, spec.workers, [&](std::size_t i) {
    auto start = std::chrono::steady_clock::now();
    fields[i] = run_field(spec.seed + i);
    seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                               start).count();
  });
  const std::vector<double> ref = reference.sample(points);
  TrackResult t;
  double sq = 0.0;
  for (std::size_t k = 0; k < spec.repetitions; ++k) {
    std::vector<double> mean(points.size(), 0.0);
    for (std::size_t r = 0; r < spec.runs; ++r) {
      const auto& f = fields[k * spec.runs + r];
      for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += f[j];
    }
    for (double& m : mean) m /= static_cast<double>(spec.runs);
    const double e = relative_lp_error(mean, ref, spec.p);
    sq += e * e;
  }
  t.error = std::sqrt(sq / static_cast<double>(spec.repetitions));
  for (double s : seconds) t.seconds += s;
  t.seconds /= static_cast<double>(total);
  return t;
}

TrackResult mc_track(const StudySpec& spec, const FvSolution& reference,
                     const Grid& grid, std::size_t n) {
  RunOptions opts;
  opts.keep_ensembles = false;
  const RelaxationConfig config = study_config(spec);
  return track(spec, reference, grid.centers(), [&](std::uint64_t seed) {
    return run_mc(spec.model, spec.u0, config, grid, n, spec.final_time, spec.mc_variant,
                  seed, opts, spec.sampling_domain)
        .final_snapshot()
        .field[0];
  });
}

TrackResult gbmc_track(const StudySpec& spec, const FvSolution& reference,
                       std::size_t n) {
  RunOptions opts;
  opts.keep_ensembles = false;
  const RelaxationConfig config = study_config(spec);
  return track(spec, reference, spec.output.centers(), [&](std::uint64_t seed) {
    return run_gbmc(spec.model, spec.u0, config, n, spec.final_time, seed, spec.output,
                    opts)
        .final_snapshot()
        .field[0];
  });
}

Grid grid_with_dx(const Grid& window, double dx) {
  double len = window.x_max() - window.x_min();
  auto cells = static_cast<std::size_t>(std::max(1.0, std::round(len / dx)));
  return Grid(window.x_min(), window.x_max(), cells);
}

// Absolute L^p error of the R-run mean MC histogram (pilot for C1), with
// seeds following those of the study.
double absolute_mc_error(const StudySpec& spec, const FvSolution& reference,
                         const Grid& grid, std::size_t n) {
  RelaxationConfig config = study_config(spec);
  RunOptions opts;
  opts.keep_ensembles = false;
  std::vector<std::vector<double>> fields(spec.runs);
  parallel_for(spec.runs, spec.workers, [&](std::size_t r) {
    fields[r] = run_mc(spec.model, spec.u0, config, grid, n, spec.final_time,
                       spec.mc_variant, spec.seed + spec.runs * spec.repetitions + r, opts,
                       spec.sampling_domain)
                    .final_snapshot()
                    .field[0];
  });
  std::vector<double> mean(grid.cells(), 0.0);
  for (const auto& f : fields)
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += f[j];
  for (double& m : mean) m /= static_cast<double>(spec.runs);
  return lp_distance(mean, reference.sample(grid.centers()), grid.dx(), spec.p);
}

}  // namespace

ErrorReport convergence_study(const StudySpec& spec, const FvSolution& reference) {
  if (spec.ns.empty()) throw InvalidArgument("convergence_study: empty N list");
  if (spec.runs < 2) throw InvalidArgument("convergence_study: R must be >= 2");
  if (spec.repetitions < 1)
    throw InvalidArgument("convergence_study: repetitions must be >= 1");
  for (std::size_t n : spec.ns)
    if (n == 0) throw InvalidArgument("convergence_study: N must be positive");

  ErrorReport rep;
  const FieldOnGrid& ref = reference.field;
  std::vector<double> ref_abs(ref[0].size());
  for (std::size_t j = 0; j < ref_abs.size(); ++j) ref_abs[j] = std::abs(ref[0][j]);
  // ||u||_{L^{p/2}}.
  rep.norm = lp_norm(ref_abs, ref.grid.dx(), spec.p / 2.0 >= 1.0 ? spec.p / 2.0 : 1.0);

  if (spec.with_mc_opt) {
    if (spec.c1) {
      rep.c1 = *spec.c1;
    } else {
      Grid g1 = grid_with_dx(spec.mc_grid, spec.pilot_dx1.value_or(2.0 * spec.mc_grid.dx()));
      Grid g2 = grid_with_dx(spec.mc_grid, spec.pilot_dx2.value_or(spec.mc_grid.dx()));
      double e1 = absolute_mc_error(spec, reference, g1, spec.pilot_n);
      double e2 = absolute_mc_error(spec, reference, g2, spec.pilot_n);
      rep.c1 = estimate_c1(g1.dx(), e1, g2.dx(), e2);
    }
    if (!(rep.c1 > 0.0)) throw NonConvergence("convergence_study: C1 pilot gave zero");
  }

  for (std::size_t n : spec.ns) {
    ErrorRow row;
    row.n = n;
    if (spec.with_mc) {
      TrackResult t = mc_track(spec, reference, spec.mc_grid, n);
      row.error_mc = t.error;
      row.seconds_mc = t.seconds;
    }
    if (spec.with_mc_opt) {
      row.dx_opt = optimal_dx(static_cast<double>(n), rep.c1, rep.norm);
      row.error_mc_opt =
          mc_track(spec, reference, grid_with_dx(spec.mc_grid, row.dx_opt), n).error;
    }
    if (spec.with_gbmc) {
      TrackResult t = gbmc_track(spec, reference, n);
      row.error_gbmc = t.error;
      row.seconds_gbmc = t.seconds;
      if (t.error > 0.0) {
        row.ratio = row.error_mc / t.error;
        row.ratio_opt = row.error_mc_opt / t.error;
      }
    }
    rep.rows.push_back(row);
  }

  if (spec.ns.size() >= 2) {
    std::vector<double> ns;
    for (std::size_t n : spec.ns) ns.push_back(static_cast<double>(n));
    auto slope = [&](auto get) {
      std::vector<double> e;
      for (const auto& r : rep.rows) e.push_back(get(r));
      return fit_loglog(ns, e).slope;
    };
    if (spec.with_mc) rep.slope_mc = slope([](const ErrorRow& r) { return r.error_mc; });
    if (spec.with_mc_opt) rep.slope_mc_opt = slope([](const ErrorRow& r) { return r.error_mc_opt; });
    if (spec.with_gbmc) rep.slope_gbmc = slope([](const ErrorRow& r) { return r.error_gbmc; });
  }
  return rep;
}

std::vector<RatioRow> variance_ratio(const ErrorReport& report) {
  std::vector<RatioRow> out;
  for (const auto& r : report.rows) out.push_back({r.n, r.ratio, r.ratio_opt});
  return out;
}

}  // namespace gbmc
