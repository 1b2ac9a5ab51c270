#include "gbmc/reference.hpp"

#include <algorithm>
#include <cmath>

#include "gbmc/error.hpp"

namespace gbmc {

std::vector<double> FvSolution::sample(const std::vector<double>& x,
                                       std::size_t component) const {
  const auto& u = field[component];
  const Grid& g = field.grid;
  const std::size_t m = g.cells();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = (x[i] - g.x_min()) / g.dx() - 0.5;
    if (s <= 0.0) {
      out[i] = u.front();
    } else if (s >= static_cast<double>(m - 1)) {
      out[i] = u.back();
    } else {
      const auto j = static_cast<std::size_t>(std::floor(s));
      const double w = s - static_cast<double>(j);
      out[i] = (1.0 - w) * u[j] + w * u[j + 1];
    }
  }
  return out;
}

double godunov_flux(const FluxModel& model, double ul, double ur) {
  const double fl = model.flux(ul);
  const double fr = model.flux(ur);
  const auto sp = model.stationary_point();
  if (ul <= ur) {
    double f = std::min(fl, fr);
    if (sp && *sp > ul && *sp < ur) f = std::min(f, model.flux(*sp));
    return f;
  }
  double f = std::max(fl, fr);
  if (sp && *sp > ur && *sp < ul) f = std::max(f, model.flux(*sp));
  return f;
}

namespace {

void check_cfl(double cfl) {
  if (!(cfl > 0.0) || cfl > 1.0) {
    throw CflViolation("CFL number must lie in (0, 1], got " + std::to_string(cfl));
  }
}

}  // namespace

FvSolution godunov_scalar(const FluxModel& model, const ScalarProfile& u0,
                          const Grid& grid, double final_time, double cfl,
                          Boundary boundary) {
  check_cfl(cfl);
  if (!(final_time >= 0.0)) throw InvalidArgument("final time must be >= 0");
  const std::size_t m = grid.cells();
  const double dx = grid.dx();
  FvSolution sol{FieldOnGrid(grid, 1), 0.0, 0, 0.0};
  std::vector<double>& u = sol.field[0];
  u = u0.cell_averages(grid.x_min(), grid.x_max(), m);
  std::vector<double> flux(m + 1);
  while (sol.t < final_time) {
    double smax = 0.0;
    for (double uj : u) smax = std::max(smax, std::abs(model.flux_deriv(uj)));
    double dt = smax > 0.0 ? cfl * dx / smax : final_time - sol.t;
    if (sol.t + dt >= final_time) dt = final_time - sol.t;
    sol.max_cfl = std::max(sol.max_cfl, smax * dt / dx);
    for (std::size_t i = 1; i < m; ++i) flux[i] = godunov_flux(model, u[i - 1], u[i]);
    if (boundary == Boundary::transmissive) {
      flux[0] = godunov_flux(model, u.front(), u.front());
      flux[m] = godunov_flux(model, u.back(), u.back());
    } else {
      flux[0] = std::min(godunov_flux(model, 0.0, u.front()), 0.0);
      flux[m] = std::max(godunov_flux(model, u.back(), 0.0), 0.0);
    }
    const double r = dt / dx;
    for (std::size_t j = 0; j < m; ++j) u[j] -= r * (flux[j + 1] - flux[j]);
    sol.t += dt;
    ++sol.steps;
    if (final_time - sol.t <= 1e-14 * std::max(1.0, final_time)) sol.t = final_time;
  }
  return sol;
}

FvSolution relaxation_fv_system(const SystemModel& model,
                                const VectorProfile& u0, const Grid& grid,
                                double final_time,
                                const std::vector<double>& speeds, double cfl,
                                KineticInit init, Boundary boundary) {
  check_cfl(cfl);
  const std::size_t nc = model.components();
  if (u0.size() != nc) throw InvalidArgument("initial data do not match the model's components");
  if (speeds.size() != 1 && speeds.size() != nc) {
    throw InvalidArgument("need one relaxation speed or one per component");
  }
  auto speed = [&](std::size_t h) { return speeds.size() == 1 ? speeds[0] : speeds[h]; };
  double amax = 0.0;
  for (std::size_t h = 0; h < nc; ++h) {
    if (!(speed(h) > 0.0)) throw InvalidArgument("relaxation speeds must be positive");
    amax = std::max(amax, speed(h));
  }
  const std::size_t m = grid.cells();
  const double dx = grid.dx();

  FvSolution sol{FieldOnGrid(grid, nc), 0.0, 0, 0.0};
  std::vector<std::vector<double>> fp(nc, std::vector<double>(m));
  std::vector<std::vector<double>> fm(nc, std::vector<double>(m));
  auto project = [&](std::size_t j) {
    StateVector uj{};
    for (std::size_t h = 0; h < nc; ++h) uj[h] = sol.field[h][j];
    const StateVector f = model.flux(uj);
    for (std::size_t h = 0; h < nc; ++h) {
      const double a = speed(h);
      fp[h][j] = (a * uj[h] + f[h]) / (2.0 * a);
      fm[h][j] = (a * uj[h] - f[h]) / (2.0 * a);
    }
  };
  for (std::size_t h = 0; h < nc; ++h) {
    sol.field[h] = u0[h].cell_averages(grid.x_min(), grid.x_max(), m);
  }
  if (init == KineticInit::equilibrium_of_average) {
    for (std::size_t j = 0; j < m; ++j) project(j);
  } else {
    // Cell averages of E+-(u0(x)) by 16-point midpoint sub-sampling.
    constexpr int kSub = 16;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t h = 0; h < nc; ++h) fp[h][j] = fm[h][j] = 0.0;
      for (int s = 0; s < kSub; ++s) {
        const double x = grid.left_edge(j) + (s + 0.5) * dx / kSub;
        const StateVector ux = evaluate(u0, x);
        const StateVector f = model.flux(ux);
        for (std::size_t h = 0; h < nc; ++h) {
          const double a = speed(h);
          fp[h][j] += (a * ux[h] + f[h]) / (2.0 * a) / kSub;
          fm[h][j] += (a * ux[h] - f[h]) / (2.0 * a) / kSub;
        }
      }
    }
  }

  const double dt_full = cfl * dx / amax;
  std::vector<double> np(m), nm(m);
  while (sol.t < final_time) {
    double dt = dt_full;
    if (sol.t + dt >= final_time * (1.0 - 1e-14)) dt = final_time - sol.t;
    for (std::size_t h = 0; h < nc; ++h) {
      const double nu = speed(h) * dt / dx;
      sol.max_cfl = std::max(sol.max_cfl, nu);
      const auto& p = fp[h];
      const auto& q = fm[h];
      const bool zero = boundary == Boundary::zero_inflow;
      for (std::size_t j = 0; j < m; ++j) {
        const double pl = j > 0 ? p[j - 1] : (zero ? 0.0 : p[0]);
        const double qr = j + 1 < m ? q[j + 1] : (zero ? 0.0 : q[m - 1]);
        np[j] = p[j] - nu * (p[j] - pl);
        nm[j] = q[j] + nu * (qr - q[j]);
      }
      fp[h].swap(np);
      fm[h].swap(nm);
      for (std::size_t j = 0; j < m; ++j) sol.field[h][j] = fp[h][j] + fm[h][j];
    }
    for (std::size_t j = 0; j < m; ++j) project(j);
    sol.t += dt;
    ++sol.steps;
    if (final_time - sol.t <= 1e-14 * std::max(1.0, final_time)) sol.t = final_time;
  }
  return sol;
}

FvSolution relaxation_fv_scalar(const FluxModel& model, const ScalarProfile& u0,
                                const Grid& grid, double final_time, double a,
                                double cfl, KineticInit init, Boundary boundary) {
  return relaxation_fv_system(system_from_scalar(model), {u0}, grid, final_time,
                              {a}, cfl, init, boundary);
}

// ---------------------------------------------------------------------------
// Exact shallow-water Riemann solver

namespace {

// Depth function of one wave and its derivative.
void depth_function(double h, double hk, double ck, double g, double& f,
                    double& df) {
  if (h <= hk) {
    const double c = std::sqrt(g * h);
    f = 2.0 * (c - ck);
    df = h > 0.0 ? g / c : 0.0;
  } else {
    const double gk = std::sqrt(0.5 * g * (h + hk) / (h * hk));
    f = (h - hk) * gk;
    df = gk - (h - hk) * g / (4.0 * gk * h * h);
  }
}

bool dry_middle(SweState l, SweState r, double g) {
  return 2.0 * (std::sqrt(g * l.h) + std::sqrt(g * r.h)) <= r.u - l.u;
}

}  // namespace

double swe_star_depth(SweState l, SweState r, double g) {
  if (!(g > 0.0)) throw InvalidArgument("gravity must be positive");
  if (l.h < 0.0 || r.h < 0.0) throw NegativeDepth("negative depth in Riemann data");
  if (l.h == 0.0 || r.h == 0.0 || dry_middle(l, r, g)) return 0.0;
  const double cl = std::sqrt(g * l.h);
  const double cr = std::sqrt(g * r.h);
  const double du = r.u - l.u;
  double h = std::pow(0.5 * (cl + cr) - 0.25 * du, 2) / g;
  if (!(h > 0.0)) h = 1e-8 * std::min(l.h, r.h);
  for (int it = 0; it < 100; ++it) {
    double fl, dfl, fr, dfr;
    depth_function(h, l.h, cl, g, fl, dfl);
    depth_function(h, r.h, cr, g, fr, dfr);
    const double f = fl + fr + du;
    const double step = f / (dfl + dfr);
    double next = h - step;
    if (next <= 0.0) next = 0.5 * h;
    const double change = std::abs(next - h) / (0.5 * (next + h));
    h = next;
    if (change < 1e-12) return h;
  }
  throw NonConvergence("shallow-water star depth did not converge in 100 iterations");
}

std::vector<SweState> swe_exact_riemann(SweState l, SweState r, double g,
                                        const std::vector<double>& xi) {
  const double hs = swe_star_depth(l, r, g);
  const double cl = std::sqrt(g * l.h);
  const double cr = std::sqrt(g * r.h);
  std::vector<SweState> out(xi.size());

  auto left_fan = [&](double s) {
    const double u = (l.u + 2.0 * cl + 2.0 * s) / 3.0;
    const double c = (l.u + 2.0 * cl - s) / 3.0;
    return SweState{c * c / g, u};
  };
  auto right_fan = [&](double s) {
    const double u = (r.u - 2.0 * cr + 2.0 * s) / 3.0;
    const double c = (-r.u + 2.0 * cr + s) / 3.0;
    return SweState{c * c / g, u};
  };

  const bool dry = l.h == 0.0 || r.h == 0.0 || dry_middle(l, r, g);
  if (dry) {
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const double s = xi[i];
      SweState st{0.0, 0.0};
      if (l.h > 0.0 && s <= l.u + 2.0 * cl) {
        st = s <= l.u - cl ? l : left_fan(s);
      }
      if (r.h > 0.0 && s >= r.u - 2.0 * cr) {
        st = s >= r.u + cr ? r : right_fan(s);
      }
      out[i] = st;
    }
    return out;
  }

  double fl, dfl, fr, dfr;
  depth_function(hs, l.h, cl, g, fl, dfl);
  depth_function(hs, r.h, cr, g, fr, dfr);
  const double us = 0.5 * (l.u + r.u) + 0.5 * (fr - fl);
  const double cs = std::sqrt(g * hs);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double s = xi[i];
    if (s <= us) {
      if (hs > l.h) {
        const double ql = std::sqrt(0.5 * (hs + l.h) * hs / (l.h * l.h));
        out[i] = s < l.u - cl * ql ? l : SweState{hs, us};
      } else if (s <= l.u - cl) {
        out[i] = l;
      } else if (s >= us - cs) {
        out[i] = {hs, us};
      } else {
        out[i] = left_fan(s);
      }
    } else {
      if (hs > r.h) {
        const double qr = std::sqrt(0.5 * (hs + r.h) * hs / (r.h * r.h));
        out[i] = s > r.u + cr * qr ? r : SweState{hs, us};
      } else if (s >= r.u + cr) {
        out[i] = r;
      } else if (s <= us + cs) {
        out[i] = {hs, us};
      } else {
        out[i] = right_fan(s);
      }
    }
  }
  return out;
}

}  // namespace gbmc
