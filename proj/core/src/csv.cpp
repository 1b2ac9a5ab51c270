#include "gbmc/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "gbmc/error.hpp"

namespace gbmc {

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidArgument("csv: no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> CsvTable::values(const std::string& name) const {
  std::size_t k = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[k]);
  return out;
}

std::string CsvTable::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return {};
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (const auto& [k, v] : table.metadata) os << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& r : table.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
    os << '\n';
  }
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      std::string body = trim(s.substr(1));
      auto eq = body.find('=');
      if (eq == std::string::npos)
        t.metadata.emplace_back(body, "");
      else
        t.metadata.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      continue;
    }
    auto cells = split(s);
    if (!have_header) {
      t.columns = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != t.columns.size())
      throw InvalidArgument("csv: line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " fields, expected " +
                            std::to_string(t.columns.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      char* end = nullptr;
      double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size())
        throw InvalidArgument("csv: line " + std::to_string(line_no) + ": bad number '" + c +
                              "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw InvalidArgument("csv: missing header row");
  return t;
}

CsvTable snapshot_table(const RunResult& result) {
  CsvTable t;
  t.columns = {"t", "x"};
  for (const auto& n : result.component_names) t.columns.push_back(n);
  bool deriv = !result.snapshots.empty() && result.snapshots.front().derivative.has_value();
  if (deriv)
    for (const auto& n : result.component_names) t.columns.push_back("d_" + n);
  for (const auto& snap : result.snapshots) {
    const FieldOnGrid& f = snap.field;
    for (std::size_t j = 0; j < f.grid.cells(); ++j) {
      std::vector<double> row{snap.t, f.grid.center(j)};
      for (std::size_t k = 0; k < f.components(); ++k) row.push_back(f[k][j]);
      if (deriv) {
        const FieldOnGrid& d = *snap.derivative;
        // Derivative histograms share the output grid.
        for (std::size_t k = 0; k < d.components(); ++k)
          row.push_back(j < d[k].size() ? d[k][j] : 0.0);
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

CsvTable field_table(const FieldOnGrid& field, const std::vector<std::string>& names) {
  CsvTable t;
  t.columns = {"x"};
  for (std::size_t k = 0; k < field.components(); ++k)
    t.columns.push_back(k < names.size() ? names[k] : "u" + std::to_string(k));
  for (std::size_t j = 0; j < field.grid.cells(); ++j) {
    std::vector<double> row{field.grid.center(j)};
    for (std::size_t k = 0; k < field.components(); ++k) row.push_back(field[k][j]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable diagnostics_table(const RunResult& result) {
  const Diagnostics& d = result.diagnostics;
  CsvTable t;
  t.columns = {"family",      "initial_mass",     "final_mass", "steps",
               "clipped",     "empty_cells",      "degenerate_cells",
               "outside",     "killed",           "replicated", "clamped"};
  for (std::size_t h = 0; h < result.initial_mass.size(); ++h) {
    t.rows.push_back({static_cast<double>(h), result.initial_mass[h],
                      h < result.final_mass.size() ? result.final_mass[h] : 0.0,
                      static_cast<double>(d.steps), static_cast<double>(d.clipped),
                      static_cast<double>(d.empty_cells),
                      static_cast<double>(d.degenerate_cells), static_cast<double>(d.outside),
                      static_cast<double>(d.killed), static_cast<double>(d.replicated),
                      static_cast<double>(d.clamped)});
  }
  return t;
}

CsvTable error_report_table(const ErrorReport& report, bool timings) {
  CsvTable t;
  t.metadata = {{"c1", format_number(report.c1)}, {"norm", format_number(report.norm)}};
  t.columns = {"N",     "error_mc",  "error_mc_opt", "error_gbmc", "ratio",
               "ratio_opt", "dx_opt", "slope_mc",  "slope_mc_opt", "slope_gbmc"};
  if (timings) {
    t.columns.push_back("seconds_mc");
    t.columns.push_back("seconds_gbmc");
  }
  for (const auto& r : report.rows) {
    std::vector<double> row{static_cast<double>(r.n), r.error_mc,  r.error_mc_opt,
                            r.error_gbmc,             r.ratio,     r.ratio_opt,
                            r.dx_opt,                 report.slope_mc, report.slope_mc_opt,
                            report.slope_gbmc};
    if (timings) {
      row.push_back(r.seconds_mc);
      row.push_back(r.seconds_gbmc);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

// Rows of the last time level when a "t" column exists.
std::vector<std::size_t> last_time_rows(const CsvTable& t) {
  std::vector<std::size_t> idx;
  auto it = std::find(t.columns.begin(), t.columns.end(), "t");
  if (it == t.columns.end()) {
    for (std::size_t i = 0; i < t.rows.size(); ++i) idx.push_back(i);
    return idx;
  }
  std::size_t k = static_cast<std::size_t>(it - t.columns.begin());
  double tmax = -INFINITY;
  for (const auto& r : t.rows) tmax = std::max(tmax, r[k]);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.rows[i][k] == tmax) idx.push_back(i);
  return idx;
}

double interpolate_at(const std::vector<double>& xs, const std::vector<double>& ys,
                      double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

CompareSummary compare_tables(const CsvTable& numerical, const CsvTable& reference,
                              const std::string& column, double p, bool interpolate) {
  std::size_t nx = numerical.column("x"), nc = numerical.column(column);
  std::size_t rx = reference.column("x"), rc = reference.column(column);
  std::vector<double> x, num, rxs, rys;
  for (std::size_t i : last_time_rows(reference)) {
    rxs.push_back(reference.rows[i][rx]);
    rys.push_back(reference.rows[i][rc]);
  }
  if (rxs.empty()) throw InvalidArgument("compare: empty reference");
  // Points beyond the reference grid (padded particle domains) are skipped.
  const auto [rlo, rhi] = std::minmax_element(rxs.begin(), rxs.end());
  const double slack = rxs.size() > 1 ? 0.5 * (*rhi - *rlo) / static_cast<double>(rxs.size() - 1) : 0.0;
  for (std::size_t i : last_time_rows(numerical)) {
    const double xi = numerical.rows[i][nx];
    if (xi < *rlo - slack || xi > *rhi + slack) continue;
    x.push_back(xi);
    num.push_back(numerical.rows[i][nc]);
  }
  if (x.empty()) throw InvalidArgument("compare: no numerical points inside the reference grid");
  std::vector<double> ref;
  if (rxs == x) {
    ref = rys;
  } else {
    if (!interpolate) throw InvalidArgument("compare: grids differ and interpolation is off");
    if (!std::is_sorted(rxs.begin(), rxs.end()))
      throw InvalidArgument("compare: reference x must be sorted");
    for (double xi : x) ref.push_back(interpolate_at(rxs, rys, xi));
  }
  CompareSummary s;
  s.column = column;
  s.relative_error = relative_lp_error(num, ref, p);
  double dx = x.size() > 1 ? std::abs(x[1] - x[0]) : 1.0;
  s.absolute_error = lp_distance(num, ref, dx, p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = std::abs(num[i] - ref[i]);
    if (d > s.max_difference) {
      s.max_difference = d;
      s.max_location = x[i];
    }
  }
  return s;
}

}  // namespace gbmc
