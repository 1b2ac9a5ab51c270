#pragma once

// CSV artifacts: '#'-prefixed "key=value" metadata lines, one header row,
// comma-separated numbers written with 17 significant digits.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gbmc/analysis.hpp"
#include "gbmc/grid.hpp"
#include "gbmc/run.hpp"

namespace gbmc {

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Throws InvalidArgument for unknown names.
  std::size_t column(const std::string& name) const;
  std::vector<double> values(const std::string& name) const;
  /// Empty string when absent.
  std::string meta(const std::string& key) const;
};

/// %.17g.
std::string format_number(double v);
void write_csv(std::ostream& os, const CsvTable& table);
/// Throws InvalidArgument on ragged rows or unparsable numbers.
CsvTable read_csv(std::istream& is);

/// Long format: t, x, one column per component, then d_<component>
/// derivative-histogram columns when present.
CsvTable snapshot_table(const RunResult& result);
/// x and one column per component.
CsvTable field_table(const FieldOnGrid& field, const std::vector<std::string>& names);
CsvTable diagnostics_table(const RunResult& result);
/// N, error_mc, error_mc_opt, error_gbmc, ratio, ratio_opt, dx_opt,
/// slope_mc, slope_mc_opt, slope_gbmc, then seconds_mc and seconds_gbmc
/// when `timings` is set (wall times make the file non-reproducible).
CsvTable error_report_table(const ErrorReport& report, bool timings = false);

/// Relative L^p error of `numerical` against `reference` for one column,
/// with the reference linearly interpolated to the numerical x values when
/// the grids differ (and `interpolate` is set).
struct CompareSummary {
  std::string column;
  double relative_error = 0.0;
  double absolute_error = 0.0;  ///< (sum |d|^p dx)^(1/p)
  double max_difference = 0.0;
  double max_location = 0.0;
};
/// Uses the rows with the largest t when the tables carry a "t" column and
/// only the numerical points inside the reference grid.
/// Throws InvalidArgument on schema mismatch.
CompareSummary compare_tables(const CsvTable& numerical, const CsvTable& reference,
                              const std::string& column, double p,
                              bool interpolate = true);

}  // namespace gbmc
