#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gbmc/csv.hpp"
#include "gbmc/error.hpp"

using namespace gbmc;

namespace {

CsvTable field(const std::vector<double>& x, const std::vector<double>& u) {
  CsvTable t;
  t.columns = {"x", "u"};
  for (std::size_t i = 0; i < x.size(); ++i) t.rows.push_back({x[i], u[i]});
  return t;
}

}  // namespace

TEST(Csv, FormatIsSeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(std::stod(format_number(M_PI)), M_PI);
}

TEST(Csv, RoundTripKeepsMetadataAndBits) {
  CsvTable t = field({0.1, 1.0 / 3.0}, {-2.5e-300, 7.0});
  t.metadata = {{"name", "test1b"}, {"seed", "4"}};
  std::stringstream ss;
  write_csv(ss, t);
  EXPECT_EQ(ss.str().rfind("# name=test1b\n# seed=4\nx,u\n", 0), 0u);
  const CsvTable back = read_csv(ss);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.meta("seed"), "4");
  EXPECT_EQ(back.meta("missing"), "");
  EXPECT_EQ(back.values("u")[1], 7.0);
  EXPECT_THROW(back.column("v"), InvalidArgument);
}

TEST(Csv, RejectsRaggedAndGarbage) {
  std::stringstream ragged("x,u\n1,2\n3\n");
  EXPECT_THROW(read_csv(ragged), InvalidArgument);
  std::stringstream garbage("x,u\n1,abc\n");
  EXPECT_THROW(read_csv(garbage), InvalidArgument);
}

TEST(Compare, IdentityIsZero) {
  const CsvTable t = field({0.5, 1.5, 2.5}, {1.0, 2.0, 2.0});
  const auto s = compare_tables(t, t, "u", 2.0);
  EXPECT_EQ(s.relative_error, 0.0);
  EXPECT_EQ(s.absolute_error, 0.0);
  EXPECT_EQ(s.max_difference, 0.0);
}

TEST(Compare, ScaledFieldGivesKnownRatio) {
  const CsvTable ref = field({0.5, 1.5, 2.5}, {1.0, -2.0, 4.0});
  const CsvTable num = field({0.5, 1.5, 2.5}, {1.25, -2.5, 5.0});
  EXPECT_NEAR(compare_tables(num, ref, "u", 1.0).relative_error, 0.25, 1e-15);
  EXPECT_NEAR(compare_tables(num, ref, "u", 2.0).relative_error, 0.25, 1e-15);
}

TEST(Compare, ThreeCellHandCase) {
  const auto s = compare_tables(field({0.5, 1.5, 2.5}, {1, 1, 1}), field({0.5, 1.5, 2.5}, {1, 2, 2}),
                                "u", 2.0);
  EXPECT_NEAR(s.relative_error, std::sqrt(2.0) / 3.0, 1e-15);
  EXPECT_NEAR(s.absolute_error, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(s.max_difference, 1.0);
  EXPECT_EQ(s.max_location, 1.5);
}

TEST(Compare, InterpolatesReferenceAndSkipsOutsidePoints) {
  const CsvTable ref = field({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0});
  const CsvTable num = field({-5.0, 0.25, 0.75, 1.25, 9.0}, {100.0, 0.25, 0.75, 1.25, -3.0});
  EXPECT_NEAR(compare_tables(num, ref, "u", 1.0).relative_error, 0.0, 1e-15);
  const CsvTable far = field({10.0, 11.0}, {0.0, 0.0});
  EXPECT_THROW(compare_tables(far, ref, "u", 1.0), InvalidArgument);
}

TEST(Compare, UsesLatestSnapshot) {
  CsvTable num;
  num.columns = {"t", "x", "u"};
  num.rows = {{0.0, 0.5, 9.0}, {0.0, 1.5, 9.0}, {1.0, 0.5, 1.0}, {1.0, 1.5, 2.0}};
  const CsvTable ref = field({0.5, 1.5}, {1.0, 2.0});
  EXPECT_EQ(compare_tables(num, ref, "u", 1.0).relative_error, 0.0);
  EXPECT_THROW(compare_tables(num, ref, "h", 1.0), InvalidArgument);
}

TEST(Tables, SnapshotLayout) {
  RunResult r;
  r.component_names = {"h", "hu"};
  FieldOnGrid f(Grid(0.0, 1.0, 2), 2);
  f[0] = {1.0, 2.0};
  f[1] = {0.0, 0.5};
  r.snapshots.push_back({0.0, f, std::nullopt});
  r.snapshots.push_back({0.5, f, std::nullopt});
  const CsvTable t = snapshot_table(r);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"t", "x", "h", "hu"}));
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[3], (std::vector<double>{0.5, 0.75, 2.0, 0.5}));
}

TEST(Tables, ErrorReportOmitsTimingsByDefault) {
  ErrorReport rep;
  rep.rows = {{100, 0.4, 0.3, 0.1, 4.0, 3.0, 0.2, 1.5, 2.5}};
  rep.slope_gbmc = -0.5;
  const CsvTable t = error_report_table(rep);
  EXPECT_EQ(t.columns.front(), "N");
  EXPECT_EQ(std::count(t.columns.begin(), t.columns.end(), "seconds_mc"), 0);
  EXPECT_EQ(t.values("slope_gbmc")[0], -0.5);
  const CsvTable timed = error_report_table(rep, true);
  EXPECT_EQ(timed.values("seconds_gbmc")[0], 2.5);
}
