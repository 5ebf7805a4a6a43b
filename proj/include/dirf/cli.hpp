#pragma once

#include "dirf/core.hpp"
#include "dirf/sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dirf::cli {

enum class Subcommand { test, simulate, validate };
enum class OutputFormat { json, text };

struct RunSpec {
  Subcommand subcommand = Subcommand::test;
  /// exp-rates, norm-var, linreg, mvn-mean; validate also accepts "all".
  std::string model;
  std::string data_path;
  /// Inline hypothesis: a scalar, or comma-separated for mvn-mean.
  std::optional<std::string> psi;
  /// JSON hypothesis file for linreg: {"A": [[...]], "psi": [...]}.
  std::optional<std::string> hypothesis_path;
  bool intercept = false;
  Method method = Method::both;
  OutputFormat format = OutputFormat::json;
  std::uint64_t seed = 0;
  int replicates = 1000;
  int cases = 200;
  double tolerance = 1e-7;
  /// simulate: group sizes (two-group models) or n (linreg, mvn-mean).
  std::optional<int> n1;
  std::optional<int> n2;
  std::optional<int> n;
  std::vector<std::string> sim_methods;
};

/// Throws ParseError on invalid arguments. `--help` is reported through
/// the returned exit code of run_main instead.
RunSpec parse_args(int argc, const char* const* argv);

/// Full command-line entry point: parse, run, report. Returns the exit code.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 0 on success, 2 on a degenerate hypothesis, 1 on error.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

/// Comma-separated rows with a mandatory header. Double-quoted fields are
/// unquoted; blank lines are skipped. Throws ParseError with line numbers.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  /// 1-based source line of each row.
  std::vector<int> lines;
};

CsvTable parse_csv(const std::string& text);

/// `group,value` rows with groups labeled 1 and 2.
sim::TwoGroupSample parse_grouped(const CsvTable& table);
/// First column `y`, the rest predictors; an intercept column is prepended
/// on request.
RegressionData parse_regression(const CsvTable& table, bool intercept);
MvnData parse_matrix(const CsvTable& table);

LinearConstraint parse_linear_hypothesis(const std::string& json_text);
std::vector<double> parse_vector(const std::string& text);

std::string read_file(const std::string& path);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct TestReport {
  std::string model;
  DirectionalResult result;
  ComparisonStatistics comparison;
  /// Model-specific fit values (F statistic, degrees of freedom, MLEs).
  std::map<std::string, double> fit;
};

std::string to_json(const TestReport& report);
TestReport test_report_from_json(const std::string& text);
std::string to_text(const TestReport& report);

std::string to_json(const sim::CalibrationReport& report);
std::string to_text(const sim::CalibrationReport& report);

}  // namespace dirf::cli
