// SPDX-License-Identifier: Apache-2.0
//
// Benchmark sweeps over budgets and seeds, slope fitting and CSV output.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "parint/detail.hpp"

namespace parint {

enum class Algorithm { quantum, det, mc };

[[nodiscard]] std::string to_string(Algorithm a);
/// Throws std::invalid_argument on unknown names.
[[nodiscard]] Algorithm parse_algorithm(const std::string& name);

struct BenchConfig {
  int r = 2;
  int d1 = 1;
  int d2 = 1;
  std::vector<Algorithm> algorithms{Algorithm::quantum, Algorithm::det, Algorithm::mc};
  std::vector<std::uint64_t> budgets;
  std::uint64_t trials = 1;
  std::uint64_t seed = 1;
  std::string function = "power";
  /// Probe points per output-mesh interval (>= 4).
  int probe = 4;
  std::string out;
  // The corpus integrands are analytic in t, so a short rule is exact to rounding.
  ReferenceResolution reference{2, 8};
};

/// Throws std::invalid_argument when budgets are empty or not strictly
/// increasing, trials == 0, probe < 4 or the algorithm set is empty.
void validate(const BenchConfig& config);

struct ExperimentRecord {
  Algorithm algorithm = Algorithm::quantum;
  int r = 0;
  int d1 = 0;
  int d2 = 0;
  std::uint64_t n = 0;
  std::uint64_t queries = 0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  double sup_error = 0.0;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

struct RowFailure {
  Algorithm algorithm = Algorithm::quantum;
  std::uint64_t n = 0;
  std::uint64_t trial = 0;
  std::string message;
};

struct SweepResult {
  std::vector<ExperimentRecord> records;  // sorted by (algorithm, n, trial)
  std::vector<RowFailure> failures;
  std::uint64_t probe_per_axis = 0;
};

/// Runs every (algorithm, n, trial). Trial t uses trial_seed(config.seed, t).
/// All rows are measured on one probe grid fine enough for the deepest output
/// level in the sweep. Failing rows are collected and the sweep continues.
[[nodiscard]] SweepResult run_sweep(const BenchConfig& config);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;      // RMS residual in log2 units
  double slope_stderr = 0.0;  // standard error of the slope
  std::size_t points = 0;
};

/// Least squares of log2(median error) on log2(median queries) over the
/// budget points of the records (one algorithm). Needs >= 4 budgets with
/// positive error.
[[nodiscard]] SlopeFit fit_slope(const std::vector<ExperimentRecord>& records);

struct BudgetSummary {
  Algorithm algorithm = Algorithm::quantum;
  std::uint64_t n = 0;
  double queries = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  std::size_t trials = 0;
};

/// Linear-interpolation quantile (type 7). Throws on empty input.
[[nodiscard]] double quantile(std::vector<double> values, double q);

/// Per (algorithm, n) median and 0.75-quantile of the error.
[[nodiscard]] std::vector<BudgetSummary> summarize(const std::vector<ExperimentRecord>& records);

[[nodiscard]] std::vector<ExperimentRecord> select(const std::vector<ExperimentRecord>& records, Algorithm a);

/// Header "algorithm,r,d1,d2,n,queries,trial,seed,sup_error"; reals in
/// shortest round-trip form.
void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& os);
[[nodiscard]] std::vector<ExperimentRecord> parse_csv(std::istream& is);

/// "algorithm,log2_queries,log2_median_error,log2_q75_error" per budget.
void write_plot_data(const std::vector<ExperimentRecord>& records, std::ostream& os);

enum class EmitFormat { csv, plot };

/// Writes to `path`. Throws std::invalid_argument on empty records (no file is
/// created) and std::runtime_error when the path cannot be written.
void emit(const std::vector<ExperimentRecord>& records, EmitFormat format, const std::string& path);

/// Flat key=value file; '#' starts a comment, blank lines are ignored.
[[nodiscard]] std::map<std::string, std::string> read_config_file(const std::string& path);

/// Applies keys r, d1, d2, algos, n-list, trials, seed, function, probe, out.
/// Lists are comma separated. Throws std::invalid_argument on unknown keys or
/// bad values.
void apply_config(const std::map<std::string, std::string>& kv, BenchConfig& config);

[[nodiscard]] std::string format_double(double x);

}  // namespace parint
