#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sszd/harness/config.hpp"
#include "sszd/harness/rate_fit.hpp"
#include "sszd/trace.hpp"

namespace sszd::harness {

struct RepResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  RunTrace trace;
  double wall_seconds = 0.0;
  std::optional<std::string> error;
  double final_f = std::numeric_limits<double>::quiet_NaN();
  double final_dist = std::numeric_limits<double>::quiet_NaN();
  bool failed() const noexcept { return error.has_value(); }
};

/// Statistics across successful repetitions at one evaluation index.
struct CurvePoint {
  std::uint64_t eval = 0;
  double median = 0.0;
  double mean = 0.0;
  double std = 0.0;
};

/// Statistics across successful repetitions after k steps.
struct IteratePoint {
  std::uint64_t k = 0;
  /// Evaluations spent after k steps (largest over repetitions).
  std::uint64_t eval = 0;
  double mean_f_x = 0.0;
  double median_f_x = 0.0;
  double mean_f_xbar = std::numeric_limits<double>::quiet_NaN();
  double median_dist = std::numeric_limits<double>::quiet_NaN();
};

struct RunSummary {
  ExperimentConfig config;
  std::string config_hash;
  std::string optimizer_name;
  std::string objective_name;
  std::optional<double> min_value;
  double initial_f = 0.0;
  std::vector<RepResult> reps;
  std::vector<CurvePoint> curve;
  std::vector<IteratePoint> iterates;
  double median_final = std::numeric_limits<double>::quiet_NaN();
  double mean_final = std::numeric_limits<double>::quiet_NaN();
  double std_final = std::numeric_limits<double>::quiet_NaN();
  double median_final_dist = std::numeric_limits<double>::quiet_NaN();
  std::optional<RateFit> rate;
  double wall_seconds = 0.0;

  std::size_t failed_reps() const;
};

/// Median with the midpoint average for even sizes. Empty input gives NaN.
double median(std::vector<double> values);
double mean(const std::vector<double>& values);
/// Population standard deviation.
double stddev(const std::vector<double>& values);

/// Evaluation indices at which the aggregate curve is reported: all of
/// 1..max_eval when that is at most `max_points`, else an even subsample that
/// keeps both endpoints.
std::vector<std::uint64_t> curve_grid(std::uint64_t max_eval, std::size_t max_points = 2000);

/// f_true of `rows` at evaluation `eval`, carrying the last value forward past
/// the end (and the initial value before the first row).
double value_at(const std::vector<TraceRow>& rows, std::uint64_t eval, double initial_f);

/// Runs cfg.reps repetitions with seeds base_seed + i. When cfg.output_dir is
/// set, writes rep{i}.csv, rep{i}_iterates.csv, summary.json and config.ini.
RunSummary run_experiment(const ExperimentConfig& cfg);

/// Recomputes the aggregates of `summary` from its repetition traces.
void aggregate(RunSummary& summary);

/// Rate fit on the mean of f(xbar_k) when tracked, else of f(x_k).
RateFit fit_rate(const RunSummary& summary, double min_f);

std::string summary_json(const RunSummary& summary);
void write_outputs(const RunSummary& summary, const std::filesystem::path& dir);

struct ComparisonRow {
  std::string label;
  double median_final = 0.0;
  double mean_final = 0.0;
  double std_final = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t max_evals = 0;
  std::size_t failed_reps = 0;
};

struct Comparison {
  std::vector<RunSummary> summaries;
  std::vector<ComparisonRow> rows;
  /// Shared evaluation grid and per-optimizer median curves on it.
  std::vector<std::uint64_t> grid;
  std::vector<std::vector<double>> median_curves;

  std::string table_csv() const;
  std::string table_text() const;
  std::string curves_csv() const;
};

/// Runs every config. All must share the objective spec and budget, else
/// ConfigError. When `output_dir` is non-empty each run is written to
/// <output_dir>/<index>-<optimizer name>, next to comparison.csv, comparison.txt
/// and curves.csv.
Comparison compare(const std::vector<ExperimentConfig>& cfgs, const std::string& output_dir = {});

}  // namespace sszd::harness
