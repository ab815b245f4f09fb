#pragma once
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rbig/estimators.hpp"
#include "rbig/rbig.hpp"
#include "rbig/synth.hpp"

namespace rbig {

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;  ///< derived seed that generated this trial's data
  Nats estimate = 0.0;
  Nats truth = 0.0;
  double relative_abs_error_percent = 0.0;
  double wall_time = 0.0;
  int n_layers_used = 0;
  Nats noise_floor = 0.0;
};

/// One (measure, family, dims, n_samples, estimator) cell of a benchmark.
struct ExperimentReport {
  Measure measure = Measure::tc;
  Family family = Family::gaussian_random_cov;
  std::map<std::string, double> params;  ///< protocol parameters (nu, mu2, ...)
  TruthKind truth_kind = TruthKind::analytic;
  int dims = 0;
  long n_samples = 0;
  int n_trials = 0;
  EstimatorId estimator_id = EstimatorId::rbig;
  std::uint64_t seed = 0;
  std::string tool_version;
  RbigConfig config;  ///< echoed for rbig runs so the report can be replayed
  std::vector<TrialRecord> trials;
  double mean_rel_mae = 0.0;
  double std_rel_mae = 0.0;  ///< sample standard deviation (0 for one trial)

  /// Recomputes the aggregate from the per-trial rows.
  void recompute_aggregate();
};

double relative_abs_error_percent(Nats estimate, Nats truth);

enum class ReportFormat { json, csv };
ReportFormat parse_report_format(const std::string& text);

struct EmitOptions {
  /// Timing breaks byte-for-byte reproducibility; when false every
  /// wall_time is written as 0.
  bool include_timing = true;
};

/// Column order of the CSV form, one row per (cell, trial).
const std::vector<std::string>& report_csv_header();

std::string reports_to_json(const std::vector<ExperimentReport>& reports, const EmitOptions& options = {});
std::string reports_to_csv(const std::vector<ExperimentReport>& reports, const EmitOptions& options = {});
std::vector<ExperimentReport> reports_from_json(const std::string& text);

/// Writes to `path` ("-" for standard output). Throws UsageError on an empty
/// list and std::runtime_error when the path cannot be written.
void emit_report(const std::vector<ExperimentReport>& reports, ReportFormat format, const std::string& path,
                 const EmitOptions& options = {});

/// Single-estimate record printed by `rbig estimate`.
struct EstimateRecord {
  Measure measure = Measure::tc;
  MeasureEstimate estimate;
  int dims = 0;
  long n_samples = 0;
  RbigConfig config;
};
std::string estimate_to_json(const EstimateRecord& record, const EmitOptions& options = {});

}  // namespace rbig
