#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbig/estimators.hpp"
#include "rbig/rbig.hpp"
#include "rbig/report.hpp"
#include "rbig/synth.hpp"

namespace rbig {

struct BenchmarkRequest {
  Measure measure = Measure::tc;
  Family family = Family::gaussian_random_cov;
  std::vector<int> dims{3, 10, 50, 100};
  std::vector<long> samples{10000};
  int trials = 5;
  std::vector<EstimatorId> estimators{EstimatorId::rbig};
  std::uint64_t seed = 0;
  /// Protocol parameter (nu, mu2, sigma2 or nu2); unset means the family's default.
  std::optional<double> param;
  RbigConfig config;  ///< rng_seed is replaced per trial
  int knn_k = kDefaultKnnK;
};

/// Resolves a family name for a measure. Accepts the canonical names plus
/// the short aliases gaussian, uniform, student, mean, cov. Throws
/// UsageError listing the valid pairs when the combination is unsupported.
Family resolve_family(Measure measure, const std::string& name);
std::string supported_pairs();
double default_param(Measure measure, Family family);

/// Stable per-cell trial seed: a 64-bit mix of (seed, dim, n, trial).
std::uint64_t trial_seed(std::uint64_t seed, int dim, long n, int trial);

/// Runs every (dim, n, trial) cell; each estimator sees the same data. One
/// report per (dim, n, estimator), sorted by (dim, n, estimator).
std::vector<ExperimentReport> run_benchmark(const BenchmarkRequest& request);

/// Estimates a measure from CSV files (y required for kl and mi).
EstimateRecord estimate_from_files(Measure measure, const std::string& file_x,
                                   const std::optional<std::string>& file_y, EstimatorId estimator,
                                   const RbigConfig& config);

/// Estimates one measure from in-memory data with the chosen estimator.
MeasureEstimate estimate_measure(Measure measure, EstimatorId estimator, const DataMatrix& x,
                                 const DataMatrix* y, const RbigConfig& config, int knn_k = kDefaultKnnK);

}  // namespace rbig
