#include "rbig/benchmark.hpp"

#include <algorithm>
#include <tuple>

#include "rbig/csv.hpp"
#include "rbig/errors.hpp"
#include "rbig/version.hpp"

namespace rbig {

namespace {

bool supported(Measure m, Family f) {
  switch (m) {
    case Measure::tc:
    case Measure::h:
      return f == Family::gaussian_random_cov || f == Family::rotated_uniform || f == Family::student;
    case Measure::kl:
      return f == Family::gaussian_pair_mean || f == Family::gaussian_pair_cov ||
             f == Family::gaussian_vs_student || f == Family::student_vs_student;
    case Measure::mi:
      return f == Family::gaussian_mi || f == Family::student_mi;
  }
  return false;
}

}  // namespace

std::string supported_pairs() {
  return "tc|h: gaussian_random_cov (gaussian), rotated_uniform (uniform), student; "
         "kl: gaussian_pair_mean (mean), gaussian_pair_cov (cov), gaussian_vs_student, student_vs_student; "
         "mi: gaussian_mi (gaussian), student_mi (student)";
}

Family resolve_family(Measure measure, const std::string& name) {
  std::optional<Family> f;
  if (name == "gaussian") {
    if (measure == Measure::tc || measure == Measure::h) f = Family::gaussian_random_cov;
    if (measure == Measure::mi) f = Family::gaussian_mi;
  } else if (name == "uniform") {
    f = Family::rotated_uniform;
  } else if (name == "student") {
    if (measure == Measure::tc || measure == Measure::h) f = Family::student;
    if (measure == Measure::mi) f = Family::student_mi;
  } else if (name == "mean") {
    f = Family::gaussian_pair_mean;
  } else if (name == "cov") {
    f = Family::gaussian_pair_cov;
  } else {
    try {
      f = parse_family(name);
    } catch (const UsageError&) {
    }
  }
  if (!f || !supported(measure, *f))
    throw UsageError("unsupported combination measure=" + to_string(measure) + " family=" + name +
                     "; valid pairs: " + supported_pairs());
  return *f;
}

double default_param(Measure measure, Family family) {
  switch (family) {
    case Family::student: return measure == Measure::h ? 5.0 : 20.0;
    case Family::student_mi: return 5.0;
    case Family::gaussian_pair_mean: return 0.4;
    case Family::gaussian_pair_cov: return 0.9;
    case Family::gaussian_vs_student:
    case Family::student_vs_student: return 7.0;
    default: return 0.0;
  }
}

std::uint64_t trial_seed(std::uint64_t seed, int dim, long n, int trial) {
  std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(dim));
  s = mix_seed(s, static_cast<std::uint64_t>(n));
  return mix_seed(s, static_cast<std::uint64_t>(trial));
}

MeasureEstimate estimate_measure(Measure measure, EstimatorId estimator, const DataMatrix& x, const DataMatrix* y,
                                 const RbigConfig& config, int knn_k) {
  if ((measure == Measure::kl || measure == Measure::mi) && y == nullptr)
    throw UsageError("measure " + to_string(measure) + " needs a second data set");
  switch (measure) {
    case Measure::tc:
      if (estimator == EstimatorId::rbig) return estimate_total_correlation(x, config);
      if (estimator == EstimatorId::expf) return expf_total_correlation(x);
      return knn_total_correlation(x, knn_k);
    case Measure::h:
      if (estimator == EstimatorId::rbig) return estimate_entropy(x, config);
      if (estimator == EstimatorId::expf) return expf_entropy(x);
      return knn_entropy(x, knn_k);
    case Measure::kl:
      if (estimator == EstimatorId::rbig) return estimate_kl(x, *y, config);
      if (estimator == EstimatorId::expf) return expf_kl(x, *y);
      return knn_kl(x, *y, knn_k);
    case Measure::mi:
      if (estimator == EstimatorId::rbig) return estimate_mutual_information(x, *y, config);
      if (estimator == EstimatorId::expf) return expf_mutual_information(x, *y);
      return knn_mutual_information(x, *y, knn_k);
  }
  throw UsageError("unknown measure");
}

namespace {

struct TrialData {
  DataMatrix first;
  std::optional<DataMatrix> second;
  GroundTruthSpec spec;
};

TrialData generate(const BenchmarkRequest& req, double param, int dim, long n, Rng& rng) {
  TrialData t;
  switch (req.family) {
    case Family::gaussian_random_cov: {
      auto s = sample_gaussian_random_cov(dim, n, rng);
      t.first = std::move(s.data);
      t.spec = std::move(s.spec);
      break;
    }
    case Family::rotated_uniform: {
      // the semi-analytic TC costs a large Monte-Carlo run; entropy does not need it
      auto s = sample_rotated_uniform(dim, n, rng, req.measure == Measure::tc);
      t.first = std::move(s.data);
      t.spec = std::move(s.spec);
      break;
    }
    case Family::student: {
      auto s = sample_student(dim, n, param, rng);
      t.first = std::move(s.data);
      t.spec = std::move(s.spec);
      break;
    }
    case Family::gaussian_mi:
    case Family::student_mi: {
      auto p = make_mi_pair(req.family, dim, param, n, rng);
      t.first = std::move(p.first);
      t.second = std::move(p.second);
      t.spec = std::move(p.spec);
      break;
    }
    default: {
      auto p = make_kl_pair(req.family, dim, param, n, rng);
      t.first = std::move(p.first);
      t.second = std::move(p.second);
      t.spec = std::move(p.spec);
      break;
    }
  }
  return t;
}

}  // namespace

std::vector<ExperimentReport> run_benchmark(const BenchmarkRequest& req) {
  if (req.trials < 1) throw UsageError("trials must be >= 1");
  if (req.dims.empty() || req.samples.empty()) throw UsageError("dims and samples must be non-empty");
  if (req.estimators.empty()) throw UsageError("at least one estimator is required");
  if (!supported(req.measure, req.family))
    throw UsageError("unsupported combination measure=" + to_string(req.measure) + " family=" +
                     to_string(req.family) + "; valid pairs: " + supported_pairs());
  for (int d : req.dims)
    if (d < 1) throw UsageError("dims must be >= 1");
  for (long n : req.samples)
    if (n < 100) throw UsageError("samples must be >= 100");
  req.config.validate();
  const double param = req.param.value_or(default_param(req.measure, req.family));

  std::vector<ExperimentReport> reports;
  for (int dim : req.dims) {
    for (long n : req.samples) {
      const std::size_t first_report = reports.size();
      for (EstimatorId id : req.estimators) {
        ExperimentReport r;
        r.measure = req.measure;
        r.family = req.family;
        r.dims = dim;
        r.n_samples = n;
        r.estimator_id = id;
        r.seed = req.seed;
        r.tool_version = kToolVersion;
        r.config = req.config;
        reports.push_back(std::move(r));
      }
      for (int trial = 0; trial < req.trials; ++trial) {
        const std::uint64_t ts = trial_seed(req.seed, dim, n, trial);
        Rng rng(ts);
        const TrialData data = generate(req, param, dim, n, rng);
        const Nats truth = data.spec.truth.at(req.measure);
        RbigConfig config = req.config;
        config.rng_seed = mix_seed(ts, 0x65737469ULL);
        for (std::size_t e = 0; e < req.estimators.size(); ++e) {
          const MeasureEstimate est = estimate_measure(req.measure, req.estimators[e], data.first,
                                                       data.second ? &*data.second : nullptr, config, req.knn_k);
          auto& r = reports[first_report + e];
          if (trial == 0) {
            r.params = data.spec.params;
            // per-trial draws (mc_seed and the like) belong to the trial, not the cell
            r.params.erase("mc_seed");
            r.truth_kind = data.spec.truth_kind;
          }
          TrialRecord row;
          row.trial = trial;
          row.seed = ts;
          row.estimate = est.value;
          row.truth = truth;
          row.relative_abs_error_percent = relative_abs_error_percent(est.value, truth);
          row.wall_time = est.wall_time;
          row.n_layers_used = est.n_layers_used;
          row.noise_floor = est.noise_floor;
          r.trials.push_back(row);
        }
      }
    }
  }
  for (auto& r : reports) r.recompute_aggregate();
  std::stable_sort(reports.begin(), reports.end(), [](const ExperimentReport& a, const ExperimentReport& b) {
    return std::tie(a.dims, a.n_samples, a.estimator_id) < std::tie(b.dims, b.n_samples, b.estimator_id);
  });
  return reports;
}

EstimateRecord estimate_from_files(Measure measure, const std::string& file_x,
                                   const std::optional<std::string>& file_y, EstimatorId estimator,
                                   const RbigConfig& config) {
  const bool paired = measure == Measure::kl || measure == Measure::mi;
  if (paired && !file_y) throw UsageError("measure " + to_string(measure) + " requires --y");
  if (!paired && file_y) throw UsageError("measure " + to_string(measure) + " takes a single file");
  const CsvTable x = read_csv_file(file_x);
  std::optional<CsvTable> y;
  if (file_y) y = read_csv_file(*file_y);
  if (measure == Measure::kl && y->data.cols() != x.data.cols())
    throw UsageError("kl: both files must have the same number of columns");
  if (measure == Measure::mi && y->data.rows() != x.data.rows())
    throw UsageError("mi: both files must have the same number of rows");

  EstimateRecord rec;
  rec.measure = measure;
  rec.dims = static_cast<int>(x.data.cols());
  rec.n_samples = static_cast<long>(x.data.rows());
  rec.config = config;
  rec.estimate = estimate_measure(measure, estimator, x.data, y ? &y->data : nullptr, config);
  return rec;
}

}  // namespace rbig
