// Acceptance run: one PASS/FAIL line per criterion, details indented below.
//
//   acceptance [report.txt]
//
// Writes the same text to report.txt and the underlying benchmark reports to
// report.json next to it. Exit status is non-zero only if the harness itself
// fails; criterion verdicts are read from the output.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rbig/benchmark.hpp"
#include "rbig/estimators.hpp"
#include "rbig/rbig.hpp"
#include "rbig/report.hpp"
#include "rbig/rotation.hpp"
#include "rbig/synth.hpp"

using rbig::DataMatrix;
using rbig::EstimatorId;
using rbig::Family;
using rbig::Matrix;
using rbig::Measure;

namespace {

constexpr std::uint64_t kMasterSeed = 1;
constexpr long kSamples = 10000;
constexpr int kTrials = 5;

class Criterion {
 public:
  explicit Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  // Records one check; the criterion passes only if every check does.
  void check(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    details_.push_back(std::string(ok ? "  ok    " : "  FAIL  ") + what);
  }
  void note(const std::string& what) { details_.push_back("  note  " + what); }

  std::string render() const {
    std::ostringstream os;
    os << "criterion " << id_ << ": " << (pass_ ? "PASS" : "FAIL") << "  " << title_ << "\n";
    for (const auto& d : details_) os << d << "\n";
    return os.str();
  }

 private:
  int id_;
  std::string title_;
  bool pass_ = true;
  std::vector<std::string> details_;
};

std::string num(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::vector<rbig::ExperimentReport> all_reports;

// Runs one benchmark cell (N = 10^4, 5 trials, fixed master seed).
// Every table cell runs under both univariate entropy estimators.
constexpr rbig::EntropyEstimator kEntropyEstimators[] = {rbig::EntropyEstimator::histogram_mm,
                                                         rbig::EntropyEstimator::spacing};

std::vector<rbig::ExperimentReport> cell(Measure measure, Family family, int dim, std::optional<double> param,
                                         std::vector<EstimatorId> estimators,
                                         rbig::EntropyEstimator entropy = rbig::EntropyEstimator::histogram_mm,
                                         double* seconds = nullptr) {
  rbig::BenchmarkRequest req;
  req.measure = measure;
  req.family = family;
  req.dims = {dim};
  req.samples = {kSamples};
  req.trials = kTrials;
  req.estimators = std::move(estimators);
  req.seed = kMasterSeed;
  req.param = param;
  req.config.entropy.estimator = entropy;
  const auto start = std::chrono::steady_clock::now();
  auto reports = rbig::run_benchmark(req);
  if (seconds) *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  all_reports.insert(all_reports.end(), reports.begin(), reports.end());
  return reports;
}

const rbig::ExperimentReport& of(const std::vector<rbig::ExperimentReport>& reports, EstimatorId id) {
  for (const auto& r : reports)
    if (r.estimator_id == id) return r;
  throw std::logic_error("estimator missing from reports");
}

std::string describe(const rbig::ExperimentReport& r) {
  std::string params;
  for (const auto& [k, v] : r.params) params += " " + k + "=" + num(v);
  std::string id = rbig::to_string(r.estimator_id);
  if (r.estimator_id == EstimatorId::rbig) id += "/" + rbig::to_string(r.config.entropy.estimator);
  return rbig::to_string(r.measure) + " " + rbig::to_string(r.family) + params + " D=" + std::to_string(r.dims) +
         " " + id + ": rel-MAE " + num(r.mean_rel_mae) + "% (sd " +
         num(r.std_rel_mae, 3) + ")";
}

void at_most(Criterion& c, const rbig::ExperimentReport& r, double limit) {
  c.check(r.mean_rel_mae <= limit, describe(r) + " <= " + num(limit) + "%");
}

void at_least(Criterion& c, const rbig::ExperimentReport& r, double limit) {
  c.check(r.mean_rel_mae >= limit, describe(r) + " >= " + num(limit) + "% (expected degradation)");
}

// RBIG alone on one cell, under each entropy estimator.
void rbig_cell(Criterion& c, Measure measure, Family family, int dim, std::optional<double> param, double limit) {
  for (auto entropy : kEntropyEstimators)
    at_most(c, of(cell(measure, family, dim, param, {EstimatorId::rbig}, entropy), EstimatorId::rbig), limit);
}

rbig::RbigConfig seeded(std::uint64_t seed, rbig::EntropyEstimator entropy = rbig::EntropyEstimator::histogram_mm) {
  rbig::RbigConfig c;
  c.rng_seed = seed;
  c.entropy.estimator = entropy;
  return c;
}

DataMatrix correlated(long n, int d, double rho, std::uint64_t seed) {
  Matrix cov = Matrix::Constant(d, d, rho);
  cov.diagonal().setOnes();
  rbig::Rng rng(seed);
  return rbig::sample_gaussian(rbig::Vector::Zero(d), cov, n, rng);
}

Matrix two_by_two(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return m;
}

// ---- criteria -----------------------------------------------------------

Criterion criterion1() {
  Criterion c(1, "total correlation, Gaussian random covariance");
  // the baselines ride along with the default-estimator cells for criterion 7
  const auto d3 = cell(Measure::tc, Family::gaussian_random_cov, 3, {}, {EstimatorId::rbig, EstimatorId::expf,
                                                                        EstimatorId::knn});
  at_most(c, of(d3, EstimatorId::rbig), 3.0);
  const auto d10 = cell(Measure::tc, Family::gaussian_random_cov, 10, {}, {EstimatorId::rbig, EstimatorId::expf});
  at_most(c, of(d10, EstimatorId::rbig), 5.0);
  const auto d50 = cell(Measure::tc, Family::gaussian_random_cov, 50, {}, {EstimatorId::rbig, EstimatorId::knn});
  at_most(c, of(d50, EstimatorId::rbig), 6.0);
  const auto spacing = rbig::EntropyEstimator::spacing;
  at_most(c, of(cell(Measure::tc, Family::gaussian_random_cov, 3, {}, {EstimatorId::rbig}, spacing), EstimatorId::rbig),
          3.0);
  at_most(c, of(cell(Measure::tc, Family::gaussian_random_cov, 10, {}, {EstimatorId::rbig}, spacing),
                EstimatorId::rbig),
          5.0);
  at_most(c, of(cell(Measure::tc, Family::gaussian_random_cov, 50, {}, {EstimatorId::rbig}, spacing),
                EstimatorId::rbig),
          6.0);
  for (auto entropy : kEntropyEstimators) {
    double seconds = 0;
    const auto d100 = cell(Measure::tc, Family::gaussian_random_cov, 100, {}, {EstimatorId::rbig}, entropy, &seconds);
    at_most(c, of(d100, EstimatorId::rbig), 6.0);
    c.check(seconds <= 120.0, "D=100 cell, " + rbig::to_string(entropy) + " (5 trials, data generation included) took " +
                                  num(seconds) + " s <= 120 s");
  }
  return c;
}

Criterion criterion2() {
  Criterion c(2, "total correlation, rotated uniform");
  rbig_cell(c, Measure::tc, Family::rotated_uniform, 3, {}, 10.0);
  rbig_cell(c, Measure::tc, Family::rotated_uniform, 50, {}, 20.0);
  return c;
}

Criterion criterion3() {
  Criterion c(3, "total correlation, Student nu=20");
  rbig_cell(c, Measure::tc, Family::student, 50, 20.0, 15.0);
  rbig_cell(c, Measure::tc, Family::student, 100, 20.0, 10.0);
  return c;
}

Criterion criterion4() {
  Criterion c(4, "entropy");
  rbig_cell(c, Measure::h, Family::gaussian_random_cov, 50, {}, 5.0);
  rbig_cell(c, Measure::h, Family::rotated_uniform, 100, {}, 15.0);
  rbig_cell(c, Measure::h, Family::student, 50, 5.0, 10.0);
  return c;
}

Criterion criterion5() {
  Criterion c(5, "KL divergence");
  rbig_cell(c, Measure::kl, Family::gaussian_pair_mean, 50, 0.4, 25.0);
  rbig_cell(c, Measure::kl, Family::gaussian_pair_cov, 50, 0.9, 15.0);
  rbig_cell(c, Measure::kl, Family::gaussian_vs_student, 100, 7.0, 80.0);
  return c;
}

Criterion criterion6() {
  Criterion c(6, "mutual information");
  rbig_cell(c, Measure::mi, Family::gaussian_mi, 10, {}, 30.0);
  rbig_cell(c, Measure::mi, Family::gaussian_mi, 50, {}, 25.0);
  rbig_cell(c, Measure::mi, Family::student_mi, 50, 5.0, 35.0);
  return c;
}

// Reuses the cells run for criterion 1.
Criterion criterion7() {
  Criterion c(7, "baseline sanity");
  auto find = [](int dim, EstimatorId id) -> const rbig::ExperimentReport& {
    for (const auto& r : all_reports)
      if (r.measure == Measure::tc && r.family == Family::gaussian_random_cov && r.dims == dim && r.estimator_id == id)
        return r;
    throw std::logic_error("baseline cell missing");
  };
  at_most(c, find(10, EstimatorId::expf), 2.0);
  at_most(c, find(3, EstimatorId::knn), 5.0);
  at_least(c, find(50, EstimatorId::knn), 20.0);
  return c;
}

Criterion criterion8() {
  Criterion c(8, "oracle equivalence");
  // (a) bivariate Gaussian at N = 10^5
  for (double rho : {0.3, 0.5, 0.8, 0.9}) {
    const auto x = correlated(100000, 2, rho, 800 + static_cast<std::uint64_t>(rho * 10));
    const double est = rbig::estimate_total_correlation(x, seeded(8)).value;
    const double truth = -0.5 * std::log(1 - rho * rho);
    c.check(std::abs(est - truth) <= 0.05, "2D Gaussian rho=" + num(rho) + ": T~=" + num(est) + " vs " +
                                               num(truth) + " (|diff| <= 0.05)");
  }
  // (b) analytic truths at d <= 2 against brute-force quadrature
  double worst = 0;
  std::string worst_what;
  auto compare = [&](double value, double quad, const std::string& what) {
    const double diff = std::abs(value - quad);
    if (diff >= worst) {
      worst = diff;
      worst_what = what;
    }
    c.check(diff <= 1e-2, what + ": " + num(value, 7) + " vs quadrature " + num(quad, 7));
  };
  for (double nu : {3.0, 5.0, 20.0}) {
    compare(rbig::student_entropy(nu, Matrix::Identity(1, 1)), oracle::student_entropy_1d_oracle(nu),
            "Student H d=1 nu=" + num(nu));
    const Matrix a = two_by_two(10.0, 0.7, 10.0);
    compare(rbig::student_entropy(nu, a), oracle::student_entropy_2d_oracle(nu) + 0.5 * std::log(a.determinant()),
            "Student H d=2 nu=" + num(nu));
    compare(rbig::student_total_correlation(nu, a), oracle::student_tc_2d_oracle(nu, a),
            "Student T d=2 nu=" + num(nu));
    const Matrix b = two_by_two(10.0, 3.0, 10.0);
    compare(rbig::student_mutual_information(nu, b, 1), oracle::student_tc_2d_oracle(nu, b),
            "Student I 1+1 nu=" + num(nu));
  }
  for (double nu2 : {2.0, 4.0, 7.0}) {
    compare(rbig::student_kl_identity(1, 8.0, nu2), oracle::student_kl_1d_oracle(8.0, nu2),
            "Student KL d=1 nu1=8 nu2=" + num(nu2));
    compare(rbig::student_kl_identity(2, 100.0, nu2), oracle::student_kl_2d_oracle(100.0, nu2),
            "Student KL d=2 nu1=100 nu2=" + num(nu2));
  }
  compare(rbig::gaussian_kl(rbig::Vector::Constant(1, 0.3), Matrix::Constant(1, 1, 2.25),
                            rbig::Vector::Constant(1, -0.2), Matrix::Constant(1, 1, 0.64)),
          oracle::gaussian_kl_1d_oracle(0.3, 1.5, -0.2, 0.8), "Gaussian KL d=1");
  {
    Matrix m(2, 2);
    m << 0.9, 0.4, 0.3, 0.8;
    rbig::Rng rng(81);
    const auto s = rbig::rotated_uniform_with_matrix(m, 10, rng);
    compare(s.spec.truth.at(Measure::tc),
            oracle::trapezoid_entropy_oracle(0.9, 0.4) + oracle::trapezoid_entropy_oracle(0.3, 0.8) -
                std::log(std::abs(m.determinant())),
            "rotated uniform T d=2 (semi-analytic)");
  }
  c.note("largest deviation " + num(worst, 3) + " nats (" + worst_what + ")");
  // (c) Student -> Gaussian at nu = 10^6
  rbig::Rng rng(83);
  for (int d : {1, 2, 5, 20}) {
    const Matrix a = d == 1 ? Matrix::Identity(1, 1) : rbig::random_scale_matrix(d, 10.0, rng);
    const double hg = rbig::gaussian_entropy(a), hs = rbig::student_entropy(1e6, a);
    c.check(std::abs(hs - hg) <= 1e-3 * std::abs(hg),
            "H limit d=" + std::to_string(d) + ": relative gap " + num(std::abs(hs - hg) / std::abs(hg), 3));
    if (d > 1) {
      const double tg = rbig::gaussian_total_correlation(a), ts = rbig::student_total_correlation(1e6, a);
      c.check(std::abs(ts - tg) <= 1e-3 * tg,
              "T limit d=" + std::to_string(d) + ": relative gap " + num(std::abs(ts - tg) / tg, 3));
    }
  }
  return c;
}

Criterion criterion9() {
  Criterion c(9, "invariants");
  for (auto entropy : kEntropyEstimators) {
    const std::string tag = rbig::to_string(entropy) + ": ";
    {
      std::mt19937_64 gen(91);
      std::normal_distribution<double> z;
      std::uniform_real_distribution<double> u;
      for (bool uniform : {false, true}) {
        DataMatrix x(kSamples, 5);
        for (long i = 0; i < x.size(); ++i) x.data()[i] = uniform ? u(gen) : z(gen);
        const auto e = rbig::estimate_total_correlation(x, seeded(91, entropy));
        c.check(std::abs(e.value) <= 3 * e.noise_floor,
                tag + "independent " + (uniform ? "uniform" : "normal") + " D=5: |T~|=" + num(std::abs(e.value)) +
                    " <= 3*floor=" + num(3 * e.noise_floor));
      }
    }
    {
      const auto joint = correlated(kSamples, 4, 0.4, 92);
      const DataMatrix x = joint.leftCols(2), y = joint.rightCols(2);
      const auto xy = rbig::estimate_mutual_information(x, y, seeded(92, entropy));
      const auto yx = rbig::estimate_mutual_information(y, x, seeded(92, entropy));
      c.check(std::abs(xy.value - yx.value) <= 3 * xy.noise_floor,
              tag + "MI symmetry: " + num(xy.value) + " vs " + num(yx.value) +
                  " (<= 3*floor=" + num(3 * xy.noise_floor) + ")");
      DataMatrix warped = x;
      warped.col(0) = warped.col(0).array().exp();
      warped.col(1) = warped.col(1).array().cube();
      const auto w = rbig::estimate_mutual_information(warped, y, seeded(92, entropy));
      c.check(std::abs(w.value - xy.value) <= 3 * xy.noise_floor,
              tag + "MI under monotone maps: " + num(w.value) + " vs " + num(xy.value));
    }
    {
      const auto all = correlated(2 * kSamples, 5, 0.3, 93);
      const auto kl = rbig::estimate_kl(all.topRows(kSamples), all.bottomRows(kSamples), seeded(93, entropy));
      c.check(kl.value <= 0.1 + 6 * kl.noise_floor,
              tag + "KL self-divergence D=5: " + num(kl.value) + " <= " + num(0.1 + 6 * kl.noise_floor));
    }
  }
  {
    rbig::Rng rng(94);
    const auto s = rbig::sample_student(4, kSamples, 5.0, rng);
    const auto model = rbig::fit(s.data, seeded(94));
    const DataMatrix back = rbig::inverse_transform(model, rbig::transform(model, s.data));
    double worst = 0;
    for (Eigen::Index j = 0; j < s.data.cols(); ++j) {
      const double range = s.data.col(j).maxCoeff() - s.data.col(j).minCoeff();
      worst = std::max(worst, (back.col(j) - s.data.col(j)).cwiseAbs().maxCoeff() / range);
    }
    c.check(worst <= 1e-5, "round trip: max error " + num(worst, 3) + " * range <= 1e-5 * range");
    double ortho = 0;
    for (const auto& layer : model.layers) ortho = std::max(ortho, rbig::orthogonality_error(layer.rotation));
    rbig::Rng rr(95);
    for (int d : {2, 10, 100}) ortho = std::max(ortho, rbig::orthogonality_error(rbig::random_rotation(d, rr)));
    c.check(ortho <= 1e-10, "rotation orthogonality: " + num(ortho, 3) + " <= 1e-10");
  }
  {
    rbig::BenchmarkRequest req;
    req.measure = Measure::kl;
    req.family = Family::gaussian_pair_mean;
    req.dims = {3};
    req.samples = {2000};
    req.trials = 2;
    req.estimators = {EstimatorId::rbig, EstimatorId::expf, EstimatorId::knn};
    req.seed = kMasterSeed;
    const auto a = rbig::reports_to_json(rbig::run_benchmark(req), {.include_timing = false});
    const auto b = rbig::reports_to_json(rbig::run_benchmark(req), {.include_timing = false});
    c.check(a == b, "full-pipeline determinism: two runs give byte-identical reports");
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path report_path = argc > 1 ? argv[1] : "acceptance_report.txt";
  try {
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot write " + report_path.string());
    const std::vector<std::function<Criterion()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                           criterion6, criterion7, criterion8, criterion9};
    // oracles first, then the table runs
    for (std::size_t i : {7u, 8u, 0u, 1u, 2u, 3u, 4u, 5u, 6u}) {
      const std::string text = criteria[i]().render();
      std::cout << text << std::flush;
      out << text << std::flush;
    }
    auto json_path = report_path;
    json_path.replace_extension(".json");
    rbig::emit_report(all_reports, rbig::ReportFormat::json, json_path.string());
    std::cout << "benchmark reports: " << json_path.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "acceptance harness error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
