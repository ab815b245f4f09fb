#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "rbig/errors.hpp"
#include "rbig/estimators.hpp"
#include "rbig/kernels.hpp"
#include "rbig/log.hpp"
#include "rbig/special_functions.hpp"
#include "rbig/synth.hpp"

namespace rbig {
namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

MeasureEstimate finish(Nats value, EstimatorId id, const Stopwatch& clock) {
  MeasureEstimate out;
  out.value = value;
  out.estimator_id = id;
  out.wall_time = clock.seconds();
  return out;
}

void check_data(const DataMatrix& data, const char* where) {
  if (data.rows() < 2 || data.cols() < 1) throw DataError(std::string(where) + ": empty data");
  if (!data.allFinite()) throw DataError(std::string(where) + ": non-finite data");
}

double log_det(const Matrix& cov) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericError("expf: covariance is singular after ridge");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

GaussianMoments gaussian_moments(const DataMatrix& data) {
  check_data(data, "gaussian_moments");
  GaussianMoments m;
  m.mean = data.colwise().mean();
  const DataMatrix centered = data.rowwise() - m.mean.transpose();
  m.cov = (centered.transpose() * centered) / static_cast<double>(data.rows() - 1);
  Eigen::LLT<Matrix> llt(m.cov);
  if (data.rows() <= data.cols() || llt.info() != Eigen::Success) {
    const double ridge = 1e-10 * m.cov.trace() / static_cast<double>(m.cov.rows());
    m.cov.diagonal().array() += ridge;
  }
  return m;
}

MeasureEstimate expf_entropy(const DataMatrix& data) {
  Stopwatch clock;
  const double d = static_cast<double>(data.cols());
  const GaussianMoments m = gaussian_moments(data);
  const Nats h = 0.5 * d * (1.0 + std::log(2.0 * std::numbers::pi)) + 0.5 * log_det(m.cov);
  return finish(h, EstimatorId::expf, clock);
}

MeasureEstimate expf_total_correlation(const DataMatrix& data) {
  Stopwatch clock;
  const GaussianMoments m = gaussian_moments(data);
  const Nats t = 0.5 * m.cov.diagonal().array().log().sum() - 0.5 * log_det(m.cov);
  return finish(t, EstimatorId::expf, clock);
}

MeasureEstimate expf_kl(const DataMatrix& y_data, const DataMatrix& x_data) {
  Stopwatch clock;
  if (y_data.cols() != x_data.cols()) throw DataError("expf_kl: x and y differ in dimension");
  const GaussianMoments my = gaussian_moments(y_data);
  const GaussianMoments mx = gaussian_moments(x_data);
  return finish(gaussian_kl(my.mean, my.cov, mx.mean, mx.cov), EstimatorId::expf, clock);
}

MeasureEstimate expf_mutual_information(const DataMatrix& x_data, const DataMatrix& y_data) {
  Stopwatch clock;
  if (x_data.rows() != y_data.rows()) throw DataError("expf_mutual_information: row counts differ");
  DataMatrix joint(x_data.rows(), x_data.cols() + y_data.cols());
  joint << x_data, y_data;
  const GaussianMoments m = gaussian_moments(joint);
  const Eigen::Index dx = x_data.cols();
  const Eigen::Index dy = y_data.cols();
  const Nats mi = 0.5 * (log_det(m.cov.topLeftCorner(dx, dx)) + log_det(m.cov.bottomRightCorner(dy, dy)) -
                         log_det(m.cov));
  return finish(mi, EstimatorId::expf, clock);
}

namespace {

// k-th neighbour distance for 1D data by walking outwards in sorted order.
std::vector<double> knn_distances_1d(std::span<const double> values, int k) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = values[order[i]];
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t left = r;
    std::size_t right = r;
    double dist = 0.0;
    for (int step = 0; step < k; ++step) {
      const double dl = left > 0 ? sorted[r] - sorted[left - 1] : std::numeric_limits<double>::infinity();
      const double dr = right + 1 < n ? sorted[right + 1] - sorted[r] : std::numeric_limits<double>::infinity();
      if (dl <= dr) {
        --left;
        dist = dl;
      } else {
        ++right;
        dist = dr;
      }
    }
    out[order[r]] = dist;
  }
  return out;
}

std::vector<double> self_knn(const DataMatrix& data, int k) {
  if (data.cols() == 1) return knn_distances_1d({data.data(), static_cast<std::size_t>(data.rows())}, k);
  return kernels::knn_distances(data, data, k, true);
}

bool has_zero(const std::vector<double>& v) {
  return std::any_of(v.begin(), v.end(), [](double x) { return x <= 0.0; });
}

// Perturbs duplicated points by 1e-12 of the data scale so every distance
// is positive.
DataMatrix jitter(const DataMatrix& data, const char* where, std::uint64_t salt = 0) {
  warn(std::string(where) + ": duplicate points give zero neighbour distances; perturbing by 1e-12 * scale");
  const double scale = std::max(1.0, data.cwiseAbs().maxCoeff());
  Rng rng(mix_seed(0x6A6974746572ULL, salt));
  std::normal_distribution<double> normal(0.0, 1.0);
  DataMatrix out = data;
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) += 1e-12 * scale * normal(rng);
  return out;
}

Nats kl_entropy(const DataMatrix& input, int k) {
  check_data(input, "knn_entropy");
  if (k < 1 || input.rows() <= k) throw DataError("knn_entropy: need N > k >= 1");
  std::vector<double> eps = self_knn(input, k);
  if (has_zero(eps)) eps = self_knn(jitter(input, "knn_entropy"), k);
  const double n = static_cast<double>(input.rows());
  const double d = static_cast<double>(input.cols());
  double log_sum = 0.0;
  for (double e : eps) log_sum += std::log(e);
  return special::digamma(n) - special::digamma(k) + special::log_unit_ball_volume(static_cast<int>(input.cols())) +
         d / n * log_sum;
}

}  // namespace

MeasureEstimate knn_entropy(const DataMatrix& data, int k) {
  Stopwatch clock;
  return finish(kl_entropy(data, k), EstimatorId::knn, clock);
}

MeasureEstimate knn_total_correlation(const DataMatrix& data, int k) {
  Stopwatch clock;
  Nats marginal = 0.0;
  for (Eigen::Index j = 0; j < data.cols(); ++j) marginal += kl_entropy(data.col(j), k);
  return finish(marginal - kl_entropy(data, k), EstimatorId::knn, clock);
}

MeasureEstimate knn_mutual_information(const DataMatrix& x_data, const DataMatrix& y_data, int k) {
  Stopwatch clock;
  if (x_data.rows() != y_data.rows()) throw DataError("knn_mutual_information: row counts differ");
  DataMatrix joint(x_data.rows(), x_data.cols() + y_data.cols());
  joint << x_data, y_data;
  return finish(kl_entropy(x_data, k) + kl_entropy(y_data, k) - kl_entropy(joint, k), EstimatorId::knn, clock);
}

MeasureEstimate knn_kl(const DataMatrix& y_data, const DataMatrix& x_data, int k) {
  Stopwatch clock;
  check_data(y_data, "knn_kl");
  check_data(x_data, "knn_kl");
  if (y_data.cols() != x_data.cols()) throw DataError("knn_kl: x and y differ in dimension");
  if (k < 1 || y_data.rows() <= k || x_data.rows() < k) throw DataError("knn_kl: need N > k >= 1");
  DataMatrix y = y_data;
  DataMatrix x = x_data;
  std::vector<double> rho = kernels::knn_distances(y, y, k, true);
  std::vector<double> nu = kernels::knn_distances(y, x, k, false);
  if (has_zero(rho) || has_zero(nu)) {
    y = jitter(y, "knn_kl");
    x = jitter(x, "knn_kl", 1);
    rho = kernels::knn_distances(y, y, k, true);
    nu = kernels::knn_distances(y, x, k, false);
  }
  const double n = static_cast<double>(y.rows());
  const double m = static_cast<double>(x.rows());
  const double d = static_cast<double>(y.cols());
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) acc += std::log(nu[i] / rho[i]);
  return finish(d / n * acc + std::log(m / (n - 1.0)), EstimatorId::knn, clock);
}

}  // namespace rbig
