#include "rbig/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <span>

#include "rbig/errors.hpp"
#include "rbig/kernels.hpp"

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

RbigConfig derived(const RbigConfig& config, std::uint64_t stream) {
  RbigConfig out = config;
  out.rng_seed = mix_seed(config.rng_seed, stream);
  return out;
}

FitTrace lean_fit(const DataMatrix& data, const RbigConfig& config, const DataMatrix* companion = nullptr) {
  FitOptions options;
  options.keep_layers = false;
  options.companion = companion;
  return fit_trace(data, config, options);
}

Nats sum_marginal_entropies(const DataMatrix& data, const EntropyOptions& options) {
  Nats sum = 0.0;
  const std::vector<double> h = kernels::column_entropies(data, options);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (std::isinf(h[i])) {
      throw DegenerateMarginalError("entropy: column " + std::to_string(i) + " is constant",
                                    static_cast<long>(i));
    }
    sum += h[i];
  }
  return sum;
}

}  // namespace

std::string to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::rbig: return "rbig";
    case EstimatorId::expf: return "expf";
    case EstimatorId::knn: return "knn";
  }
  return "rbig";
}

EstimatorId parse_estimator_id(const std::string& text) {
  if (text == "rbig") return EstimatorId::rbig;
  if (text == "expf") return EstimatorId::expf;
  if (text == "knn") return EstimatorId::knn;
  throw UsageError("unknown estimator '" + text + "' (expected rbig, expf or knn)");
}

MeasureEstimate estimate_total_correlation(const DataMatrix& data, const RbigConfig& config) {
  Stopwatch clock;
  const FitTrace trace = lean_fit(data, config);
  MeasureEstimate out;
  out.value = trace.total_correlation();
  out.n_layers_used = trace.n_layers();
  out.noise_floor = trace.noise_floor;
  out.wall_time = clock.seconds();
  return out;
}

MeasureEstimate estimate_entropy(const DataMatrix& data, const RbigConfig& config) {
  Stopwatch clock;
  if (data.rows() < 100) throw DataError("estimate_entropy: need at least 100 samples");
  if (!data.allFinite()) throw DataError("estimate_entropy: non-finite data");
  const Nats marginals = sum_marginal_entropies(data, config.entropy);
  MeasureEstimate out = estimate_total_correlation(data, config);
  out.value = marginals - out.value;
  out.wall_time = clock.seconds();
  return out;
}

MeasureEstimate estimate_kl(const DataMatrix& y_data, const DataMatrix& x_data, const RbigConfig& config) {
  Stopwatch clock;
  if (y_data.cols() != x_data.cols()) throw DataError("estimate_kl: x and y differ in dimension");
  if (y_data.rows() < 100) throw DataError("estimate_kl: y needs at least 100 samples");
  const FitTrace gx = lean_fit(x_data, config, &y_data);
  const DataMatrix& y_prime = *gx.companion;
  const FitTrace gy = lean_fit(y_prime, derived(config, 2));

  Nats marginal = 0.0;
  for (Eigen::Index j = 0; j < y_prime.cols(); ++j) {
    marginal += marginal_kl_to_std_normal({y_prime.col(j).data(), static_cast<std::size_t>(y_prime.rows())},
                                          config.entropy);
  }
  MeasureEstimate out;
  out.value = std::max(0.0, gy.total_correlation() + marginal);
  out.n_layers_used = gx.n_layers() + gy.n_layers();
  out.noise_floor = gy.noise_floor;
  out.wall_time = clock.seconds();
  return out;
}

MeasureEstimate estimate_mutual_information(const DataMatrix& x_data, const DataMatrix& y_data,
                                            const RbigConfig& config) {
  Stopwatch clock;
  if (x_data.rows() != y_data.rows()) throw DataError("estimate_mutual_information: row counts differ");
  const FitTrace gx = lean_fit(x_data, derived(config, 1));
  const FitTrace gy = lean_fit(y_data, derived(config, 2));
  DataMatrix z(x_data.rows(), x_data.cols() + y_data.cols());
  z << gx.gaussianized, gy.gaussianized;
  const FitTrace gz = lean_fit(z, derived(config, 3));
  MeasureEstimate out;
  out.value = gz.total_correlation();
  out.n_layers_used = gx.n_layers() + gy.n_layers() + gz.n_layers();
  out.noise_floor = gz.noise_floor;
  out.wall_time = clock.seconds();
  return out;
}

MeasureEstimate estimate_mutual_information_via_entropies(const DataMatrix& x_data, const DataMatrix& y_data,
                                                          const RbigConfig& config) {
  Stopwatch clock;
  if (x_data.rows() != y_data.rows()) throw DataError("estimate_mutual_information: row counts differ");
  DataMatrix joint(x_data.rows(), x_data.cols() + y_data.cols());
  joint << x_data, y_data;
  const MeasureEstimate hx = estimate_entropy(x_data, derived(config, 1));
  const MeasureEstimate hy = estimate_entropy(y_data, derived(config, 2));
  const MeasureEstimate hxy = estimate_entropy(joint, derived(config, 3));
  MeasureEstimate out;
  out.value = hx.value + hy.value - hxy.value;
  out.n_layers_used = hx.n_layers_used + hy.n_layers_used + hxy.n_layers_used;
  out.noise_floor = hxy.noise_floor;
  out.wall_time = clock.seconds();
  return out;
}

}  // namespace rbig
