#include "rbig/rbig.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "rbig/errors.hpp"
#include "rbig/kernels.hpp"
#include "rbig/log.hpp"
#include "rbig/special_functions.hpp"

namespace rbig {

void RbigConfig::validate() const {
  if (max_layers < 1) throw UsageError("rbig config: max_layers must be >= 1");
  if (patience < 1) throw UsageError("rbig config: patience must be >= 1");
  if (noise_floor_repeats < 2) throw UsageError("rbig config: noise_floor_repeats must be >= 2");
  if (!std::isfinite(noise_floor_multiplier)) throw UsageError("rbig config: noise_floor_multiplier must be finite");
  if (entropy.bins < 0) throw UsageError("rbig config: bins must be >= 0");
}

Nats RbigModel::total_correlation() const {
  Nats sum = 0.0;
  for (const auto& layer : layers) sum += layer.delta_t;
  return sum;
}

std::vector<Nats> RbigModel::delta_t() const {
  std::vector<Nats> out;
  out.reserve(layers.size());
  for (const auto& layer : layers) out.push_back(layer.delta_t);
  return out;
}

Nats FitTrace::total_correlation() const { return std::accumulate(delta_t.begin(), delta_t.end(), 0.0); }

Nats total_correlation_of_model(const RbigModel& model) { return model.total_correlation(); }

namespace {

void require_finite(const DataMatrix& data, const char* where) {
  if (!data.allFinite()) throw DataError(std::string(where) + ": data contains non-finite values");
}

Matrix next_rotation(const RbigConfig& config, const DataMatrix& gaussianized, Rng& rng) {
  const int d = static_cast<int>(gaussianized.cols());
  if (config.rotation == RotationKind::pca) return pca_rotation(gaussianized);
  return random_rotation(d, rng);
}

// Delta-T of one layer given the coordinates before and after the rotation.
Nats layer_delta(const RbigConfig& config, const DataMatrix& before, const DataMatrix& after) {
  // A single variable carries no dependence; the histogram bias would
  // otherwise accumulate layer after layer without ever crossing the floor.
  if (after.cols() == 1) return 0.0;
  const std::vector<double> post = kernels::column_entropies(after, config.entropy);
  Nats delta = 0.0;
  if (config.delta_reference == DeltaReference::estimated) {
    const std::vector<double> pre = kernels::column_entropies(before, config.entropy);
    for (std::size_t i = 0; i < post.size(); ++i) delta += pre[i] - post[i];
  } else {
    for (double h : post) delta += special::kStdNormalEntropy - h;
  }
  return delta;
}

}  // namespace

NullCalibration calibrate_null(long n, int d, const RbigConfig& config, Rng& rng) {
  config.validate();
  if (n < 8 || d < 1) throw DataError("calibrate_noise_floor: need n >= 8 and d >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(config.noise_floor_repeats));
  DataMatrix x(n, d);
  for (int rep = 0; rep < config.noise_floor_repeats; ++rep) {
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
    // One RBIG layer on independent data: whatever it reports is estimator noise.
    kernels::fit_gaussianize_columns(x, false);
    const Matrix rotation = next_rotation(config, x, rng);
    const DataMatrix rotated = x * rotation.transpose();
    stats.push_back(layer_delta(config, x, rotated));
  }
  const double count = static_cast<double>(stats.size());
  const double mean = std::accumulate(stats.begin(), stats.end(), 0.0) / count;
  double var = 0.0;
  for (double s : stats) var += (s - mean) * (s - mean);
  var /= count - 1.0;
  NullCalibration out;
  out.mean = mean;
  out.stddev = std::sqrt(var);
  out.floor = mean + config.noise_floor_multiplier * out.stddev;
  return out;
}

NullCalibration calibrate_null(long n, int d, const RbigConfig& config) {
  Rng rng(mix_seed(mix_seed(config.rng_seed ^ 0x6E6F697365ULL, static_cast<std::uint64_t>(n)),
                   static_cast<std::uint64_t>(d)));
  return calibrate_null(n, d, config, rng);
}

Nats calibrate_noise_floor(long n, int d, const RbigConfig& config, Rng& rng) {
  return calibrate_null(n, d, config, rng).floor;
}

Nats calibrate_noise_floor(long n, int d, const RbigConfig& config) { return calibrate_null(n, d, config).floor; }

FitTrace fit_trace(const DataMatrix& data, const RbigConfig& config, const FitOptions& options) {
  config.validate();
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (d < 1) throw DataError("rbig fit: data has no columns");
  if (n < 100) throw DataError("rbig fit: need at least 100 samples, got " + std::to_string(n));
  require_finite(data, "rbig fit");
  if (options.companion) {
    if (options.companion->cols() != d) throw DataError("rbig fit: companion dimension mismatch");
    require_finite(*options.companion, "rbig fit");
  }
  if (n <= d) {
    warn("rbig fit: N=" + std::to_string(n) + " <= D=" + std::to_string(d) + "; estimates will degrade");
  }

  FitTrace trace;
  if (options.noise_floor) {
    trace.noise_floor = *options.noise_floor;
  } else {
    const NullCalibration null = calibrate_null(n, static_cast<int>(d), config);
    trace.noise_floor = null.floor;
    if (config.subtract_null_bias) trace.null_bias = null.mean;
  }
  if (options.keep_layers) {
    trace.model.emplace();
    trace.model->dims = static_cast<int>(d);
    trace.model->n_fit_samples = n;
    trace.model->noise_floor = trace.noise_floor;
    trace.model->null_bias = trace.null_bias;
    trace.model->config = config;
  }

  DataMatrix x = data;
  if (options.companion) trace.companion = *options.companion;
  Rng rng(mix_seed(config.rng_seed, 0x726F74ULL));
  const bool need_maps = options.keep_layers || options.companion != nullptr;

  int below = 0;
  trace.stop_reason = StopReason::max_layers;
  for (int layer = 0; layer < config.max_layers; ++layer) {
    std::vector<MarginalMap> maps;
    try {
      maps = kernels::fit_gaussianize_columns(x, need_maps);
    } catch (const DegenerateMarginalError& e) {
      throw FitError("rbig fit: degenerate column " + std::to_string(e.column()) + " at layer " +
                     std::to_string(layer) + " (constant values)");
    }
    if (trace.companion) kernels::apply_marginals(maps, *trace.companion, false);

    Matrix rotation = next_rotation(config, x, rng);
    DataMatrix rotated = x * rotation.transpose();
    const Nats raw = layer_delta(config, x, rotated);
    const Nats delta = raw - trace.null_bias;
    x = std::move(rotated);
    if (trace.companion) *trace.companion = (*trace.companion * rotation.transpose()).eval();

    trace.delta_t.push_back(delta);
    if (trace.model) trace.model->layers.push_back({std::move(maps), std::move(rotation), delta});

    // the stopping rule looks at the raw statistic against the null floor
    below = raw <= trace.noise_floor ? below + 1 : 0;
    if (below >= config.patience) {
      trace.stop_reason = StopReason::noise_floor_reached;
      break;
    }
  }
  if (trace.model) trace.model->stop_reason = trace.stop_reason;
  trace.gaussianized = std::move(x);
  return trace;
}

RbigModel fit(const DataMatrix& data, const RbigConfig& config) {
  FitTrace trace = fit_trace(data, config, {});
  return std::move(*trace.model);
}

DataMatrix transform(const RbigModel& model, const DataMatrix& data) {
  if (data.cols() != model.dims) {
    throw DataError("transform: data has " + std::to_string(data.cols()) + " columns, model expects " +
                    std::to_string(model.dims));
  }
  require_finite(data, "transform");
  DataMatrix x = data;
  for (const auto& layer : model.layers) {
    kernels::apply_marginals(layer.maps, x, false);
    x = (x * layer.rotation.transpose()).eval();
  }
  return x;
}

DataMatrix inverse_transform(const RbigModel& model, const DataMatrix& data) {
  if (data.cols() != model.dims) {
    throw DataError("inverse_transform: data has " + std::to_string(data.cols()) +
                    " columns, model expects " + std::to_string(model.dims));
  }
  require_finite(data, "inverse_transform");
  DataMatrix x = data;
  for (auto it = model.layers.rbegin(); it != model.layers.rend(); ++it) {
    x = (x * it->rotation).eval();
    kernels::apply_marginals(it->maps, x, true);
  }
  return x;
}

std::string to_string(RotationKind kind) {
  return kind == RotationKind::pca ? "pca" : "random_orthogonal";
}

std::string to_string(StopReason reason) {
  return reason == StopReason::noise_floor_reached ? "noise_floor_reached" : "max_layers";
}

std::string to_string(EntropyEstimator estimator) {
  return estimator == EntropyEstimator::spacing ? "spacing" : "histogram_mm";
}

std::string to_string(DeltaReference reference) {
  return reference == DeltaReference::closed_form ? "closed_form" : "estimated";
}

RotationKind parse_rotation_kind(const std::string& text) {
  if (text == "random_orthogonal" || text == "random") return RotationKind::random_orthogonal;
  if (text == "pca") return RotationKind::pca;
  throw UsageError("unknown rotation kind '" + text + "' (expected random_orthogonal or pca)");
}

StopReason parse_stop_reason(const std::string& text) {
  if (text == "noise_floor_reached") return StopReason::noise_floor_reached;
  if (text == "max_layers") return StopReason::max_layers;
  throw DataError("unknown stop reason '" + text + "'");
}

EntropyEstimator parse_entropy_estimator(const std::string& text) {
  if (text == "histogram_mm" || text == "histogram") return EntropyEstimator::histogram_mm;
  if (text == "spacing") return EntropyEstimator::spacing;
  throw UsageError("unknown entropy estimator '" + text + "' (expected histogram_mm or spacing)");
}

DeltaReference parse_delta_reference(const std::string& text) {
  if (text == "closed_form") return DeltaReference::closed_form;
  if (text == "estimated") return DeltaReference::estimated;
  throw UsageError("unknown delta reference '" + text + "' (expected closed_form or estimated)");
}

}  // namespace rbig
