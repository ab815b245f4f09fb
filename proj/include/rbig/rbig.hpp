#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbig/marginal.hpp"
#include "rbig/rotation.hpp"
#include "rbig/types.hpp"

namespace rbig {

enum class RotationKind { random_orthogonal, pca };
enum class StopReason { noise_floor_reached, max_layers };

/// What each layer's marginal entropies are compared against.
enum class DeltaReference {
  closed_form,  ///< 1/2 ln(2 pi e) for every coordinate
  estimated,    ///< the same entropy estimator applied to the layer's
                ///< pre-rotation (marginally Gaussianized) coordinates
};

struct RbigConfig {
  RotationKind rotation = RotationKind::pca;
  int max_layers = 100;
  int patience = 5;
  double noise_floor_multiplier = 2.0;
  int noise_floor_repeats = 10;
  EntropyOptions entropy;
  DeltaReference delta_reference = DeltaReference::closed_form;
  /// Subtract the calibrated null mean of the per-layer statistic from every
  /// layer, so that estimator bias does not accumulate with depth.
  bool subtract_null_bias = false;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct RbigLayer {
  std::vector<MarginalMap> maps;
  Matrix rotation;  ///< applied to column vectors: x_next = rotation * psi(x)
  Nats delta_t = 0.0;
};

/// A fitted Gaussianization transform: the layer stack plus the per-layer
/// total-correlation reductions recorded while fitting.
struct RbigModel {
  std::vector<RbigLayer> layers;
  int dims = 0;
  long n_fit_samples = 0;
  Nats noise_floor = 0.0;
  Nats null_bias = 0.0;  ///< subtracted from every layer's raw statistic (0 when disabled)
  StopReason stop_reason = StopReason::max_layers;
  RbigConfig config;

  Nats total_correlation() const;
  std::vector<Nats> delta_t() const;
};

/// Everything a fit produces except (optionally) the stored layers. The
/// estimators use this directly so that large fits need not keep every
/// layer's knots.
struct FitTrace {
  std::vector<Nats> delta_t;
  Nats noise_floor = 0.0;
  Nats null_bias = 0.0;
  StopReason stop_reason = StopReason::max_layers;
  DataMatrix gaussianized;                ///< the fitting data after the last layer
  std::optional<DataMatrix> companion;    ///< companion data pushed through the same layers
  std::optional<RbigModel> model;         ///< present when layers were kept

  Nats total_correlation() const;
  int n_layers() const { return static_cast<int>(delta_t.size()); }
};

struct FitOptions {
  bool keep_layers = true;
  const DataMatrix* companion = nullptr;  ///< replayed through each layer as it is fitted
  std::optional<Nats> noise_floor;        ///< skip calibration and use this floor (null bias 0)
};

/// Distribution of the per-layer statistic on independent standard-normal
/// data of the fit's shape.
struct NullCalibration {
  Nats mean = 0.0;
  Nats stddev = 0.0;
  Nats floor = 0.0;  ///< mean + multiplier * stddev
};

/// Fits RBIG and returns the full model.
RbigModel fit(const DataMatrix& data, const RbigConfig& config);

/// Fits RBIG with control over what is retained.
FitTrace fit_trace(const DataMatrix& data, const RbigConfig& config, const FitOptions& options = {});

/// Delta-T level indistinguishable from zero for an n x d fit: mean plus
/// multiplier times standard deviation of the per-layer statistic over
/// independent standard-normal data.
NullCalibration calibrate_null(long n, int d, const RbigConfig& config, Rng& rng);
/// Null calibration with the stream derived from config.rng_seed, n and d.
NullCalibration calibrate_null(long n, int d, const RbigConfig& config);
Nats calibrate_noise_floor(long n, int d, const RbigConfig& config, Rng& rng);

/// Noise floor with the stream derived from config.rng_seed, n and d.
Nats calibrate_noise_floor(long n, int d, const RbigConfig& config);

DataMatrix transform(const RbigModel& model, const DataMatrix& data);
DataMatrix inverse_transform(const RbigModel& model, const DataMatrix& data);
Nats total_correlation_of_model(const RbigModel& model);

std::string to_string(RotationKind kind);
std::string to_string(StopReason reason);
std::string to_string(EntropyEstimator estimator);
std::string to_string(DeltaReference reference);
RotationKind parse_rotation_kind(const std::string& text);
StopReason parse_stop_reason(const std::string& text);
EntropyEstimator parse_entropy_estimator(const std::string& text);
DeltaReference parse_delta_reference(const std::string& text);

}  // namespace rbig
