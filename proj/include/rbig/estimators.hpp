#pragma once

// RBIG-based information measures and the expF / kNN baselines.

#include <string>

#include "rbig/rbig.hpp"
#include "rbig/types.hpp"

namespace rbig {

enum class EstimatorId { rbig, expf, knn };

struct MeasureEstimate {
  Nats value = 0.0;
  EstimatorId estimator_id = EstimatorId::rbig;
  int n_layers_used = 0;   ///< rbig only (summed over every fit involved)
  Nats noise_floor = 0.0;  ///< rbig only (floor of the final fit)
  double wall_time = 0.0;  ///< seconds
};

std::string to_string(EstimatorId id);
EstimatorId parse_estimator_id(const std::string& text);

// ---- RBIG ---------------------------------------------------------------

/// Sum of the per-layer total-correlation reductions of one RBIG fit.
MeasureEstimate estimate_total_correlation(const DataMatrix& data, const RbigConfig& config);

/// Sum of marginal entropies minus the RBIG total correlation.
MeasureEstimate estimate_entropy(const DataMatrix& data, const RbigConfig& config);

/// Divergence of y's distribution from x's: fit G_x on x, push y through it,
/// then T(G_x(y)) (second fit) plus the marginal divergences from N(0, 1).
/// Clamped at zero.
MeasureEstimate estimate_kl(const DataMatrix& y_data, const DataMatrix& x_data, const RbigConfig& config);

/// Total correlation of [G_x(x), G_y(y)]. Row counts must match.
MeasureEstimate estimate_mutual_information(const DataMatrix& x_data, const DataMatrix& y_data,
                                            const RbigConfig& config);

/// H(x) + H(y) - H([x, y]) with RBIG entropies. Diagnostics only: errors in
/// the three entropies do not cancel.
MeasureEstimate estimate_mutual_information_via_entropies(const DataMatrix& x_data, const DataMatrix& y_data,
                                                          const RbigConfig& config);

// ---- expF (Gaussian plug-in) -------------------------------------------

MeasureEstimate expf_entropy(const DataMatrix& data);
MeasureEstimate expf_total_correlation(const DataMatrix& data);
MeasureEstimate expf_kl(const DataMatrix& y_data, const DataMatrix& x_data);
MeasureEstimate expf_mutual_information(const DataMatrix& x_data, const DataMatrix& y_data);

/// Sample mean and unbiased covariance, with a 1e-10 * trace / D ridge when
/// the covariance is not positive definite.
struct GaussianMoments {
  Vector mean;
  Matrix cov;
};
GaussianMoments gaussian_moments(const DataMatrix& data);

// ---- Kozachenko-Leonenko kNN -------------------------------------------

inline constexpr int kDefaultKnnK = 3;

MeasureEstimate knn_entropy(const DataMatrix& data, int k = kDefaultKnnK);
MeasureEstimate knn_total_correlation(const DataMatrix& data, int k = kDefaultKnnK);
MeasureEstimate knn_mutual_information(const DataMatrix& x_data, const DataMatrix& y_data, int k = kDefaultKnnK);
/// Two-sample nearest-neighbour divergence of y's distribution from x's.
MeasureEstimate knn_kl(const DataMatrix& y_data, const DataMatrix& x_data, int k = kDefaultKnnK);

}  // namespace rbig
