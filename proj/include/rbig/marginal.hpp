#pragma once

#include <span>
#include <vector>

namespace rbig {

enum class EntropyEstimator {
  histogram_mm,  ///< equal-width histogram + Miller-Madow + ln(bin width)
  spacing,       ///< m-spacing (Vasicek) with Ebrahimi boundary correction
};

struct EntropyOptions {
  EntropyEstimator estimator = EntropyEstimator::histogram_mm;
  /// Histogram bins (0 = ceil(sqrt(N))) or spacing window m (0 = round(sqrt(N)/2)).
  int bins = 0;
};

/// Fitted monotone map from one coordinate to N(0, 1): empirical CDF with
/// mid-rank plotting positions, linear interpolation between knots, then the
/// standard normal quantile.
///
/// Knots are the sorted distinct sample values. Tied samples share one knot
/// whose probability is the average of their plotting positions. Outside the
/// knot range the CDF continues linearly with the boundary-segment slope and
/// is then clamped to [clamp_eps, 1 - clamp_eps].
class MarginalMap {
 public:
  MarginalMap() = default;

  /// Builds a map from stored knots (used by model loading). Validates
  /// strict monotonicity and the clamp range.
  MarginalMap(std::vector<double> knots_x, std::vector<double> knots_p, double clamp_eps);

  /// Fits on a sample; throws DegenerateMarginalError for fewer than two
  /// distinct values and DataError for non-finite input.
  static MarginalMap fit(std::span<const double> sample);

  /// Fits and writes the forward image of the fitting sample into `out`
  /// (same order as `sample`). Equivalent to fit() followed by forward() but
  /// reuses the sort.
  static MarginalMap fit_transform(std::span<const double> sample, std::span<double> out);

  double forward(double value) const;
  double inverse(double z) const;
  void forward(std::span<const double> values, std::span<double> out) const;
  void inverse(std::span<const double> values, std::span<double> out) const;

  /// Empirical CDF (before the quantile) at `value`, clamped.
  double cdf(double value) const;

  const std::vector<double>& knots_x() const { return knots_x_; }
  const std::vector<double>& knots_p() const { return knots_p_; }
  double clamp_eps() const { return clamp_eps_; }
  double slope_low() const { return slope_low_; }
  double slope_high() const { return slope_high_; }
  std::size_t size() const { return knots_x_.size(); }

 private:
  void finish();

  std::vector<double> knots_x_;
  std::vector<double> knots_p_;
  std::vector<double> knots_z_;  // quantile of knots_p_, cached
  double clamp_eps_ = 0.0;
  double slope_low_ = 0.0;
  double slope_high_ = 0.0;
};

std::vector<double> gaussianize_forward(const MarginalMap& map, std::span<const double> values);
std::vector<double> gaussianize_inverse(const MarginalMap& map, std::span<const double> values);

/// Differential entropy of a univariate sample in nats. Requires N >= 8.
/// A zero-range sample returns -infinity (degenerate marginal).
double marginal_entropy(std::span<const double> sample, const EntropyOptions& options = {});

/// KL divergence of the sample's distribution from N(0, 1), clamped at 0.
/// Throws DegenerateMarginalError on a zero-range sample.
double marginal_kl_to_std_normal(std::span<const double> sample,
                                 const EntropyOptions& options = {});

}  // namespace rbig
