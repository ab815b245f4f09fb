#include "rbig/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "rbig/errors.hpp"
#include "rbig/special_functions.hpp"

namespace rbig {
namespace {

void require_finite(double v, const char* where) {
  if (!std::isfinite(v)) throw DataError(std::string(where) + ": non-finite value");
}

void require_finite(std::span<const double> values, const char* where) {
  for (double v : values) require_finite(v, where);
}

}  // namespace

MarginalMap::MarginalMap(std::vector<double> knots_x, std::vector<double> knots_p,
                         double clamp_eps)
    : knots_x_(std::move(knots_x)), knots_p_(std::move(knots_p)), clamp_eps_(clamp_eps) {
  if (knots_x_.size() != knots_p_.size()) throw DataError("marginal map: knot arrays differ in length");
  if (knots_x_.size() < 2) throw DegenerateMarginalError("marginal map: fewer than two knots");
  if (!(clamp_eps_ > 0.0 && clamp_eps_ < 0.5)) throw DataError("marginal map: clamp_eps outside (0, 0.5)");
  for (std::size_t k = 0; k < knots_x_.size(); ++k) {
    require_finite(knots_x_[k], "marginal map");
    require_finite(knots_p_[k], "marginal map");
    if (knots_p_[k] < clamp_eps_ || knots_p_[k] > 1.0 - clamp_eps_) {
      throw DataError("marginal map: knot probability outside the clamp range");
    }
    if (k > 0 && !(knots_x_[k] > knots_x_[k - 1] && knots_p_[k] > knots_p_[k - 1])) {
      throw DataError("marginal map: knots are not strictly increasing at index " +
                      std::to_string(k));
    }
  }
  finish();
}

void MarginalMap::finish() {
  const std::size_t k = knots_x_.size();
  slope_low_ = (knots_p_[1] - knots_p_[0]) / (knots_x_[1] - knots_x_[0]);
  slope_high_ = (knots_p_[k - 1] - knots_p_[k - 2]) / (knots_x_[k - 1] - knots_x_[k - 2]);
  knots_z_.resize(k);
  for (std::size_t i = 0; i < k; ++i) knots_z_[i] = special::std_normal_quantile(knots_p_[i]);
}

MarginalMap MarginalMap::fit(std::span<const double> sample) {
  std::vector<double> scratch(sample.size());
  return fit_transform(sample, scratch);
}

MarginalMap MarginalMap::fit_transform(std::span<const double> sample, std::span<double> out) {
  const std::size_t n = sample.size();
  if (out.size() != n) throw DataError("marginal fit: output size mismatch");
  if (n < 2) throw DegenerateMarginalError("marginal fit: need at least two samples");
  require_finite(sample, "marginal fit");

  std::vector<std::pair<double, std::uint32_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = {sample[i], static_cast<std::uint32_t>(i)};
  std::sort(order.begin(), order.end());
  if (order.front().first == order.back().first) {
    throw DegenerateMarginalError("marginal fit: constant sample (zero range)");
  }

  MarginalMap map;
  map.clamp_eps_ = 0.5 / static_cast<double>(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<std::size_t> run_starts;
  for (std::size_t r = 0; r < n;) {
    std::size_t end = r + 1;
    while (end < n && order[end].first == order[r].first) ++end;
    // 1-based ranks r+1 .. end share the mean plotting position.
    const double mean_rank = 0.5 * static_cast<double>(r + 1 + end);
    const double p = std::clamp((mean_rank - 0.5) * inv_n, map.clamp_eps_, 1.0 - map.clamp_eps_);
    map.knots_x_.push_back(order[r].first);
    map.knots_p_.push_back(p);
    run_starts.push_back(r);
    r = end;
  }
  map.finish();

  for (std::size_t k = 0; k < run_starts.size(); ++k) {
    const std::size_t end = k + 1 < run_starts.size() ? run_starts[k + 1] : n;
    for (std::size_t r = run_starts[k]; r < end; ++r) out[order[r].second] = map.knots_z_[k];
  }
  return map;
}

double MarginalMap::cdf(double value) const {
  require_finite(value, "gaussianize_forward");
  const std::size_t last = knots_x_.size() - 1;
  double p;
  if (value <= knots_x_.front()) {
    p = knots_p_.front() + slope_low_ * (value - knots_x_.front());
  } else if (value >= knots_x_[last]) {
    p = knots_p_[last] + slope_high_ * (value - knots_x_[last]);
  } else {
    const auto it = std::upper_bound(knots_x_.begin(), knots_x_.end(), value);
    const std::size_t k = static_cast<std::size_t>(it - knots_x_.begin()) - 1;
    const double t = (value - knots_x_[k]) / (knots_x_[k + 1] - knots_x_[k]);
    p = knots_p_[k] + t * (knots_p_[k + 1] - knots_p_[k]);
  }
  return std::clamp(p, clamp_eps_, 1.0 - clamp_eps_);
}

double MarginalMap::forward(double value) const {
  require_finite(value, "gaussianize_forward");
  const auto it = std::lower_bound(knots_x_.begin(), knots_x_.end(), value);
  if (it != knots_x_.end() && *it == value) {
    return knots_z_[static_cast<std::size_t>(it - knots_x_.begin())];
  }
  return special::std_normal_quantile(cdf(value));
}

double MarginalMap::inverse(double z) const {
  if (!std::isfinite(z)) throw DataError("gaussianize_inverse: non-finite value");
  const std::size_t last = knots_z_.size() - 1;
  const double p = special::std_normal_cdf(z);
  if (z <= knots_z_.front()) {
    if (z == knots_z_.front()) return knots_x_.front();
    return knots_x_.front() + (p - knots_p_.front()) / slope_low_;
  }
  if (z >= knots_z_[last]) {
    if (z == knots_z_[last]) return knots_x_[last];
    return knots_x_[last] + (p - knots_p_[last]) / slope_high_;
  }
  const auto it = std::upper_bound(knots_z_.begin(), knots_z_.end(), z);
  const std::size_t k = static_cast<std::size_t>(it - knots_z_.begin()) - 1;
  const double t = std::clamp((p - knots_p_[k]) / (knots_p_[k + 1] - knots_p_[k]), 0.0, 1.0);
  return knots_x_[k] + t * (knots_x_[k + 1] - knots_x_[k]);
}

void MarginalMap::forward(std::span<const double> values, std::span<double> out) const {
  if (out.size() != values.size()) throw DataError("gaussianize_forward: output size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = forward(values[i]);
}

void MarginalMap::inverse(std::span<const double> values, std::span<double> out) const {
  if (out.size() != values.size()) throw DataError("gaussianize_inverse: output size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = inverse(values[i]);
}

std::vector<double> gaussianize_forward(const MarginalMap& map, std::span<const double> values) {
  std::vector<double> out(values.size());
  map.forward(values, out);
  return out;
}

std::vector<double> gaussianize_inverse(const MarginalMap& map, std::span<const double> values) {
  std::vector<double> out(values.size());
  map.inverse(values, out);
  return out;
}

namespace {

double histogram_entropy(std::span<const double> sample, int bins_override) {
  const std::size_t n = sample.size();
  const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return -std::numeric_limits<double>::infinity();
  const std::size_t bins =
      bins_override > 0 ? static_cast<std::size_t>(bins_override)
                        : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const double width = (hi - lo) / static_cast<double>(bins);
  const double scale = static_cast<double>(bins) / (hi - lo);
  std::vector<std::uint32_t> counts(bins, 0);
  for (double v : sample) {
    auto b = static_cast<std::size_t>((v - lo) * scale);
    if (b >= bins) b = bins - 1;
    ++counts[b];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double h = 0.0;
  std::size_t occupied = 0;
  for (std::uint32_t c : counts) {
    if (c == 0) continue;
    ++occupied;
    const double p = static_cast<double>(c) * inv_n;
    h -= p * std::log(p);
  }
  h += static_cast<double>(occupied - 1) * 0.5 * inv_n;
  return h + std::log(width);
}

// m-spacing estimator with the Ebrahimi et al. boundary weights.
double spacing_entropy(std::span<const double> sample, int window_override) {
  const std::size_t n = sample.size();
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double range = sorted.back() - sorted.front();
  if (!(range > 0.0)) return -std::numeric_limits<double>::infinity();
  std::size_t m = window_override > 0
                      ? static_cast<std::size_t>(window_override)
                      : static_cast<std::size_t>(std::lround(0.5 * std::sqrt(static_cast<double>(n))));
  m = std::clamp<std::size_t>(m, 1, n / 2);
  const double floor_gap = range * 1e-12;
  const double dm = static_cast<double>(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t hi = std::min(i + m, n - 1);
    const std::size_t lo = i >= m ? i - m : 0;
    double c;
    if (i < m) {
      c = 1.0 + static_cast<double>(i) / dm;
    } else if (i + m >= n) {
      c = 1.0 + static_cast<double>(n - 1 - i) / dm;
    } else {
      c = 2.0;
    }
    const double gap = std::max(sorted[hi] - sorted[lo], floor_gap);
    acc += std::log(static_cast<double>(n) * gap / (c * dm));
  }
  return acc / static_cast<double>(n);
}

}  // namespace

double marginal_entropy(std::span<const double> sample, const EntropyOptions& options) {
  if (sample.size() < 8) throw DataError("marginal_entropy: need at least 8 samples");
  require_finite(sample, "marginal_entropy");
  switch (options.estimator) {
    case EntropyEstimator::histogram_mm:
      return histogram_entropy(sample, options.bins);
    case EntropyEstimator::spacing:
      return spacing_entropy(sample, options.bins);
  }
  return histogram_entropy(sample, options.bins);
}

double marginal_kl_to_std_normal(std::span<const double> sample, const EntropyOptions& options) {
  const double h = marginal_entropy(sample, options);
  if (std::isinf(h)) throw DegenerateMarginalError("marginal_kl_to_std_normal: constant sample");
  double second_moment = 0.0;
  for (double v : sample) second_moment += v * v;
  second_moment /= static_cast<double>(sample.size());
  const double kl = -h + 0.5 * second_moment + special::kLogSqrt2Pi;
  return std::max(kl, 0.0);
}

}  // namespace rbig
