#pragma once

// Scalar special functions used by the marginal transforms and by the
// analytic ground truths. All inputs are checked; out-of-domain arguments
// throw rbig::DomainError instead of returning NaN.

namespace rbig::special {

/// ln Gamma(x) for x > 0. Upward recurrence to x >= 10, then Stirling series.
double log_gamma(double x);

/// psi(x) for x > 0. Upward recurrence to x >= 6, then asymptotic series.
double digamma(double x);

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
double log_beta(double a, double b);

/// Standard normal CDF via erfc.
double std_normal_cdf(double x);

/// Standard normal upper tail 1 - Phi(x), accurate for large x.
double std_normal_sf(double x);

/// Standard normal log-density.
double std_normal_log_pdf(double x);

/// Inverse of std_normal_cdf on the open interval (0, 1).
double std_normal_quantile(double p);

/// ln of the volume of the unit ball in d dimensions.
double log_unit_ball_volume(int d);

/// 0.5 * ln(2 pi e): entropy of N(0, 1) in nats.
inline constexpr double kStdNormalEntropy = 1.4189385332046727418;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

}  // namespace rbig::special
