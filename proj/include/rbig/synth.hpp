#pragma once

// Synthetic distributions with known information-theoretic measures.

#include <cstdint>
#include <map>
#include <string>

#include "rbig/rotation.hpp"
#include "rbig/types.hpp"

namespace rbig {

enum class Measure { tc, h, kl, mi };

enum class Family {
  gaussian_random_cov,
  rotated_uniform,
  student,
  gaussian_pair_mean,
  gaussian_pair_cov,
  gaussian_vs_student,
  student_vs_student,
  gaussian_mi,
  student_mi,
};

enum class TruthKind { analytic, semi_analytic_mc };

struct GroundTruthSpec {
  Family family = Family::gaussian_random_cov;
  int dims = 0;
  std::map<std::string, double> params;
  std::map<Measure, Nats> truth;
  TruthKind truth_kind = TruthKind::analytic;
  long mc_samples = 0;  ///< Monte-Carlo size behind semi-analytic truths
};

/// One sample set and its ground truth (TC and entropy families).
struct SyntheticSample {
  DataMatrix data;
  GroundTruthSpec spec;
};

/// Two sample sets. For KL pairs truth is D_KL(first | second); for MI
/// pairs first and second are the x and y blocks of one joint draw.
struct SyntheticPair {
  DataMatrix first;
  DataMatrix second;
  GroundTruthSpec spec;
};

inline constexpr long kRotatedUniformMcSamples = 500000;
inline constexpr double kStudentDiagonal = 10.0;
inline constexpr double kGaussianProxyNu = 100.0;
inline constexpr double kStudentPairNu1 = 8.0;

// ---- analytic measures --------------------------------------------------

Nats gaussian_entropy(const Matrix& cov);
Nats gaussian_total_correlation(const Matrix& cov);
/// D_KL(N(mu1, cov1) | N(mu2, cov2)) with the mean-difference quadratic term.
Nats gaussian_kl(const Vector& mu1, const Matrix& cov1, const Vector& mu2, const Matrix& cov2);
/// I(x; y) for a joint Gaussian whose first dx coordinates are x.
Nats gaussian_mutual_information(const Matrix& joint_cov, int dx);

/// Entropy of a d-dimensional Student-t with nu degrees of freedom and scale A.
Nats student_entropy(double nu, const Matrix& scale);
/// Sum of the marginal Student entropies (scale A_ii) minus the joint entropy.
Nats student_total_correlation(double nu, const Matrix& scale);
/// I(x; y) = T(joint) - T(A_xx) - T(A_yy); marginal blocks keep the same nu.
Nats student_mutual_information(double nu, const Matrix& joint_scale, int dx);
/// D_KL(t(nu1, 0, I) | t(nu2, 0, I)) in d dimensions. The cross expectation
/// E_1[ln(1 + |X|^2 / nu2)] is evaluated by quadrature over the Beta law of
/// |X|^2 / (nu1 + |X|^2).
Nats student_kl_identity(int d, double nu1, double nu2);

// ---- parameter generators ----------------------------------------------

/// M M^T with M_ij ~ U(0, 1); resampled until min eigenvalue > 1e-6.
Matrix random_covariance(int d, Rng& rng);
/// Symmetric, off-diagonal U(0, 1), fixed diagonal; resampled until PD.
Matrix random_scale_matrix(int d, double diagonal, Rng& rng);
/// Correlation matrix of random_covariance() with its diagonal set to zero.
Matrix random_zero_diagonal_correlation(int d, Rng& rng);

// ---- samplers -----------------------------------------------------------

DataMatrix sample_gaussian(const Vector& mean, const Matrix& cov, long n, Rng& rng);
/// Elliptical Student-t: x = mean + L z sqrt(nu / w), w ~ chi2(nu), one w per row.
DataMatrix sample_student_t(double nu, const Matrix& scale, long n, Rng& rng);
/// Gamma(shape, 1) by Marsaglia-Tsang acceptance-rejection (no squeeze).
double sample_gamma(double shape, Rng& rng);

// ---- protocols ----------------------------------------------------------

SyntheticSample gaussian_with_covariance(const Matrix& cov, long n, Rng& rng);
SyntheticSample sample_gaussian_random_cov(int d, long n, Rng& rng);

/// y = M u, u ~ U(0,1)^d. With compute_tc the semi-analytic TC truth is
/// evaluated from an independent Monte-Carlo run of mc_samples draws.
SyntheticSample rotated_uniform_with_matrix(const Matrix& mixing, long n, Rng& rng, bool compute_tc = true,
                                            long mc_samples = kRotatedUniformMcSamples);
SyntheticSample sample_rotated_uniform(int d, long n, Rng& rng, bool compute_tc = true,
                                       long mc_samples = kRotatedUniformMcSamples);

SyntheticSample student_with_scale(double nu, const Matrix& scale, long n, Rng& rng);
SyntheticSample sample_student(int d, long n, double nu, Rng& rng);

/// KL pair. `param` is mu2 (gaussian_pair_mean), sigma2 (gaussian_pair_cov)
/// or nu2 (gaussian_vs_student, student_vs_student).
SyntheticPair make_kl_pair(Family kind, int d, double param, long n, Rng& rng);

/// MI pair of d + d dimensions. `nu` is ignored for gaussian_mi.
SyntheticPair make_mi_pair(Family kind, int d, double nu, long n, Rng& rng);
SyntheticPair gaussian_mi_with_covariance(const Matrix& joint_cov, int dx, long n, Rng& rng);
SyntheticPair student_mi_with_scale(double nu, const Matrix& joint_scale, int dx, long n, Rng& rng);

std::string to_string(Measure m);
std::string to_string(Family f);
std::string to_string(TruthKind k);
Measure parse_measure(const std::string& text);
Family parse_family(const std::string& text);

}  // namespace rbig
