#include "rbig/synth.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rbig/errors.hpp"
#include "rbig/special_functions.hpp"

namespace rbig {
namespace {

constexpr int kMaxPdAttempts = 1000;
constexpr double kMinEigenvalue = 1e-6;

double log_det_pd(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NumericError("matrix is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return -1.0;
  return eig.eigenvalues().minCoeff();
}

void require_pd(const Matrix& m, const char* where) {
  if (m.rows() != m.cols() || m.rows() < 1) throw DataError(std::string(where) + ": matrix must be square");
  if (!(min_eigenvalue(m) > 0.0)) throw NumericError(std::string(where) + ": matrix is not positive definite");
}

Matrix cholesky_lower(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NumericError("cholesky: matrix is not positive definite");
  return llt.matrixL();
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace

// ---- analytic measures --------------------------------------------------

Nats gaussian_entropy(const Matrix& cov) {
  require_pd(cov, "gaussian_entropy");
  const double d = static_cast<double>(cov.rows());
  return 0.5 * d + 0.5 * d * std::log(2.0 * std::numbers::pi) + 0.5 * log_det_pd(cov);
}

Nats gaussian_total_correlation(const Matrix& cov) {
  require_pd(cov, "gaussian_total_correlation");
  return 0.5 * cov.diagonal().array().log().sum() - 0.5 * log_det_pd(cov);
}

Nats gaussian_kl(const Vector& mu1, const Matrix& cov1, const Vector& mu2, const Matrix& cov2) {
  require_pd(cov1, "gaussian_kl");
  require_pd(cov2, "gaussian_kl");
  const Eigen::Index d = cov1.rows();
  if (cov2.rows() != d || mu1.size() != d || mu2.size() != d) throw DataError("gaussian_kl: dimension mismatch");
  Eigen::LLT<Matrix> llt2(cov2);
  const double trace = llt2.solve(cov1).trace();
  const Vector diff = mu2 - mu1;
  const double quad = diff.dot(llt2.solve(diff));
  return 0.5 * (trace + quad - static_cast<double>(d) + log_det_pd(cov2) - log_det_pd(cov1));
}

Nats gaussian_mutual_information(const Matrix& joint_cov, int dx) {
  require_pd(joint_cov, "gaussian_mutual_information");
  const int d = static_cast<int>(joint_cov.rows());
  if (dx < 1 || dx >= d) throw DataError("gaussian_mutual_information: bad split");
  const int dy = d - dx;
  return 0.5 * (log_det_pd(joint_cov.topLeftCorner(dx, dx)) + log_det_pd(joint_cov.bottomRightCorner(dy, dy)) -
                log_det_pd(joint_cov));
}

Nats student_entropy(double nu, const Matrix& scale) {
  if (!(nu > 0.0)) throw DomainError("student_entropy: nu must be positive");
  require_pd(scale, "student_entropy");
  using namespace special;
  const double d = static_cast<double>(scale.rows());
  return 0.5 * log_det_pd(scale) + 0.5 * d * std::log(nu * std::numbers::pi) - log_gamma(0.5 * d) +
         log_beta(0.5 * d, 0.5 * nu) + 0.5 * (nu + d) * (digamma(0.5 * (nu + d)) - digamma(0.5 * nu));
}

Nats student_total_correlation(double nu, const Matrix& scale) {
  Nats marginal_sum = 0.0;
  for (Eigen::Index i = 0; i < scale.rows(); ++i) {
    marginal_sum += student_entropy(nu, Matrix::Constant(1, 1, scale(i, i)));
  }
  return marginal_sum - student_entropy(nu, scale);
}

Nats student_mutual_information(double nu, const Matrix& joint_scale, int dx) {
  const int d = static_cast<int>(joint_scale.rows());
  if (dx < 1 || dx >= d) throw DataError("student_mutual_information: bad split");
  const int dy = d - dx;
  return student_total_correlation(nu, joint_scale) -
         student_total_correlation(nu, joint_scale.topLeftCorner(dx, dx)) -
         student_total_correlation(nu, joint_scale.bottomRightCorner(dy, dy));
}

Nats student_kl_identity(int d, double nu1, double nu2) {
  if (d < 1 || !(nu1 > 0.0) || !(nu2 > 0.0)) throw DomainError("student_kl_identity: bad arguments");
  using namespace special;
  const double dd = static_cast<double>(d);
  auto log_k = [&](double nu) {
    return log_gamma(0.5 * (nu + dd)) - log_gamma(0.5 * nu) - 0.5 * dd * std::log(std::numbers::pi * nu);
  };
  const double e1 = 0.5 * (nu1 + dd) * (digamma(0.5 * (nu1 + dd)) - digamma(0.5 * nu1));

  // Under t(nu1), u = |X|^2 / (nu1 + |X|^2) ~ Beta(d/2, nu1/2) and
  // |X|^2 / nu2 = (nu1 / nu2) u / (1 - u).
  const double a = 0.5 * dd;
  const double b = 0.5 * nu1;
  const double log_norm = log_beta(a, b);
  const double ratio = nu1 / nu2;
  // tanh_sinh passes the signed distance to the nearer endpoint as the
  // second argument; it is 1 - u only on the upper half.
  auto integrand = [&](double u, double xc) {
    const double complement = xc > 0.0 ? xc : 1.0 - u;
    if (u <= 0.0 || complement <= 0.0) return 0.0;
    const double log_density = (a - 1.0) * std::log(u) + (b - 1.0) * std::log(complement) - log_norm;
    const double log_term = std::log(complement + ratio * u) - std::log(complement);
    return std::exp(log_density) * log_term;
  };
  boost::math::quadrature::tanh_sinh<double> quad;
  const double expectation = quad.integrate(integrand, 0.0, 1.0);
  const double e2 = 0.5 * (nu2 + dd) * expectation;
  return log_k(nu1) - log_k(nu2) - e1 + e2;
}

// ---- parameter generators ----------------------------------------------

Matrix random_covariance(int d, Rng& rng) {
  if (d < 1) throw DomainError("random_covariance: d must be >= 1");
  for (int attempt = 0; attempt < kMaxPdAttempts; ++attempt) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = uniform01(rng);
    Matrix cov = m * m.transpose();
    cov = 0.5 * (cov + cov.transpose());
    if (min_eigenvalue(cov) > kMinEigenvalue) return cov;
  }
  throw GenerationError("random_covariance: no positive-definite draw in 1000 attempts");
}

Matrix random_scale_matrix(int d, double diagonal, Rng& rng) {
  if (d < 1) throw DomainError("random_scale_matrix: d must be >= 1");
  for (int attempt = 0; attempt < kMaxPdAttempts; ++attempt) {
    Matrix a(d, d);
    for (int i = 0; i < d; ++i) {
      a(i, i) = diagonal;
      for (int j = i + 1; j < d; ++j) a(i, j) = a(j, i) = uniform01(rng);
    }
    if (min_eigenvalue(a) > kMinEigenvalue) return a;
  }
  throw GenerationError("random_scale_matrix: no positive-definite draw in 1000 attempts");
}

Matrix random_zero_diagonal_correlation(int d, Rng& rng) {
  const Matrix cov = random_covariance(d, rng);
  const Vector inv_sd = cov.diagonal().array().rsqrt();
  Matrix q = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
  q.diagonal().setZero();
  return 0.5 * (q + q.transpose());
}

// ---- samplers -----------------------------------------------------------

double sample_gamma(double shape, Rng& rng) {
  if (!(shape > 0.0)) throw DomainError("sample_gamma: shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::pow(uniform01(rng), 1.0 / shape);
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal(rng);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = uniform01(rng);
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

DataMatrix sample_gaussian(const Vector& mean, const Matrix& cov, long n, Rng& rng) {
  const Eigen::Index d = cov.rows();
  if (mean.size() != d) throw DataError("sample_gaussian: mean/covariance mismatch");
  const Matrix l = cholesky_lower(cov);
  std::normal_distribution<double> normal(0.0, 1.0);
  DataMatrix z(n, d);
  for (long i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = normal(rng);
  DataMatrix x = z * l.transpose();
  x.rowwise() += mean.transpose();
  return x;
}

DataMatrix sample_student_t(double nu, const Matrix& scale, long n, Rng& rng) {
  if (!(nu > 0.0)) throw DomainError("sample_student_t: nu must be positive");
  const Eigen::Index d = scale.rows();
  const Matrix l = cholesky_lower(scale);
  std::normal_distribution<double> normal(0.0, 1.0);
  DataMatrix z(n, d);
  for (long i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = normal(rng);
    const double chi2 = 2.0 * sample_gamma(0.5 * nu, rng);
    z.row(i) *= std::sqrt(nu / chi2);
  }
  return z * l.transpose();
}

// ---- protocols ----------------------------------------------------------

SyntheticSample gaussian_with_covariance(const Matrix& cov, long n, Rng& rng) {
  SyntheticSample out;
  out.data = sample_gaussian(Vector::Zero(cov.rows()), cov, n, rng);
  out.spec.family = Family::gaussian_random_cov;
  out.spec.dims = static_cast<int>(cov.rows());
  out.spec.truth[Measure::tc] = gaussian_total_correlation(cov);
  out.spec.truth[Measure::h] = gaussian_entropy(cov);
  return out;
}

SyntheticSample sample_gaussian_random_cov(int d, long n, Rng& rng) {
  const Matrix cov = random_covariance(d, rng);
  return gaussian_with_covariance(cov, n, rng);
}

namespace {

// Histogram + Miller-Madow entropy of each coordinate of y = M u over a
// stream of `samples` draws, in two passes over the same seed (range, then
// counts) so memory stays O(d * bins).
std::vector<double> streamed_marginal_entropies(const Matrix& mixing, long samples, std::uint64_t seed) {
  const Eigen::Index d = mixing.rows();
  constexpr long kBlock = 8192;
  const auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(samples))));
  Vector lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(d, -std::numeric_limits<double>::infinity());
  std::vector<std::vector<std::uint32_t>> counts(static_cast<std::size_t>(d), std::vector<std::uint32_t>(bins, 0));

  for (int pass = 0; pass < 2; ++pass) {
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (long start = 0; start < samples; start += kBlock) {
      const long rows = std::min(kBlock, samples - start);
      DataMatrix u(rows, d);
      for (long i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < d; ++j) u(i, j) = unif(rng);
      const DataMatrix y = u * mixing.transpose();
      for (Eigen::Index j = 0; j < d; ++j) {
        if (pass == 0) {
          lo(j) = std::min(lo(j), y.col(j).minCoeff());
          hi(j) = std::max(hi(j), y.col(j).maxCoeff());
          continue;
        }
        const double scale = static_cast<double>(bins) / (hi(j) - lo(j));
        auto& c = counts[static_cast<std::size_t>(j)];
        for (long i = 0; i < rows; ++i) {
          auto b = static_cast<std::size_t>((y(i, j) - lo(j)) * scale);
          if (b >= bins) b = bins - 1;
          ++c[b];
        }
      }
    }
  }

  std::vector<double> h(static_cast<std::size_t>(d));
  const double inv_n = 1.0 / static_cast<double>(samples);
  for (Eigen::Index j = 0; j < d; ++j) {
    double acc = 0.0;
    std::size_t occupied = 0;
    for (std::uint32_t c : counts[static_cast<std::size_t>(j)]) {
      if (c == 0) continue;
      ++occupied;
      const double p = static_cast<double>(c) * inv_n;
      acc -= p * std::log(p);
    }
    acc += static_cast<double>(occupied - 1) * 0.5 * inv_n;
    h[static_cast<std::size_t>(j)] = acc + std::log((hi(j) - lo(j)) / static_cast<double>(bins));
  }
  return h;
}

}  // namespace

SyntheticSample rotated_uniform_with_matrix(const Matrix& mixing, long n, Rng& rng, bool compute_tc,
                                            long mc_samples) {
  const Eigen::Index d = mixing.rows();
  if (mixing.cols() != d) throw DataError("rotated_uniform: mixing matrix must be square");
  Eigen::PartialPivLU<Matrix> lu(mixing);
  const double log_abs_det = lu.matrixLU().diagonal().array().abs().log().sum();
  if (!std::isfinite(log_abs_det)) throw NumericError("rotated_uniform: singular mixing matrix");

  SyntheticSample out;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  DataMatrix u(n, d);
  for (long i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) u(i, j) = unif(rng);
  out.data = u * mixing.transpose();

  out.spec.family = Family::rotated_uniform;
  out.spec.dims = static_cast<int>(d);
  // U(0,1) marginals have zero entropy; |M^T M|^(1/2) = |det M|.
  out.spec.truth[Measure::h] = log_abs_det;
  if (compute_tc) {
    const std::uint64_t mc_seed = rng() >> 11;  // 53 bits, exact as a double
    std::vector<double> h = streamed_marginal_entropies(mixing, mc_samples, mc_seed);
    // A row with a single nonzero weight is a scaled uniform: exact entropy.
    for (Eigen::Index i = 0; i < d; ++i) {
      Eigen::Index nonzero = 0;
      double weight = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        if (mixing(i, j) != 0.0) {
          ++nonzero;
          weight = mixing(i, j);
        }
      }
      if (nonzero == 1) h[static_cast<std::size_t>(i)] = std::log(std::abs(weight));
    }
    double sum = 0.0;
    for (double v : h) sum += v;
    out.spec.truth[Measure::tc] = sum - log_abs_det;
    out.spec.truth_kind = TruthKind::semi_analytic_mc;
    out.spec.mc_samples = mc_samples;
    out.spec.params["mc_seed"] = static_cast<double>(mc_seed);
  }
  return out;
}

SyntheticSample sample_rotated_uniform(int d, long n, Rng& rng, bool compute_tc, long mc_samples) {
  if (d < 1) throw DomainError("sample_rotated_uniform: d must be >= 1");
  for (int attempt = 0; attempt < kMaxPdAttempts; ++attempt) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = uniform01(rng);
    if (std::abs(m.determinant()) > 1e-8) return rotated_uniform_with_matrix(m, n, rng, compute_tc, mc_samples);
  }
  throw GenerationError("sample_rotated_uniform: mixing matrix stayed singular for 1000 attempts");
}

SyntheticSample student_with_scale(double nu, const Matrix& scale, long n, Rng& rng) {
  SyntheticSample out;
  out.data = sample_student_t(nu, scale, n, rng);
  out.spec.family = Family::student;
  out.spec.dims = static_cast<int>(scale.rows());
  out.spec.params["nu"] = nu;
  out.spec.truth[Measure::tc] = student_total_correlation(nu, scale);
  out.spec.truth[Measure::h] = student_entropy(nu, scale);
  return out;
}

SyntheticSample sample_student(int d, long n, double nu, Rng& rng) {
  const Matrix scale = random_scale_matrix(d, kStudentDiagonal, rng);
  SyntheticSample out = student_with_scale(nu, scale, n, rng);
  out.spec.params["diagonal"] = kStudentDiagonal;
  return out;
}

SyntheticPair make_kl_pair(Family kind, int d, double param, long n, Rng& rng) {
  if (d < 1) throw DomainError("make_kl_pair: d must be >= 1");
  SyntheticPair out;
  out.spec.family = kind;
  out.spec.dims = d;
  const Matrix identity = Matrix::Identity(d, d);
  const Vector zero = Vector::Zero(d);
  switch (kind) {
    case Family::gaussian_pair_mean: {
      const Vector mu2 = Vector::Constant(d, param);
      out.first = sample_gaussian(zero, identity, n, rng);
      out.second = sample_gaussian(mu2, identity, n, rng);
      out.spec.params["mu2"] = param;
      out.spec.truth[Measure::kl] = gaussian_kl(zero, identity, mu2, identity);
      break;
    }
    case Family::gaussian_pair_cov: {
      if (!(param > 0.0 && param < 1.0)) throw DomainError("make_kl_pair: sigma2 must lie in (0, 1)");
      // The perturbed covariance is the sample under test and N(0, I) the
      // reference: the reference then covers the tested sample's support.
      const Matrix cov2 = param * random_zero_diagonal_correlation(d, rng) + identity;
      out.first = sample_gaussian(zero, cov2, n, rng);
      out.second = sample_gaussian(zero, identity, n, rng);
      out.spec.params["sigma2"] = param;
      out.spec.truth[Measure::kl] = gaussian_kl(zero, cov2, zero, identity);
      break;
    }
    case Family::gaussian_vs_student:
    case Family::student_vs_student: {
      const double nu1 = kind == Family::gaussian_vs_student ? kGaussianProxyNu : kStudentPairNu1;
      out.first = sample_student_t(nu1, identity, n, rng);
      out.second = sample_student_t(param, identity, n, rng);
      out.spec.params["nu1"] = nu1;
      out.spec.params["nu2"] = param;
      out.spec.truth[Measure::kl] = student_kl_identity(d, nu1, param);
      break;
    }
    default:
      throw UsageError("make_kl_pair: family " + to_string(kind) + " is not a KL pair");
  }
  return out;
}

SyntheticPair gaussian_mi_with_covariance(const Matrix& joint_cov, int dx, long n, Rng& rng) {
  const Eigen::Index d = joint_cov.rows();
  const DataMatrix joint = sample_gaussian(Vector::Zero(d), joint_cov, n, rng);
  SyntheticPair out;
  out.first = joint.leftCols(dx);
  out.second = joint.rightCols(d - dx);
  out.spec.family = Family::gaussian_mi;
  out.spec.dims = dx;
  out.spec.truth[Measure::mi] = gaussian_mutual_information(joint_cov, dx);
  return out;
}

SyntheticPair student_mi_with_scale(double nu, const Matrix& joint_scale, int dx, long n, Rng& rng) {
  const Eigen::Index d = joint_scale.rows();
  const DataMatrix joint = sample_student_t(nu, joint_scale, n, rng);
  SyntheticPair out;
  out.first = joint.leftCols(dx);
  out.second = joint.rightCols(d - dx);
  out.spec.family = Family::student_mi;
  out.spec.dims = dx;
  out.spec.params["nu"] = nu;
  out.spec.truth[Measure::mi] = student_mutual_information(nu, joint_scale, dx);
  return out;
}

SyntheticPair make_mi_pair(Family kind, int d, double nu, long n, Rng& rng) {
  if (d < 1) throw DomainError("make_mi_pair: d must be >= 1");
  const Matrix joint = random_scale_matrix(2 * d, kStudentDiagonal, rng);
  SyntheticPair out;
  if (kind == Family::gaussian_mi) {
    out = gaussian_mi_with_covariance(joint, d, n, rng);
  } else if (kind == Family::student_mi) {
    out = student_mi_with_scale(nu, joint, d, n, rng);
  } else {
    throw UsageError("make_mi_pair: family " + to_string(kind) + " is not an MI pair");
  }
  out.spec.params["diagonal"] = kStudentDiagonal;
  return out;
}

std::string to_string(Measure m) {
  switch (m) {
    case Measure::tc: return "tc";
    case Measure::h: return "h";
    case Measure::kl: return "kl";
    case Measure::mi: return "mi";
  }
  return "tc";
}

std::string to_string(Family f) {
  switch (f) {
    case Family::gaussian_random_cov: return "gaussian_random_cov";
    case Family::rotated_uniform: return "rotated_uniform";
    case Family::student: return "student";
    case Family::gaussian_pair_mean: return "gaussian_pair_mean";
    case Family::gaussian_pair_cov: return "gaussian_pair_cov";
    case Family::gaussian_vs_student: return "gaussian_vs_student";
    case Family::student_vs_student: return "student_vs_student";
    case Family::gaussian_mi: return "gaussian_mi";
    case Family::student_mi: return "student_mi";
  }
  return "gaussian_random_cov";
}

std::string to_string(TruthKind k) { return k == TruthKind::analytic ? "analytic" : "semi_analytic_mc"; }

Measure parse_measure(const std::string& text) {
  if (text == "tc") return Measure::tc;
  if (text == "h") return Measure::h;
  if (text == "kl") return Measure::kl;
  if (text == "mi") return Measure::mi;
  throw UsageError("unknown measure '" + text + "' (expected tc, h, kl or mi)");
}

Family parse_family(const std::string& text) {
  for (Family f : {Family::gaussian_random_cov, Family::rotated_uniform, Family::student,
                   Family::gaussian_pair_mean, Family::gaussian_pair_cov, Family::gaussian_vs_student,
                   Family::student_vs_student, Family::gaussian_mi, Family::student_mi}) {
    if (to_string(f) == text) return f;
  }
  throw UsageError("unknown family '" + text + "'");
}

}  // namespace rbig
