#include "rbig/rotation.hpp"

#include <cmath>

#include "rbig/errors.hpp"

namespace rbig {

Matrix random_rotation(int d, Rng& rng) {
  if (d < 1) throw DomainError("random_rotation: dimension must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix pca_rotation(const DataMatrix& data) {
  const Eigen::Index d = data.cols();
  const Vector mean = data.colwise().mean();
  const DataMatrix centered = data.rowwise() - mean.transpose();
  const Matrix cov = (centered.transpose() * centered) / static_cast<double>(data.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success) throw NumericError("pca_rotation: eigen decomposition failed");
  Matrix rotation(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Vector v = eig.eigenvectors().col(d - 1 - k);
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0.0) v = -v;
    rotation.row(k) = v.transpose();
  }
  return rotation;
}

double orthogonality_error(const Matrix& rotation) {
  const Matrix gram = rotation.transpose() * rotation;
  return (gram - Matrix::Identity(rotation.rows(), rotation.cols())).cwiseAbs().maxCoeff();
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace rbig
