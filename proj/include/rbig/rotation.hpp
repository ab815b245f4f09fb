#pragma once

#include <cstdint>
#include <random>

#include "rbig/types.hpp"

namespace rbig {

using Rng = std::mt19937_64;

/// Haar-distributed d x d orthogonal matrix: QR of a standard-normal matrix
/// with each column of Q multiplied by the sign of R's matching diagonal.
Matrix random_rotation(int d, Rng& rng);

/// Rows are the eigenvectors of the sample covariance of `data`, ordered by
/// decreasing eigenvalue; each row's largest-magnitude entry is positive.
Matrix pca_rotation(const DataMatrix& data);

/// max |R^T R - I| over all entries.
double orthogonality_error(const Matrix& rotation);

/// Stable 64-bit mixing (splitmix64 finalizer) for deriving stream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace rbig
