// The OpenMP kernels must agree with their serial references.
#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rbig/errors.hpp"
#include "rbig/kernels.hpp"

namespace k = rbig::kernels;

namespace {

rbig::DataMatrix draws(long n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::student_t_distribution<double> t(4.0);
  rbig::DataMatrix x(n, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = t(rng) * (1.0 + static_cast<double>(j));
  return x;
}

}  // namespace

TEST(Kernels, GaussianizeMatchesSerial) {
  auto a = draws(3000, 7, 1);
  auto b = a;
  const auto ma = k::fit_gaussianize_columns(a, true);
  const auto mb = k::fit_gaussianize_columns_serial(b, true);
  EXPECT_EQ(a, b);
  ASSERT_EQ(ma.size(), mb.size());
  for (std::size_t j = 0; j < ma.size(); ++j) {
    EXPECT_EQ(ma[j].knots_x(), mb[j].knots_x());
    EXPECT_EQ(ma[j].knots_p(), mb[j].knots_p());
  }
  auto c = draws(3000, 7, 1);
  EXPECT_TRUE(k::fit_gaussianize_columns(c, false).empty());
  EXPECT_EQ(c, a);
}

TEST(Kernels, DegenerateColumnIsReported) {
  auto x = draws(200, 4, 2);
  x.col(2).setConstant(1.5);
  try {
    k::fit_gaussianize_columns(x, false);
    FAIL() << "expected DegenerateMarginalError";
  } catch (const rbig::DegenerateMarginalError& e) {
    EXPECT_EQ(e.column(), 2);
  }
  auto y = draws(200, 4, 2);
  y.col(3).setConstant(0.0);
  EXPECT_THROW(k::fit_gaussianize_columns_serial(y, false), rbig::DegenerateMarginalError);
}

TEST(Kernels, EntropiesMatchSerial) {
  const auto x = draws(5000, 9, 3);
  for (auto est : {rbig::EntropyEstimator::histogram_mm, rbig::EntropyEstimator::spacing}) {
    const rbig::EntropyOptions o{est, 0};
    EXPECT_EQ(k::column_entropies(x, o), k::column_entropies_serial(x, o));
  }
}

TEST(Kernels, ApplyMarginalsMatchesSerialAndInverts) {
  auto fit = draws(2000, 5, 4);
  const auto maps = k::fit_gaussianize_columns(fit, true);
  const auto fresh = draws(500, 5, 5);
  auto a = fresh, b = fresh;
  k::apply_marginals(maps, a, false);
  k::apply_marginals_serial(maps, b, false);
  EXPECT_EQ(a, b);
  k::apply_marginals(maps, a, true);
  k::apply_marginals_serial(maps, b, true);
  EXPECT_EQ(a, b);
  // samples inside the knot range come back exactly enough
  for (Eigen::Index j = 0; j < fresh.cols(); ++j) {
    const double lo = maps[static_cast<std::size_t>(j)].knots_x().front();
    const double hi = maps[static_cast<std::size_t>(j)].knots_x().back();
    for (Eigen::Index i = 0; i < fresh.rows(); ++i)
      if (fresh(i, j) > lo && fresh(i, j) < hi) EXPECT_NEAR(a(i, j), fresh(i, j), 1e-6 * (hi - lo));
  }
}

class KnnKernel : public ::testing::TestWithParam<int> {};

TEST_P(KnnKernel, MatchesBruteForce) {
  const int d = GetParam();
  const auto ref = draws(1500, d, 6);
  const auto q = draws(300, d, 7);
  for (int kk : {1, 3, 5}) {
    const auto a = k::knn_distances(ref, ref, kk, true);
    const auto b = k::knn_distances_serial(ref, ref, kk, true);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-10 * (1.0 + b[i])) << i;
    const auto c = k::knn_distances(q, ref, kk, false);
    const auto e = k::knn_distances_serial(q, ref, kk, false);
    for (std::size_t i = 0; i < c.size(); ++i) ASSERT_NEAR(c[i], e[i], 1e-10 * (1.0 + e[i])) << i;
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, KnnKernel, ::testing::Values(1, 2, 5, 20, 60));

TEST(Kernels, KnnBruteForceByHand) {
  rbig::DataMatrix pts(4, 1);
  pts << 0.0, 1.0, 3.0, 7.0;
  const auto d1 = k::knn_distances_serial(pts, pts, 1, true);
  EXPECT_EQ(d1, (std::vector<double>{1.0, 1.0, 2.0, 4.0}));
  const auto d2 = k::knn_distances(pts, pts, 2, true);
  EXPECT_EQ(d2, (std::vector<double>{3.0, 2.0, 3.0, 6.0}));
}
