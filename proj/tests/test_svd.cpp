#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pipct/svd.hpp"

using namespace pipct;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, unsigned seed) {
  auto gen = oracle::rng(seed);
  std::normal_distribution<double> g;
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = g(gen);
  return m;
}

double residual(const DenseMatrix& a, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) r += a(i, j) * v[j];
    s += r * r;
  }
  return std::sqrt(s);
}

}  // namespace

TEST(JacobiSvd, DiagonalMatrix) {
  DenseMatrix d(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = -5.0;
  d(2, 2) = 0.5;
  const auto s = jacobi_svd(d);
  ASSERT_EQ(s.singular_values.size(), 3u);
  EXPECT_NEAR(s.singular_values[0], 5.0, 1e-15);
  EXPECT_NEAR(s.singular_values[1], 2.0, 1e-15);
  EXPECT_NEAR(s.singular_values[2], 0.5, 1e-15);
  EXPECT_NEAR(std::abs(s.right_vectors[0][1]), 1.0, 1e-15);
}

TEST(JacobiSvd, WideMatrixHasNullVector) {
  for (unsigned seed = 1; seed <= 30; ++seed) {
    const std::size_t r = 1 + seed % 12;
    const auto a = random_matrix(r, r + 1, seed);
    const auto s = jacobi_svd(a);
    ASSERT_EQ(s.singular_values.size(), r + 1);
    EXPECT_TRUE(std::is_sorted(s.singular_values.rbegin(), s.singular_values.rend()));
    EXPECT_LE(residual(a, s.right_vectors.back()), 1e-12 * a.frobenius_norm());
    // A v_i = sigma_i for each pair, and the basis is orthonormal.
    for (std::size_t i = 0; i <= r; ++i) {
      EXPECT_NEAR(residual(a, s.right_vectors[i]), s.singular_values[i], 1e-12 * a.frobenius_norm());
      for (std::size_t j = 0; j <= r; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k <= r; ++k) dot += s.right_vectors[i][k] * s.right_vectors[j][k];
        EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-13);
      }
    }
  }
}

TEST(JacobiSvd, SquaredValuesSumToFrobenius) {
  const auto a = random_matrix(7, 5, 99);
  const auto s = jacobi_svd(a);
  double sum = 0.0;
  for (double v : s.singular_values) sum += v * v;
  EXPECT_NEAR(sum, a.frobenius_norm() * a.frobenius_norm(), 1e-12);
}

TEST(JacobiSvd, RejectsNonFinite) {
  DenseMatrix a(1, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(jacobi_svd(a), InvalidArgument);
}
