#include <cmath>

#include <gtest/gtest.h>

#include "kaar/algebra.hpp"
#include "kaar/checks/generators.hpp"
#include "kaar/checks/oracles.hpp"
#include "kaar/error.hpp"

namespace kaar {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

TEST(InitInverse, ScalarCases) {
  struct Case { double a, k_self, inv, logdet; };
  for (const Case c : {Case{1, 1, 0.5, std::log(2.0)}, Case{2, 0, 0.5, std::log(2.0)},
                       Case{1, 3, 0.25, std::log(4.0)}}) {
    const auto r = RegularizedInverse::initial(c.a, c.k_self);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r.inverse()(0, 0), c.inv);
    EXPECT_DOUBLE_EQ(r.logdet(), c.logdet);
  }
}

TEST(InitInverse, RejectsNonPositiveRidge) {
  EXPECT_THROW(RegularizedInverse::initial(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(RegularizedInverse::initial(-1.0, 1.0), InvalidArgument);
  EXPECT_THROW(RegularizedInverse(0.0), InvalidArgument);
  EXPECT_THROW(RegularizedInverse::initial(1.0, -1.0), InvalidArgument);
}

TEST(ExtendInverse, CoupledTwoByTwo) {
  // aI + K = [[2, 1], [1, 2]] has inverse [[2, -1], [-1, 2]] / 3 and det 3.
  auto r = RegularizedInverse::initial(1.0, 1.0);
  const double schur = r.extend(vec({1}), 1.0);
  EXPECT_DOUBLE_EQ(schur, 1.5);
  Matrix expected(2, 2);
  expected << 2.0 / 3, -1.0 / 3, -1.0 / 3, 2.0 / 3;
  EXPECT_LT((Matrix(r.inverse()) - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(r.logdet(), std::log(3.0), 1e-15);
}

TEST(ExtendInverse, DecoupledExtensionLeavesPrefixBlock) {
  auto r = RegularizedInverse::initial(1.0, 1.0);
  EXPECT_EQ(r.extend(vec({0}), 1.0), 2.0);
  Matrix expected(2, 2);
  expected << 0.5, 0, 0, 0.5;
  EXPECT_EQ(Matrix(r.inverse()), expected);
  EXPECT_NEAR(r.logdet(), std::log(4.0), 1e-15);

  checks::Rng rng(3);
  RegularizedInverse big(0.7);
  const Kernel k = Kernel::gaussian(1.0);
  std::vector<Signal> pts;
  for (int i = 0; i < 7; ++i) {
    Signal x = checks::random_signal(rng, 2);
    big.extend(kernel_column(k, pts, x), k(x, x));
    pts.push_back(x);
  }
  const Matrix before = big.inverse();
  EXPECT_EQ(big.extend(Vector::Zero(7), 2.5), 0.7 + 2.5);
  EXPECT_EQ(Matrix(big.inverse().topLeftCorner(7, 7)), before);
}

TEST(ExtendInverse, WrongColumnLengthThrows) {
  auto r = RegularizedInverse::initial(1.0, 1.0);
  EXPECT_THROW(r.extend(vec({1, 2}), 1.0), DimensionMismatch);
}

TEST(ExtendInverse, NonPsdKernelHitsTheFloor) {
  // K = [[1, 2], [2, 1]] is indefinite; with a = 0.5 the Schur complement is
  // 1.5 - 4/1.5 < 0.
  auto r = RegularizedInverse::initial(0.5, 1.0);
  EXPECT_THROW(r.extend(vec({2}), 1.0), NumericFailure);
  EXPECT_EQ(r.size(), 1u);
}

TEST(ExtendInverse, DuplicatePointKeepsSchurAboveRidge) {
  // Exact duplicate: schur = k + a - k^2 / (k + a) = a (2k + a) / (k + a), in (a, 2a).
  const double a = 0.3, k = 2.0;
  auto r = RegularizedInverse::initial(a, k);
  const double schur = r.extend(vec({k}), k);
  EXPECT_NEAR(schur, k + a - k * k / (k + a), 1e-15);
  EXPECT_GT(schur, a);
  EXPECT_LT(schur, 2 * a);
}

TEST(ExtendInverse, MatchesDirectInverseOnRandomRuns) {
  checks::Rng rng(101);
  for (int inst = 0; inst < 25; ++inst) {
    const Kernel k = checks::random_registered_kernel(rng);
    const double a = checks::random_ridge(rng);
    const auto n = checks::uniform_int(rng, 1, 6);
    std::vector<Signal> pts;
    RegularizedInverse inc(a);
    for (int t = 0; t < 60; ++t) {
      Signal x = checks::random_signal(rng, n);
      ASSERT_GT(inc.extend(kernel_column(k, pts, x), k(x, x)), 0.0);
      pts.push_back(std::move(x));
    }
    Matrix reg = checks::gram_by_loops(k, pts);
    reg.diagonal().array() += a;
    const Matrix direct = checks::lu_inverse(reg);
    const Matrix incremental = inc.inverse();
    EXPECT_LE((incremental - direct).norm(), 1e-8 * (1.0 + direct.norm())) << k.to_string() << " a=" << a;
    EXPECT_EQ(incremental, incremental.transpose());
    EXPECT_NEAR(inc.logdet(), checks::lu_logdet(reg), 1e-8);
    EXPECT_NEAR(inc.logdet(), logdet_pd(reg), 1e-8);
  }
}

TEST(LogdetPd, Cases) {
  EXPECT_DOUBLE_EQ(logdet_pd(Matrix::Constant(1, 1, 2.0)), std::log(2.0));
  for (int n : {1, 4, 9}) EXPECT_EQ(logdet_pd(Matrix::Identity(n, n)), 0.0);
  Matrix m(2, 2);
  m << 2, 1, 1, 2;
  EXPECT_NEAR(logdet_pd(m), std::log(3.0), 1e-15);
}

TEST(LogdetPd, RejectsNonPd) {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_THROW(logdet_pd(m), NumericFailure);
  EXPECT_THROW(logdet_pd(Matrix::Zero(2, 3)), DimensionMismatch);
}

TEST(DetIdentity, Cases) {
  auto r = det_identity_check(Matrix::Ones(1, 1));
  EXPECT_DOUBLE_EQ(r.lhs, 2.0);
  EXPECT_DOUBLE_EQ(r.rhs, 2.0);
  EXPECT_TRUE(r.pass);

  r = det_identity_check(Matrix::Ones(2, 1));  // column (1, 1)'
  EXPECT_NEAR(r.lhs, 3.0, 1e-14);
  EXPECT_NEAR(r.rhs, 3.0, 1e-14);
  EXPECT_TRUE(r.pass);

  r = det_identity_check(Matrix::Zero(4, 2));
  EXPECT_EQ(r.lhs, 1.0);
  EXPECT_EQ(r.rhs, 1.0);
}

TEST(DetIdentity, RandomMatricesAgreeWithLuDeterminant) {
  checks::Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const Matrix m = checks::random_matrix(rng, checks::uniform_int(rng, 1, 8), checks::uniform_int(rng, 1, 5), 2.0);
    const auto r = det_identity_check(m);
    EXPECT_TRUE(r.pass);
    const double lhs = checks::lu_determinant(Matrix::Identity(m.cols(), m.cols()) + m.transpose() * m);
    const double rhs = checks::lu_determinant(Matrix::Identity(m.rows(), m.rows()) + m * m.transpose());
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(lhs)));
    EXPECT_LE(std::abs(r.lhs - lhs), 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

}  // namespace
}  // namespace kaar
