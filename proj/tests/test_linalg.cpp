#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

using namespace qfrac;
using namespace qfrac::testing;

TEST(SymMatrix, SymmetrizesInput) {
  Matrix m(2, 2);
  m << 1, 2, 4, 3;
  const SymMatrix s(m);
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
}

TEST(SymMatrix, RejectsNonSquare) {
  EXPECT_THROW(SymMatrix(Matrix::Zero(2, 3)), std::invalid_argument);
  EXPECT_THROW(SymMatrix(Matrix::Zero(0, 0)), std::invalid_argument);
}

TEST(SymMatrix, ArithmeticChecksDimensions) {
  EXPECT_THROW(SymMatrix::identity(2) + SymMatrix::identity(3), std::invalid_argument);
  EXPECT_EQ(SymMatrix::corner(3, -1.0)(2, 2), -1.0);
  EXPECT_EQ((2.0 * SymMatrix::identity(2))(1, 1), 2.0);
}

TEST(SymEigen, MatchesReferenceSolverOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 7;
    const SymMatrix a = random_sym(rng, n);
    const EigenDecomp e = sym_eigen(a);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(a.matrix());
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(e.values(i), ref.eigenvalues()(i), 1e-10 * (1 + a.norm()));
    }
    const Matrix recon = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE((recon - a.matrix()).norm(), 1e-10 * (1 + a.norm()));
    EXPECT_LE((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).norm(), 1e-10);
  }
}

TEST(SymEigen, AscendingWithSignConvention) {
  std::mt19937_64 rng(12);
  const EigenDecomp e = sym_eigen(random_sym(rng, 5));
  for (int i = 1; i < 5; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
  for (int i = 0; i < 5; ++i) {
    Eigen::Index k = 0;
    e.vectors.col(i).cwiseAbs().maxCoeff(&k);
    EXPECT_GT(e.vectors(k, i), 0.0);
  }
}

TEST(SymEigen, DiagonalAndZeroMatrices) {
  const EigenDecomp e = sym_eigen(SymMatrix::diagonal(vec({3, -1, 2})));
  EXPECT_DOUBLE_EQ(e.values(0), -1);
  EXPECT_DOUBLE_EQ(e.values(2), 3);
  EXPECT_EQ(min_eig(SymMatrix::zero(4)), 0.0);
}

TEST(NullSpace, DimensionEqualsCorank) {
  std::mt19937_64 rng(13);
  for (int rank = 0; rank <= 4; ++rank) {
    const Matrix f = random_matrix(rng, 4, rank);
    const SymMatrix a(f * f.transpose());
    const Matrix z = null_space(a);
    EXPECT_EQ(z.cols(), 4 - rank);
    if (z.cols() > 0) {
      EXPECT_LE((a.matrix() * z).norm(), 1e-8);
    }
  }
}

TEST(Pinv, MatchesCompleteOrthogonalDecomposition) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix f = random_matrix(rng, 4, 2);
    const SymMatrix a(f * f.transpose());
    const Vector rhs = random_vector(rng, 4);
    const PinvResult r = pinv_apply(a, rhs);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a.matrix());
    cod.setThreshold(1e-10);
    EXPECT_LE((r.solution - cod.pseudoInverse() * rhs).norm(), 1e-7 * (1 + rhs.norm()));
    // Generic rhs is not in the 2-dimensional range.
    EXPECT_FALSE(r.consistent);
    const PinvResult r2 = pinv_apply(a, a * rhs);
    EXPECT_TRUE(r2.consistent);
  }
}

TEST(Pinv, DimensionMismatchThrows) {
  EXPECT_THROW(pinv_apply(SymMatrix::identity(2), vec({1, 2, 3})), std::invalid_argument);
}

TEST(RangeContains, SemidefiniteExamples) {
  const SymMatrix b = SymMatrix::diagonal(vec({0, 1}));
  EXPECT_TRUE(range_contains(b, vec({0, 5})));
  EXPECT_FALSE(range_contains(b, vec({1, 0})));
  EXPECT_TRUE(range_contains(SymMatrix::identity(3), vec({1, 2, 3})));
}
