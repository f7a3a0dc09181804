// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "arbilomod/linalg.hpp"
#include "helpers.hpp"

using namespace arbilomod;

namespace
{

CMat m_gram(const CMat &b, const RSpMat &m)
{
  return b.adjoint() * apply_gram(m, b);
}

RSpMat identity(int n)
{
  RSpMat m(n, n);
  m.setIdentity();
  return m;
}

}  // namespace

TEST(Factorization, SolvesAndAdjointSolves)
{
  std::mt19937_64 rng(1);
  const auto [a, m] = test::random_system(60, rng);
  const Factorization lu(a);
  const CVec b = test::random_vector(60, rng);
  EXPECT_LT((a * lu.solve(b) - b).norm(), 1e-12 * b.norm());
  EXPECT_LT((SpMat(a.adjoint()) * lu.solve_adjoint(b) - b).norm(), 1e-12 * b.norm());
  const CMat rhs = test::random_matrix(60, 4, rng);
  EXPECT_LT((a * lu.solve(rhs) - rhs).norm(), 1e-12 * rhs.norm());
  EXPECT_EQ(lu.rows(), 60);
}

TEST(Factorization, SingularMatrixThrows)
{
  SpMat a(3, 3);
  a.insert(0, 0) = 1.0;
  a.insert(1, 1) = 1.0;
  EXPECT_THROW(Factorization{a}, SingularFactorization);
  SpMat rect(2, 3);
  EXPECT_THROW(Factorization{rect}, InvalidInput);
}

TEST(Factorization, EmptyMatrix)
{
  const Factorization lu{SpMat(0, 0)};
  EXPECT_EQ(lu.solve(CVec(0)).size(), 0);
}

TEST(Gram, SolveAndBlocks)
{
  std::mt19937_64 rng(2);
  const auto [a, m] = test::random_system(40, rng);
  const GramFactorization mf(m);
  const CVec b = test::random_vector(40, rng);
  EXPECT_LT((apply_gram(m, mf.solve(b)) - b).norm(), 1e-12 * b.norm());

  const std::vector<int> rows{5, 1, 7}, cols{2, 1};
  const RSpMat block = extract_block(m, rows, cols);
  for (int r = 0; r < 3; r++)
  {
    for (int c = 0; c < 2; c++)
    {
      EXPECT_EQ(block.coeff(r, c), m.coeff(rows[r], cols[c]));
    }
  }
  const SpMat cblock = extract_block(a, rows, cols);
  EXPECT_EQ(cblock.coeff(2, 0), a.coeff(7, 2));
}

TEST(Phase, FirstSignificantEntryBecomesPositiveReal)
{
  CVec v(3);
  v << Complex(1e-20, 1e-20), Complex(0.0, -2.0), Complex(1.0, 1.0);
  const CVec before = v;
  normalize_phase(v);
  EXPECT_NEAR(v[1].real(), 2.0, 1e-15);
  EXPECT_NEAR(v[1].imag(), 0.0, 1e-15);
  EXPECT_NEAR(v.norm(), before.norm(), 1e-15);
  CVec zero = CVec::Zero(2);
  normalize_phase(zero);
  EXPECT_EQ(zero.norm(), 0.0);
}

TEST(Orthonormalize, DropsDependentColumns)
{
  std::mt19937_64 rng(3);
  const auto [a, m] = test::random_system(30, rng);
  CMat x = test::random_matrix(30, 4, rng);
  CMat with_dup(30, 6);
  with_dup << x, x.col(0) + Complex(0.0, 2.0) * x.col(2), CVec::Zero(30);
  const CMat q = m_orthonormalize(with_dup, m);
  EXPECT_EQ(q.cols(), 4);
  EXPECT_LT((m_gram(q, m) - CMat::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Greedy, RecoversExactRank)
{
  std::mt19937_64 rng(4);
  for (int rank : {1, 3, 7, 12})
  {
    const auto [a, m] = test::random_system(80, rng);
    const CMat snapshots = test::random_matrix(80, rank, rng) * test::random_matrix(rank, 40, rng);
    const auto g = greedy_compress(snapshots, m, 1e-10);
    EXPECT_EQ(g.basis.cols(), rank);
    EXPECT_EQ(g.trajectory.size(), static_cast<std::size_t>(rank + 1));
    EXPECT_DOUBLE_EQ(g.trajectory.front(), 1.0);
    EXPECT_LT(g.trajectory.back(), 1e-10);
    EXPECT_LT((m_gram(g.basis, m) - CMat::Identity(rank, rank)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Greedy, TrajectoryNonIncreasingAndMaxSize)
{
  std::mt19937_64 rng(5);
  const RSpMat m = identity(50);
  const CMat snapshots = test::random_matrix(50, 30, rng);
  const auto g = greedy_compress(snapshots, m, 1e-12, 10);
  EXPECT_EQ(g.basis.cols(), 10);
  EXPECT_EQ(g.picked.size(), 10u);
  for (std::size_t k = 1; k < g.trajectory.size(); k++)
  {
    EXPECT_LE(g.trajectory[k], g.trajectory[k - 1] + 1e-14);
  }
  // Reported error is the true worst relative projection error.
  const CMat coeff = g.basis.adjoint() * snapshots;
  double worst = 0.0;
  for (int c = 0; c < snapshots.cols(); c++)
  {
    worst = std::max(worst, (snapshots.col(c) - g.basis * coeff.col(c)).norm() / snapshots.col(c).norm());
  }
  EXPECT_NEAR(g.trajectory.back(), worst, 1e-12);
}

TEST(Greedy, IgnoresNegligibleAndZeroSnapshots)
{
  const RSpMat m = identity(4);
  CMat s = CMat::Zero(4, 3);
  s(0, 0) = 1.0;
  s(1, 1) = 1e-14;
  const auto g = greedy_compress(s, m, 1e-8);
  EXPECT_EQ(g.basis.cols(), 1);
  const auto empty = greedy_compress(CMat::Zero(4, 2), m, 1e-8);
  EXPECT_EQ(empty.basis.cols(), 0);
  EXPECT_EQ(empty.trajectory.size(), 1u);
  EXPECT_EQ(empty.trajectory[0], 0.0);
}

TEST(Greedy, RejectsBadArguments)
{
  const RSpMat m = identity(3);
  EXPECT_THROW(greedy_compress(CMat::Zero(3, 1), m, 0.0), InvalidInput);
  EXPECT_THROW(greedy_compress(CMat::Zero(2, 1), m, 1e-3), InvalidInput);
}

TEST(SingularValues, DenseOracleOnDiagonalCase)
{
  CMat a = CMat::Zero(3, 3);
  a(0, 0) = 2.0;
  a(1, 1) = Complex(0.0, -0.5);
  a(2, 2) = 4.0;
  CMat m = CMat::Identity(3, 3);
  m(2, 2) = 4.0;
  const auto s = extremal_singular_values(a, m);
  // diag(a) / diag(m) in the M-geometry.
  EXPECT_NEAR(s.sigma_min, 0.5, 1e-14);
  EXPECT_NEAR(s.sigma_max, 2.0, 1e-14);
}

TEST(SingularValues, LanczosMatchesDenseOracle)
{
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; trial++)
  {
    const int n = 40 + 13 * trial;
    const auto [a, m] = test::random_system(n, rng);
    const auto dense = extremal_singular_values(CMat(a), CMat(m.cast<Complex>()));
    const auto iterative = extremal_singular_values_lanczos(a, m);
    EXPECT_NEAR(iterative.sigma_min / dense.sigma_min, 1.0, 1e-8) << n;
    EXPECT_NEAR(iterative.sigma_max / dense.sigma_max, 1.0, 1e-8) << n;
  }
}

TEST(SingularValues, DispatchUsesDenseBelowLimit)
{
  std::mt19937_64 rng(7);
  const auto [a, m] = test::random_system(50, rng);
  SvdOptions opts;
  const auto s = extremal_singular_values(a, m, opts);
  const auto dense = extremal_singular_values(CMat(a), CMat(m.cast<Complex>()));
  EXPECT_EQ(s.sigma_min, dense.sigma_min);
  EXPECT_EQ(s.sigma_max, dense.sigma_max);
}

TEST(SingularValues, RejectsIndefiniteGram)
{
  CMat m = CMat::Identity(2, 2);
  m(1, 1) = -1.0;
  EXPECT_THROW(extremal_singular_values(CMat::Identity(2, 2), m), NumericalError);
}
