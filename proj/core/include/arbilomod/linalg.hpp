// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_LINALG_HPP
#define ARBILOMOD_LINALG_HPP

#include <climits>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "arbilomod/common.hpp"

namespace arbilomod
{

// Sparse LU of a square complex matrix, reusable for any number of right-hand
// sides. Solves are const and may run concurrently.
class Factorization
{
public:
  explicit Factorization(const SpMat &a);
  ~Factorization();
  Factorization(Factorization &&) noexcept;
  Factorization &operator=(Factorization &&) noexcept;

  int rows() const;
  CVec solve(const CVec &b) const;
  CMat solve(const CMat &b) const;
  // Solves A^H x = b.
  CVec solve_adjoint(const CVec &b) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Sparse Cholesky-type factorization of a real symmetric positive definite Gram matrix.
class GramFactorization
{
public:
  explicit GramFactorization(const RSpMat &m);
  ~GramFactorization();
  GramFactorization(GramFactorization &&) noexcept;
  GramFactorization &operator=(GramFactorization &&) noexcept;

  CVec solve(const CVec &b) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// M X for a real Gram matrix and complex X.
CMat apply_gram(const RSpMat &m, const CMat &x);
CVec apply_gram(const RSpMat &m, const CVec &x);

// Principal or off-diagonal block A(rows, cols); index lists need not be sorted.
RSpMat extract_block(const RSpMat &a, std::span<const int> rows, std::span<const int> cols);
SpMat extract_block(const SpMat &a, std::span<const int> rows, std::span<const int> cols);

// Rotates the first non-negligible entry of v onto the positive real axis.
void normalize_phase(Eigen::Ref<CVec> v);

// Columns of the result are M-orthonormal to ~1e-14 and span the input columns.
// Columns whose M-norm after orthogonalization falls below drop_tol times their
// original norm are discarded.
CMat m_orthonormalize(const CMat &vectors, const RSpMat &gram, double drop_tol = 1e-12);

struct GreedyResult
{
  CMat basis;                       // M-orthonormal columns in pick order
  std::vector<double> trajectory;   // max relative error with 0, 1, ..., size vectors
  std::vector<int> picked;          // snapshot index chosen at each step
};

// Snapshots whose M-norm is below this fraction of the largest one are treated as zero.
inline constexpr double kGreedyNegligible = 1e-12;

// Weak greedy in the M-geometry: repeatedly adds the snapshot with the largest
// relative projection error until that error is <= tol or max_size is reached.
GreedyResult greedy_compress(const CMat &snapshots, const RSpMat &gram, double tol,
                             int max_size = INT_MAX);

struct SingularValueBounds
{
  double sigma_min = 0.0;  // inf-sup constant
  double sigma_max = 0.0;  // continuity constant
};

struct SvdOptions
{
  int dense_limit = 400;  // dimensions up to this use the dense path
  double tol = 1e-10;      // Lanczos relative Ritz residual
  int max_iterations = 400;
  std::uint64_t seed = 12345;
};

// Extremal generalized singular values of A in the geometry of the Hermitian
// positive definite M, i.e. the extremal square roots of A^H M^{-1} A x = lambda M x.
SingularValueBounds extremal_singular_values(const CMat &a, const CMat &gram);
SingularValueBounds extremal_singular_values(const SpMat &a, const RSpMat &gram,
                                             const SvdOptions &opts = {});
// Iterative path regardless of size.
SingularValueBounds extremal_singular_values_lanczos(const SpMat &a, const RSpMat &gram,
                                                     const SvdOptions &opts = {});

}  // namespace arbilomod

#endif  // ARBILOMOD_LINALG_HPP
