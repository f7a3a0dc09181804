// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <fmt/format.h>

namespace arbilomod
{

struct Factorization::Impl
{
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
};

Factorization::Factorization(const SpMat &a) : impl_(std::make_unique<Impl>())
{
  if (a.rows() != a.cols())
  {
    throw InvalidInput("factorize: matrix must be square");
  }
  if (a.rows() == 0)
  {
    return;
  }
  SpMat compressed = a;
  compressed.makeCompressed();
  impl_->lu.analyzePattern(compressed);
  impl_->lu.factorize(compressed);
  if (impl_->lu.info() != Eigen::Success)
  {
    throw SingularFactorization(
        fmt::format("sparse LU failed ({}x{}): {}", a.rows(), a.cols(), impl_->lu.lastErrorMessage()));
  }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization &&) noexcept = default;
Factorization &Factorization::operator=(Factorization &&) noexcept = default;

int Factorization::rows() const { return static_cast<int>(impl_->lu.rows()); }

namespace
{

template <typename M>
void check_finite(const M &x)
{
  if (!x.allFinite())
  {
    throw SingularFactorization("sparse solve produced non-finite values (singular matrix)");
  }
}

}  // namespace

CVec Factorization::solve(const CVec &b) const
{
  if (b.size() == 0)
  {
    return b;
  }
  CVec x = impl_->lu.solve(b);
  check_finite(x);
  return x;
}

CMat Factorization::solve(const CMat &b) const
{
  if (b.size() == 0)
  {
    return b;
  }
  CMat x = impl_->lu.solve(b);
  check_finite(x);
  return x;
}

CVec Factorization::solve_adjoint(const CVec &b) const
{
  if (b.size() == 0)
  {
    return b;
  }
  CVec x = impl_->lu.adjoint().solve(b);
  check_finite(x);
  return x;
}

struct GramFactorization::Impl
{
  Eigen::SimplicialLDLT<RSpMat> ldlt;
};

GramFactorization::GramFactorization(const RSpMat &m) : impl_(std::make_unique<Impl>())
{
  impl_->ldlt.compute(m);
  if (impl_->ldlt.info() != Eigen::Success)
  {
    throw SingularFactorization("Gram matrix factorization failed (not positive definite?)");
  }
}

GramFactorization::~GramFactorization() = default;
GramFactorization::GramFactorization(GramFactorization &&) noexcept = default;
GramFactorization &GramFactorization::operator=(GramFactorization &&) noexcept = default;

CVec GramFactorization::solve(const CVec &b) const
{
  const RVec re = impl_->ldlt.solve(RVec(b.real()));
  const RVec im = impl_->ldlt.solve(RVec(b.imag()));
  CVec x(b.size());
  x.real() = re;
  x.imag() = im;
  return x;
}

CMat apply_gram(const RSpMat &m, const CMat &x)
{
  CMat y(m.rows(), x.cols());
  y.real() = m * RMat(x.real());
  y.imag() = m * RMat(x.imag());
  return y;
}

CVec apply_gram(const RSpMat &m, const CVec &x)
{
  CVec y(m.rows());
  y.real() = m * RVec(x.real());
  y.imag() = m * RVec(x.imag());
  return y;
}

namespace
{

template <typename Scalar>
Eigen::SparseMatrix<Scalar> extract_block_impl(const Eigen::SparseMatrix<Scalar> &a,
                                               std::span<const int> rows,
                                               std::span<const int> cols)
{
  std::vector<int> row_pos(a.rows(), -1);
  for (std::size_t k = 0; k < rows.size(); k++)
  {
    row_pos[rows[k]] = static_cast<int>(k);
  }
  std::vector<Eigen::Triplet<Scalar>> trip;
  for (std::size_t c = 0; c < cols.size(); c++)
  {
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(a, cols[c]); it; ++it)
    {
      const int r = row_pos[it.row()];
      if (r >= 0)
      {
        trip.emplace_back(r, static_cast<int>(c), it.value());
      }
    }
  }
  Eigen::SparseMatrix<Scalar> out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
  return out;
}

}  // namespace

RSpMat extract_block(const RSpMat &a, std::span<const int> rows, std::span<const int> cols)
{
  return extract_block_impl(a, rows, cols);
}

SpMat extract_block(const SpMat &a, std::span<const int> rows, std::span<const int> cols)
{
  return extract_block_impl(a, rows, cols);
}

void normalize_phase(Eigen::Ref<CVec> v)
{
  if (v.size() == 0)
  {
    return;
  }
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0)
  {
    return;
  }
  for (Eigen::Index i = 0; i < v.size(); i++)
  {
    const double mag = std::abs(v[i]);
    if (mag > 1e-12 * peak)
    {
      v *= std::conj(v[i]) / mag;
      v[i] = Complex(mag, 0.0);
      return;
    }
  }
}

namespace
{

double m_norm(const RSpMat &gram, const CVec &v)
{
  return std::sqrt(std::max(0.0, v.dot(apply_gram(gram, v)).real()));
}

// Two passes of classical Gram-Schmidt against the first `count` columns of q.
void orthogonalize_against(const CMat &q, Eigen::Index count, const RSpMat &gram, CVec &v)
{
  if (count == 0)
  {
    return;
  }
  for (int pass = 0; pass < 2; pass++)
  {
    const CVec mv = apply_gram(gram, v);
    const CVec coeff = q.leftCols(count).adjoint() * mv;
    v -= q.leftCols(count) * coeff;
  }
}

}  // namespace

CMat m_orthonormalize(const CMat &vectors, const RSpMat &gram, double drop_tol)
{
  CMat q(vectors.rows(), vectors.cols());
  Eigen::Index count = 0;
  for (Eigen::Index k = 0; k < vectors.cols(); k++)
  {
    CVec v = vectors.col(k);
    const double original = m_norm(gram, v);
    if (original == 0.0)
    {
      continue;
    }
    orthogonalize_against(q, count, gram, v);
    const double norm = m_norm(gram, v);
    if (norm <= drop_tol * original)
    {
      continue;
    }
    v /= norm;
    normalize_phase(v);
    q.col(count++) = v;
  }
  return q.leftCols(count);
}

GreedyResult greedy_compress(const CMat &snapshots, const RSpMat &gram, double tol, int max_size)
{
  if (!(tol > 0.0))
  {
    throw InvalidInput("greedy_compress: tolerance must be positive");
  }
  if (snapshots.rows() != gram.rows())
  {
    throw InvalidInput("greedy_compress: snapshot and Gram dimensions differ");
  }
  GreedyResult result;
  const Eigen::Index n = snapshots.rows();
  const Eigen::Index count = snapshots.cols();
  result.basis.resize(n, 0);

  CMat residual = snapshots;
  CMat m_residual = apply_gram(gram, residual);
  std::vector<double> norm(count), err(count, 0.0);
  double largest = 0.0;
  for (Eigen::Index k = 0; k < count; k++)
  {
    norm[k] = std::sqrt(std::max(0.0, residual.col(k).dot(m_residual.col(k)).real()));
    largest = std::max(largest, norm[k]);
  }
  std::vector<bool> live(count, false);
  for (Eigen::Index k = 0; k < count; k++)
  {
    live[k] = largest > 0.0 && norm[k] > kGreedyNegligible * largest;
    err[k] = live[k] ? 1.0 : 0.0;
  }
  auto max_error = [&]()
  {
    double m = 0.0;
    for (double e : err)
    {
      m = std::max(m, e);
    }
    return m;
  };
  result.trajectory.push_back(max_error());

  CMat q(n, std::min<Eigen::Index>(count, std::max(max_size, 0)));
  Eigen::Index size = 0;
  while (result.trajectory.back() > tol && size < max_size && size < q.cols())
  {
    Eigen::Index pick = -1;
    for (Eigen::Index k = 0; k < count; k++)
    {
      if (!live[k])
      {
        continue;
      }
      if (pick < 0 || err[k] > err[pick] || (err[k] == err[pick] && norm[k] > norm[pick]))
      {
        pick = k;
      }
    }
    if (pick < 0)
    {
      break;
    }
    CVec v = residual.col(pick);
    orthogonalize_against(q, size, gram, v);
    const double vnorm = m_norm(gram, v);
    if (vnorm <= kGreedyNegligible * norm[pick])
    {
      // Numerically inside the span already.
      live[pick] = false;
      err[pick] = 0.0;
      result.trajectory.back() = max_error();
      continue;
    }
    v /= vnorm;
    normalize_phase(v);
    q.col(size++) = v;
    result.picked.push_back(static_cast<int>(pick));

    const CVec mv = apply_gram(gram, v);
    const CVec coeff = residual.adjoint() * mv;  // conj of v^H M r_k
    residual -= v * coeff.adjoint();
    m_residual -= mv * coeff.adjoint();
    for (Eigen::Index k = 0; k < count; k++)
    {
      if (!live[k])
      {
        continue;
      }
      const double r = std::sqrt(std::max(0.0, residual.col(k).dot(m_residual.col(k)).real()));
      err[k] = r / norm[k];
    }
    result.trajectory.push_back(max_error());
  }
  result.basis = q.leftCols(size);
  return result;
}

SingularValueBounds extremal_singular_values(const CMat &a, const CMat &gram)
{
  if (a.rows() != a.cols() || gram.rows() != a.rows() || gram.cols() != a.cols())
  {
    throw InvalidInput("extremal_singular_values: dimension mismatch");
  }
  if (a.rows() == 0)
  {
    return {};
  }
  Eigen::LLT<CMat> llt(gram);
  if (llt.info() != Eigen::Success)
  {
    throw SingularFactorization("extremal_singular_values: Gram matrix is not positive definite");
  }
  const auto l = llt.matrixL();
  const CMat x = l.solve(a);
  const CMat b = l.solve(CMat(x.adjoint())).adjoint();
  Eigen::BDCSVD<CMat> svd(b);
  const RVec s = svd.singularValues();
  return {s.minCoeff(), s.maxCoeff()};
}

namespace
{

using Operator = std::function<CVec(const CVec &)>;

struct RitzEstimate
{
  double lowest = 0.0;
  double highest = 0.0;
  double residual = 0.0;  // of the requested end
  bool converged = false;
};

// Lanczos with full reorthogonalization for an operator self-adjoint in the
// inner product <x, y> = x^H B y. Stops once the Ritz value at the requested
// end has relative residual <= tol, or after max_it steps.
RitzEstimate lanczos(const Operator &op, const Operator &apply_b, Eigen::Index n, bool want_highest,
                     int max_it, double tol, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CVec v(n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    v[i] = Complex(normal(rng), normal(rng));
  }
  CVec bv = apply_b(v);
  const double norm0 = std::sqrt(v.dot(bv).real());
  v /= norm0;
  bv /= norm0;

  max_it = static_cast<int>(std::min<Eigen::Index>(max_it, n));
  CMat q(n, max_it + 1);
  CMat bq(n, max_it + 1);
  q.col(0) = v;
  bq.col(0) = bv;
  std::vector<double> alpha, beta;
  RitzEstimate est;
  for (int j = 0; j < max_it; j++)
  {
    CVec w = op(q.col(j));
    alpha.push_back(bq.col(j).dot(w).real());
    for (int pass = 0; pass < 2; pass++)
    {
      const CVec coeff = bq.leftCols(j + 1).adjoint() * w;
      w -= q.leftCols(j + 1) * coeff;
    }
    const CVec bw = apply_b(w);
    const double b = std::sqrt(std::max(0.0, w.dot(bw).real()));

    const int m = j + 1;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; k++)
    {
      t(k, k) = alpha[k];
      if (k + 1 < m)
      {
        t(k, k + 1) = t(k + 1, k) = beta[k];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    est.lowest = es.eigenvalues()[0];
    est.highest = es.eigenvalues()[m - 1];
    const int end = want_highest ? m - 1 : 0;
    const double theta = es.eigenvalues()[end];
    est.residual = std::abs(b * es.eigenvectors()(m - 1, end)) / std::max(std::abs(theta), 1e-300);
    if (est.residual <= tol || b <= 1e-300 || m == n)
    {
      est.converged = true;
      return est;
    }
    beta.push_back(b);
    q.col(j + 1) = w / b;
    bq.col(j + 1) = bw / b;
  }
  return est;
}

[[noreturn]] void not_converged(const char *what, const RitzEstimate &est, int max_it)
{
  throw ConvergenceError(fmt::format("Lanczos for {} did not converge in {} iterations "
                                     "(relative residual {:.3e})",
                                     what, max_it, est.residual),
                         est.residual);
}

// sigma_max by shift-invert Lanczos on the Hermitian-definite pencil
//   [0 A; A^H 0] z = sigma [M 0; 0 M] z,
// whose eigenvalues are +-sigma_k. With a shift s above sigma_max every
// eigenvalue of the shifted inverse is negative and sigma_max maps to the most
// negative one, well separated even when the top of the spectrum clusters.
double largest_singular_value(const SpMat &a, const RSpMat &gram, const GramFactorization &mf,
                              const SvdOptions &opts)
{
  const Eigen::Index n = a.rows();
  // Rough lower bound from a short plain run on M^-1 A^H M^-1 A.
  const Operator forward = [&](const CVec &x) -> CVec
  { return mf.solve(CVec(a.adjoint() * mf.solve(CVec(a * x)))); };
  const Operator apply_m = [&](const CVec &x) -> CVec { return apply_gram(gram, x); };
  const RitzEstimate rough = lanczos(forward, apply_m, n, true, 30, opts.tol, opts.seed);
  double lower = std::sqrt(std::max(rough.highest, 0.0));
  if (rough.converged)
  {
    return lower;
  }
  if (!(lower > 0.0))
  {
    throw NumericalError("extremal_singular_values: operator is numerically zero");
  }

  const Operator apply_b = [&](const CVec &z) -> CVec
  {
    CVec out(2 * n);
    out.head(n) = apply_gram(gram, CVec(z.head(n)));
    out.tail(n) = apply_gram(gram, CVec(z.tail(n)));
    return out;
  };
  double shift = 1.05 * lower;
  for (int attempt = 0; attempt < 30; attempt++)
  {
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(2 * (gram.nonZeros() + a.nonZeros()));
    for (int k = 0; k < gram.outerSize(); k++)
    {
      for (RSpMat::InnerIterator it(gram, k); it; ++it)
      {
        trip.emplace_back(it.row(), it.col(), -shift * it.value());
        trip.emplace_back(n + it.row(), n + it.col(), -shift * it.value());
      }
    }
    for (int k = 0; k < a.outerSize(); k++)
    {
      for (SpMat::InnerIterator it(a, k); it; ++it)
      {
        trip.emplace_back(it.row(), n + it.col(), it.value());
        trip.emplace_back(n + it.col(), it.row(), std::conj(it.value()));
      }
    }
    SpMat k(2 * n, 2 * n);
    k.setFromTriplets(trip.begin(), trip.end());
    std::optional<Factorization> lu;
    try
    {
      lu.emplace(k);
    }
    catch (const SingularFactorization &)
    {
      // The shift hit a singular value exactly.
      shift *= 1.01;
      continue;
    }
    const Operator inverse = [&](const CVec &z) -> CVec { return lu->solve(apply_b(z)); };
    const RitzEstimate est =
        lanczos(inverse, apply_b, 2 * n, false, opts.max_iterations, opts.tol, opts.seed + 1);
    if (est.highest > 0.0)
    {
      // Some singular value exceeds the shift; move past it and retry.
      lower = std::max(lower, shift + 1.0 / est.highest);
      shift = 1.05 * lower;
      continue;
    }
    if (!est.converged)
    {
      not_converged("the largest singular value", est, opts.max_iterations);
    }
    return shift + 1.0 / est.lowest;
  }
  throw ConvergenceError("extremal_singular_values: no shift above the largest singular value found",
                         1.0);
}

}  // namespace

SingularValueBounds extremal_singular_values_lanczos(const SpMat &a, const RSpMat &gram,
                                                     const SvdOptions &opts)
{
  if (a.rows() != a.cols() || gram.rows() != a.rows())
  {
    throw InvalidInput("extremal_singular_values: dimension mismatch");
  }
  if (a.rows() == 0)
  {
    return {};
  }
  const Factorization lu(a);
  const GramFactorization mf(gram);
  // A^-1 M A^-H M is M-self-adjoint with largest eigenvalue 1 / sigma_min^2.
  const Operator inverse = [&](const CVec &x) -> CVec
  { return lu.solve(apply_gram(gram, lu.solve_adjoint(apply_gram(gram, x)))); };
  const Operator apply_m = [&](const CVec &x) -> CVec { return apply_gram(gram, x); };
  const RitzEstimate low =
      lanczos(inverse, apply_m, a.rows(), true, opts.max_iterations, opts.tol, opts.seed);
  if (!low.converged)
  {
    not_converged("the smallest singular value", low, opts.max_iterations);
  }
  return {1.0 / std::sqrt(low.highest), largest_singular_value(a, gram, mf, opts)};
}

SingularValueBounds extremal_singular_values(const SpMat &a, const RSpMat &gram,
                                             const SvdOptions &opts)
{
  if (a.rows() <= opts.dense_limit)
  {
    return extremal_singular_values(CMat(a), CMat(gram.cast<Complex>()));
  }
  return extremal_singular_values_lanczos(a, gram, opts);
}

}  // namespace arbilomod
