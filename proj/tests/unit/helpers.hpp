// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_TESTS_HELPERS_HPP
#define ARBILOMOD_TESTS_HELPERS_HPP

#include <random>

#include "arbilomod/geometry_io.hpp"
#include "arbilomod/problem.hpp"

namespace arbilomod::test
{

// Unit square with an off-centre PEC bar crossing a subdomain boundary.
inline GeometrySpec bar_geometry()
{
  GeometrySpec g;
  g.pec = {Rect{0.3, 0.45, 0.8, 0.55}};
  return g;
}

inline Problem small_problem(int n = 8, int m = 2, GeometrySpec geo = bar_geometry())
{
  DiscretizationOptions opts;
  opts.nx = opts.ny = n;
  opts.mx = opts.my = m;
  return make_problem(geo, opts);
}

inline CVec random_vector(Eigen::Index n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal;
  CVec v(n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    v[i] = Complex(normal(rng), normal(rng));
  }
  return v;
}

inline CMat random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
{
  CMat m(rows, cols);
  for (Eigen::Index c = 0; c < cols; c++)
  {
    m.col(c) = random_vector(rows, rng);
  }
  return m;
}

inline double m_norm(const RSpMat &gram, const CVec &v)
{
  return std::sqrt(std::max(0.0, v.dot(gram.cast<Complex>() * v).real()));
}

// Sparse complex A and sparse SPD M of dimension n for singular value checks.
inline std::pair<SpMat, RSpMat> random_system(int n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<Eigen::Triplet<Complex>> at;
  std::vector<Eigen::Triplet<double>> mt;
  for (int i = 0; i < n; i++)
  {
    at.emplace_back(i, i, Complex(2.0 + normal(rng), normal(rng)));
    for (int k = 0; k < 3; k++)
    {
      at.emplace_back(i, pick(rng), Complex(normal(rng), normal(rng)));
    }
    mt.emplace_back(i, i, 4.0 + std::abs(normal(rng)));
    if (i + 1 < n)
    {
      const double off = 0.5 * normal(rng);
      mt.emplace_back(i, i + 1, off);
      mt.emplace_back(i + 1, i, off);
    }
  }
  SpMat a(n, n);
  a.setFromTriplets(at.begin(), at.end());
  RSpMat m(n, n);
  m.setFromTriplets(mt.begin(), mt.end());
  return {a, m};
}

}  // namespace arbilomod::test

#endif  // ARBILOMOD_TESTS_HELPERS_HPP
