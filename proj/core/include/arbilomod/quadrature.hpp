// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_QUADRATURE_HPP
#define ARBILOMOD_QUADRATURE_HPP

#include <array>
#include <span>

namespace arbilomod::quadrature
{

// Barycentric point with weight normalised to sum 1 over the triangle.
struct TrianglePoint
{
  std::array<double, 3> lambda;
  double weight;
};

// Edge-midpoint rule, exact for quadratics.
std::span<const TrianglePoint> edge_midpoints();

// 16-point symmetric rule, exact for polynomials of degree 8.
std::span<const TrianglePoint> degree8();

}  // namespace arbilomod::quadrature

#endif  // ARBILOMOD_QUADRATURE_HPP
