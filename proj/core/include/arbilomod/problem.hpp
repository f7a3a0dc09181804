// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_PROBLEM_HPP
#define ARBILOMOD_PROBLEM_HPP

#include <memory>

#include "arbilomod/decomposition.hpp"
#include "arbilomod/fem.hpp"
#include "arbilomod/mesh.hpp"

namespace arbilomod
{

struct DiscretizationOptions
{
  int nx = 20;
  int ny = 20;
  int mx = 4;
  int my = 4;
  MaterialParams material;
  double extension_frequency = 505.0e6;  // Hz
};

// Everything derived from one geometry on a fixed mesh and subdomain grid.
struct Problem
{
  GeometrySpec geometry;
  DiscretizationOptions options;
  StructuredMesh mesh;
  ActiveDofs dofs;
  SubdomainGrid grid;
  std::shared_ptr<const AffineSystem> system;
  std::shared_ptr<const SpaceDecomposition> decomposition;

  const AffineSystem &sys() const { return *system; }
  const SpaceDecomposition &dec() const { return *decomposition; }
  const SpaceLayout &layout() const { return decomposition->layout(); }
};

Problem make_problem(const GeometrySpec &geo, const DiscretizationOptions &opts,
                     const CurrentDensity &current = gaussian_line_current());

}  // namespace arbilomod

#endif  // ARBILOMOD_PROBLEM_HPP
