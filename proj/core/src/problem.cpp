// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/problem.hpp"

namespace arbilomod
{

Problem make_problem(const GeometrySpec &geo, const DiscretizationOptions &opts,
                     const CurrentDensity &current)
{
  Problem p;
  p.geometry = geo;
  p.options = opts;
  p.mesh = build_mesh(opts.nx, opts.ny, geo.domain);
  p.dofs = mask_dofs(p.mesh, geo);
  p.grid = assign_subdomains(p.mesh, opts.mx, opts.my);
  auto sys = std::make_shared<AffineSystem>(
      assemble_affine(p.mesh, p.dofs, geo, opts.material, current));
  p.system = sys;
  p.decomposition = std::make_shared<SpaceDecomposition>(classify(p.grid, p.dofs), sys,
                                                         2.0 * pi * opts.extension_frequency);
  return p;
}

}  // namespace arbilomod
