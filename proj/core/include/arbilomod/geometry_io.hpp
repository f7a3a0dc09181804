// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_GEOMETRY_IO_HPP
#define ARBILOMOD_GEOMETRY_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "arbilomod/mesh.hpp"

namespace arbilomod
{

// Plain-text geometry description:
//
//   # comment
//   domain    = 0 0 1 1
//   robin     = left right
//   dirichlet = bottom top
//   pec       = 0.30 0.38 0.75 0.42     (one line per rectangle)
//
// Sides missing from both lists are rejected by GeometrySpec::validate().
GeometrySpec parse_geometry(std::istream &in, const std::string &origin = "<stream>");
GeometrySpec read_geometry(const std::filesystem::path &path);
void write_geometry(std::ostream &out, const GeometrySpec &geo);

// One row per statistic (name,value).
void write_mesh_stats_csv(std::ostream &out, const StructuredMesh &mesh, const ActiveDofs &dofs,
                          const SubdomainGrid &grid);

}  // namespace arbilomod

#endif  // ARBILOMOD_GEOMETRY_IO_HPP
