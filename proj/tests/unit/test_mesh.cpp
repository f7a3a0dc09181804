// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "arbilomod/common.hpp"
#include "arbilomod/geometry_io.hpp"
#include "arbilomod/mesh.hpp"

using namespace arbilomod;

namespace
{

const Rect unit{0.0, 0.0, 1.0, 1.0};

double cross(const Point &a, const Point &b, const Point &c)
{
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

}  // namespace

TEST(Mesh, EdgeCountMatchesCombinatorics)
{
  for (auto [nx, ny] : {std::pair{1, 1}, {2, 3}, {5, 4}, {20, 20}})
  {
    const auto mesh = build_mesh(nx, ny, unit);
    EXPECT_EQ(mesh.num_edges(), StructuredMesh::expected_edge_count(nx, ny));
    EXPECT_EQ(mesh.num_triangles(), 4 * nx * ny);
    EXPECT_EQ(static_cast<int>(mesh.vertices.size()), (nx + 1) * (ny + 1) + nx * ny);
  }
}

TEST(Mesh, PublishedDofCount)
{
  EXPECT_EQ(build_mesh(100, 100, unit).num_edges(), 60200);
}

TEST(Mesh, TrianglesAreCounterClockwiseAndSignsMatchOrientation)
{
  const auto mesh = build_mesh(3, 2, Rect{0.0, 0.0, 2.0, 1.0});
  const double area = mesh.hx * mesh.hy / 4.0;
  for (const auto &t : mesh.triangles)
  {
    const auto &p = mesh.vertices;
    EXPECT_NEAR(0.5 * cross(p[t.vertex[0]], p[t.vertex[1]], p[t.vertex[2]]), area, 1e-14);
    for (int l = 0; l < 3; l++)
    {
      const int a = t.vertex[l];
      const int b = t.vertex[(l + 1) % 3];
      const Edge &e = mesh.edges[t.edge[l]];
      EXPECT_EQ(std::min(a, b), e.a);
      EXPECT_EQ(std::max(a, b), e.b);
      EXPECT_EQ(t.sign[l], a < b ? 1 : -1);
    }
  }
}

TEST(Mesh, EdgeTriangleIncidence)
{
  const auto mesh = build_mesh(4, 3, unit);
  int boundary = 0;
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    const Edge &edge = mesh.edges[e];
    ASSERT_GE(edge.triangle[0], 0);
    boundary += edge.on_boundary() ? 1 : 0;
    Side side;
    EXPECT_EQ(mesh.boundary_side(e, side), edge.on_boundary());
    for (int t : edge.triangle)
    {
      if (t >= 0)
      {
        const auto &te = mesh.triangles[t].edge;
        EXPECT_NE(std::find(te.begin(), te.end(), e), te.end());
      }
    }
  }
  EXPECT_EQ(boundary, 2 * (4 + 3));
}

TEST(Mesh, IndexHelpers)
{
  const auto mesh = build_mesh(3, 2, unit);
  const Edge &h = mesh.edges[mesh.horizontal_edge(1, 2)];
  EXPECT_EQ(h.a, mesh.grid_vertex(1, 2));
  EXPECT_EQ(h.b, mesh.grid_vertex(2, 2));
  const Edge &v = mesh.edges[mesh.vertical_edge(3, 0)];
  EXPECT_EQ(v.a, mesh.grid_vertex(3, 0));
  EXPECT_EQ(v.b, mesh.grid_vertex(3, 1));
  const Edge &d = mesh.edges[mesh.diagonal_edge(2, 1, 0)];
  EXPECT_EQ(d.b, mesh.centre_vertex(2, 1));
}

TEST(Mesh, RejectsBadInput)
{
  EXPECT_THROW(build_mesh(0, 3, unit), InvalidInput);
  EXPECT_THROW(build_mesh(2, 2, Rect{0.0, 0.0, 0.0, 1.0}), InvalidInput);
}

TEST(Masking, DirichletSidesOnly)
{
  const auto mesh = build_mesh(4, 4, unit);
  const auto dofs = mask_dofs(mesh, GeometrySpec{});
  EXPECT_EQ(dofs.count(DisableReason::dirichlet), 8);
  EXPECT_EQ(dofs.count(DisableReason::pec), 0);
  EXPECT_EQ(dofs.size(), mesh.num_edges() - 8);
  for (int d = 0; d < dofs.size(); d++)
  {
    EXPECT_EQ(dofs.compact[dofs.edge_of[d]], d);
  }
}

TEST(Masking, PecUsesStrictMidpointContainment)
{
  const auto mesh = build_mesh(4, 4, unit);
  GeometrySpec geo;
  geo.pec = {Rect{0.25, 0.25, 0.75, 0.75}};
  const auto dofs = mask_dofs(mesh, geo);
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    const bool inside = geo.pec[0].contains_strictly(mesh.edge_midpoints[e]);
    EXPECT_EQ(dofs.reason[e] == DisableReason::pec, inside) << e;
  }
  // 2x2 squares fully inside: 4 interior grid edges, 16 diagonals.
  EXPECT_EQ(dofs.count(DisableReason::pec), 20);
}

TEST(Masking, PecTakesPrecedenceOverDirichlet)
{
  const auto mesh = build_mesh(4, 4, unit);
  GeometrySpec geo;
  geo.pec = {Rect{-0.1, -0.1, 0.6, 0.3}};
  const auto dofs = mask_dofs(mesh, geo);
  const int bottom_edge = mesh.horizontal_edge(0, 0);
  EXPECT_EQ(dofs.reason[bottom_edge], DisableReason::pec);
}

TEST(Subdomains, AssignmentAndInterfaces)
{
  const auto mesh = build_mesh(6, 4, unit);
  const auto grid = assign_subdomains(mesh, 3, 2);
  EXPECT_EQ(grid.num_subdomains(), 6);
  EXPECT_EQ(grid.squares_x, 2);
  EXPECT_EQ(grid.squares_y, 2);
  // (mx - 1) * my + mx * (my - 1)
  EXPECT_EQ(grid.interfaces.size(), 7u);
  std::set<std::pair<int, int>> pairs(grid.interfaces.begin(), grid.interfaces.end());
  EXPECT_TRUE(pairs.count({0, 1}));
  EXPECT_TRUE(pairs.count({0, 3}));
  EXPECT_FALSE(pairs.count({0, 4}));
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    const auto &owner = grid.edge_owner[e];
    const auto &edge = mesh.edges[e];
    if (owner.is_interface())
    {
      EXPECT_LT(owner.first, owner.second);
      EXPECT_FALSE(edge.on_boundary());
    }
    else
    {
      EXPECT_EQ(grid.triangle_subdomain[edge.triangle[0]], owner.first);
    }
  }
}

TEST(Subdomains, RejectsUnevenSplit)
{
  const auto mesh = build_mesh(5, 4, unit);
  EXPECT_THROW(assign_subdomains(mesh, 2, 2), InvalidInput);
}

TEST(GeometryIo, ParseAndRoundTrip)
{
  std::istringstream in("domain = 0 0 2 1\n"
                        "pec = 0.1 0.2 0.3 0.4   # first\n"
                        "pec = 1.0 0.5 1.5 0.6\n"
                        "robin = left\n");
  const auto geo = parse_geometry(in);
  EXPECT_EQ(geo.pec.size(), 2u);
  EXPECT_TRUE(geo.robin_sides.contains(Side::left));
  EXPECT_FALSE(geo.robin_sides.contains(Side::right));
  // The side left out of one list lands in the other.
  EXPECT_TRUE(geo.dirichlet_sides.contains(Side::right));
  std::ostringstream out;
  write_geometry(out, geo);
  std::istringstream back(out.str());
  EXPECT_EQ(parse_geometry(back), geo);
}

TEST(GeometryIo, RejectsMalformedInput)
{
  for (const char *text : {"pec = 0 0 1\n", "pec = 0 0 0 1\n", "robin = front\n", "colour = red\n",
                           "domain = 0 0 x 1\n"})
  {
    std::istringstream in(text);
    EXPECT_THROW(parse_geometry(in), InvalidInput) << text;
  }
}

TEST(GeometryIo, ShippedGeometriesLoad)
{
  const auto a = read_geometry(ARBILOMOD_DATA_DIR "/geometry1.geo");
  const auto b = read_geometry(ARBILOMOD_DATA_DIR "/geometry2.geo");
  EXPECT_EQ(a.pec.size() + 1, b.pec.size());
}
