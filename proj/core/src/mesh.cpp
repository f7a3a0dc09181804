// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/mesh.hpp"

#include <algorithm>
#include <set>

#include "arbilomod/common.hpp"

namespace arbilomod
{

std::string to_string(Side side)
{
  switch (side)
  {
    case Side::left:
      return "left";
    case Side::right:
      return "right";
    case Side::bottom:
      return "bottom";
    case Side::top:
      return "top";
  }
  return "?";
}

void GeometrySpec::validate() const
{
  if (domain.degenerate())
  {
    throw InvalidInput("geometry: degenerate domain rectangle");
  }
  if ((robin_sides.bits() & dirichlet_sides.bits()) != 0)
  {
    throw InvalidInput("geometry: a side is both Robin and Dirichlet");
  }
  if ((robin_sides.bits() | dirichlet_sides.bits()) != 0x0f)
  {
    throw InvalidInput("geometry: every side must be either Robin or Dirichlet");
  }
}

bool StructuredMesh::boundary_side(int e, Side &side) const
{
  const int n_h = nx * (ny + 1);
  const int n_v = (nx + 1) * ny;
  if (e < n_h)
  {
    const int j = e / nx;
    if (j == 0)
    {
      side = Side::bottom;
      return true;
    }
    if (j == ny)
    {
      side = Side::top;
      return true;
    }
    return false;
  }
  if (e < n_h + n_v)
  {
    const int i = (e - n_h) % (nx + 1);
    if (i == 0)
    {
      side = Side::left;
      return true;
    }
    if (i == nx)
    {
      side = Side::right;
      return true;
    }
  }
  return false;
}

StructuredMesh build_mesh(int nx, int ny, const Rect &domain)
{
  if (nx < 1 || ny < 1)
  {
    throw InvalidInput("build_mesh: square counts must be >= 1");
  }
  if (domain.degenerate())
  {
    throw InvalidInput("build_mesh: degenerate domain rectangle");
  }

  StructuredMesh mesh;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.rect = domain;
  mesh.hx = (domain.x1 - domain.x0) / nx;
  mesh.hy = (domain.y1 - domain.y0) / ny;

  mesh.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1) + nx * ny));
  for (int j = 0; j <= ny; j++)
  {
    for (int i = 0; i <= nx; i++)
    {
      mesh.vertices.push_back({domain.x0 + i * mesh.hx, domain.y0 + j * mesh.hy});
    }
  }
  for (int q = 0; q < ny; q++)
  {
    for (int p = 0; p < nx; p++)
    {
      mesh.vertices.push_back(
          {domain.x0 + (p + 0.5) * mesh.hx, domain.y0 + (q + 0.5) * mesh.hy});
    }
  }

  mesh.edges.resize(static_cast<std::size_t>(StructuredMesh::expected_edge_count(nx, ny)));
  auto set_edge = [&mesh](int e, int u, int v)
  {
    mesh.edges[e].a = std::min(u, v);
    mesh.edges[e].b = std::max(u, v);
  };
  for (int j = 0; j <= ny; j++)
  {
    for (int i = 0; i < nx; i++)
    {
      set_edge(mesh.horizontal_edge(i, j), mesh.grid_vertex(i, j), mesh.grid_vertex(i + 1, j));
    }
  }
  for (int j = 0; j < ny; j++)
  {
    for (int i = 0; i <= nx; i++)
    {
      set_edge(mesh.vertical_edge(i, j), mesh.grid_vertex(i, j), mesh.grid_vertex(i, j + 1));
    }
  }
  for (int q = 0; q < ny; q++)
  {
    for (int p = 0; p < nx; p++)
    {
      const int c = mesh.centre_vertex(p, q);
      set_edge(mesh.diagonal_edge(p, q, 0), c, mesh.grid_vertex(p, q));
      set_edge(mesh.diagonal_edge(p, q, 1), c, mesh.grid_vertex(p + 1, q));
      set_edge(mesh.diagonal_edge(p, q, 2), c, mesh.grid_vertex(p + 1, q + 1));
      set_edge(mesh.diagonal_edge(p, q, 3), c, mesh.grid_vertex(p, q + 1));
    }
  }

  mesh.triangles.reserve(static_cast<std::size_t>(4 * nx * ny));
  for (int q = 0; q < ny; q++)
  {
    for (int p = 0; p < nx; p++)
    {
      const int c = mesh.centre_vertex(p, q);
      const std::array<int, 4> corner = {mesh.grid_vertex(p, q), mesh.grid_vertex(p + 1, q),
                                         mesh.grid_vertex(p + 1, q + 1),
                                         mesh.grid_vertex(p, q + 1)};
      const std::array<int, 4> side_edge = {mesh.horizontal_edge(p, q),
                                            mesh.vertical_edge(p + 1, q),
                                            mesh.horizontal_edge(p, q + 1),
                                            mesh.vertical_edge(p, q)};
      // Triangle k: corner k -> corner k+1 -> centre (counter-clockwise).
      for (int k = 0; k < 4; k++)
      {
        Triangle t;
        t.square = q * nx + p;
        t.vertex = {corner[k], corner[(k + 1) % 4], c};
        t.edge = {side_edge[k], mesh.diagonal_edge(p, q, (k + 1) % 4),
                  mesh.diagonal_edge(p, q, k)};
        for (int l = 0; l < 3; l++)
        {
          const int from = t.vertex[l];
          const int to = t.vertex[(l + 1) % 3];
          t.sign[l] = from < to ? 1 : -1;
        }
        const int tri = static_cast<int>(mesh.triangles.size());
        for (int e : t.edge)
        {
          auto &slots = mesh.edges[e].triangle;
          (slots[0] < 0 ? slots[0] : slots[1]) = tri;
        }
        mesh.triangles.push_back(t);
      }
    }
  }

  mesh.edge_midpoints.reserve(mesh.edges.size());
  for (const auto &e : mesh.edges)
  {
    const Point &pa = mesh.vertices[e.a];
    const Point &pb = mesh.vertices[e.b];
    mesh.edge_midpoints.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
  }
  return mesh;
}

int ActiveDofs::count(DisableReason r) const
{
  return static_cast<int>(std::count(reason.begin(), reason.end(), r));
}

ActiveDofs mask_dofs(const StructuredMesh &mesh, const GeometrySpec &geo)
{
  geo.validate();
  ActiveDofs dofs;
  const int n = mesh.num_edges();
  dofs.reason.assign(n, DisableReason::none);
  dofs.compact.assign(n, -1);
  for (int e = 0; e < n; e++)
  {
    const Point m = mesh.edge_midpoints[e];
    bool in_pec = false;
    for (const Rect &r : geo.pec)
    {
      if (r.contains_strictly(m))
      {
        in_pec = true;
        break;
      }
    }
    Side side{};
    if (in_pec)
    {
      dofs.reason[e] = DisableReason::pec;
    }
    else if (mesh.boundary_side(e, side) && geo.dirichlet_sides.contains(side))
    {
      dofs.reason[e] = DisableReason::dirichlet;
    }
    if (dofs.reason[e] == DisableReason::none)
    {
      dofs.compact[e] = static_cast<int>(dofs.edge_of.size());
      dofs.edge_of.push_back(e);
    }
  }
  return dofs;
}

Rect SubdomainGrid::bounds(const StructuredMesh &mesh, int s) const
{
  const int px = sx(s) * squares_x;
  const int py = sy(s) * squares_y;
  return {mesh.rect.x0 + px * mesh.hx, mesh.rect.y0 + py * mesh.hy,
          mesh.rect.x0 + (px + squares_x) * mesh.hx, mesh.rect.y0 + (py + squares_y) * mesh.hy};
}

SubdomainGrid assign_subdomains(const StructuredMesh &mesh, int mx, int my)
{
  if (mx < 1 || my < 1)
  {
    throw InvalidInput("assign_subdomains: subdomain counts must be >= 1");
  }
  if (mesh.nx % mx != 0 || mesh.ny % my != 0)
  {
    throw InvalidInput("assign_subdomains: subdomain grid must divide the mesh grid evenly");
  }
  SubdomainGrid grid;
  grid.mx = mx;
  grid.my = my;
  grid.squares_x = mesh.nx / mx;
  grid.squares_y = mesh.ny / my;

  grid.triangle_subdomain.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); t++)
  {
    const int sq = mesh.triangles[t].square;
    const int p = sq % mesh.nx;
    const int q = sq / mesh.nx;
    grid.triangle_subdomain[t] = grid.index(p / grid.squares_x, q / grid.squares_y);
  }

  std::set<std::pair<int, int>> pairs;
  grid.edge_owner.resize(mesh.edges.size());
  for (std::size_t e = 0; e < mesh.edges.size(); e++)
  {
    const auto &tri = mesh.edges[e].triangle;
    const int s0 = grid.triangle_subdomain[tri[0]];
    const int s1 = tri[1] >= 0 ? grid.triangle_subdomain[tri[1]] : s0;
    EdgeOwner owner;
    owner.first = std::min(s0, s1);
    if (s0 != s1)
    {
      owner.second = std::max(s0, s1);
      pairs.insert({owner.first, owner.second});
    }
    grid.edge_owner[e] = owner;
  }
  grid.interfaces.assign(pairs.begin(), pairs.end());
  return grid;
}

}  // namespace arbilomod
