// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_MESH_HPP
#define ARBILOMOD_MESH_HPP

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace arbilomod
{

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect
{
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  bool degenerate() const { return !(x1 > x0 && y1 > y0); }
  bool contains_strictly(Point p) const
  {
    return p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1;
  }
  bool operator==(const Rect &) const = default;
};

enum class Side : std::uint8_t
{
  left = 0,
  right = 1,
  bottom = 2,
  top = 3
};

std::string to_string(Side side);

// Small bit set over the four sides of the outer rectangle.
class SideSet
{
public:
  constexpr SideSet() = default;
  constexpr SideSet(std::initializer_list<Side> sides)
  {
    for (Side s : sides)
    {
      insert(s);
    }
  }
  constexpr void insert(Side s) { bits_ |= bit(s); }
  constexpr bool contains(Side s) const { return (bits_ & bit(s)) != 0; }
  constexpr SideSet complement() const
  {
    SideSet out;
    out.bits_ = static_cast<std::uint8_t>(~bits_ & 0x0f);
    return out;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  bool operator==(const SideSet &) const = default;

private:
  static constexpr std::uint8_t bit(Side s)
  {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(s));
  }
  std::uint8_t bits_ = 0;
};

struct GeometrySpec
{
  Rect domain{0.0, 0.0, 1.0, 1.0};
  std::vector<Rect> pec;
  SideSet robin_sides{Side::left, Side::right};
  SideSet dirichlet_sides{Side::bottom, Side::top};

  // Throws InvalidInput unless the Robin/Dirichlet sides partition the boundary
  // and the domain rectangle is non-degenerate.
  void validate() const;
  bool operator==(const GeometrySpec &) const = default;
};

struct Triangle
{
  std::array<int, 3> vertex{};
  // Local edge k joins vertex[k] -> vertex[(k + 1) % 3].
  std::array<int, 3> edge{};
  // +1 when the local direction agrees with the global edge orientation.
  std::array<int, 3> sign{};
  int square = -1;
};

struct Edge
{
  int a = -1;  // a < b, global orientation a -> b
  int b = -1;
  std::array<int, 2> triangle{-1, -1};

  bool on_boundary() const { return triangle[1] < 0; }
};

// Criss-cross triangulation: each square is split by both diagonals into four
// counter-clockwise triangles around a centre vertex.
class StructuredMesh
{
public:
  int nx = 0;
  int ny = 0;
  Rect rect;
  double hx = 0.0;
  double hy = 0.0;

  std::vector<Point> vertices;
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;
  std::vector<Point> edge_midpoints;

  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  int grid_vertex(int i, int j) const { return j * (nx + 1) + i; }
  int centre_vertex(int p, int q) const { return (nx + 1) * (ny + 1) + q * nx + p; }
  int horizontal_edge(int i, int j) const { return j * nx + i; }
  int vertical_edge(int i, int j) const { return nx * (ny + 1) + j * (nx + 1) + i; }
  // Diagonal from the centre of square (p, q) to corner c (0=ll, 1=lr, 2=ur, 3=ul).
  int diagonal_edge(int p, int q, int c) const
  {
    return nx * (ny + 1) + (nx + 1) * ny + 4 * (q * nx + p) + c;
  }

  // Outer side an edge lies on, if any.
  bool boundary_side(int edge, Side &side) const;

  static long long expected_edge_count(int nx, int ny)
  {
    return static_cast<long long>(nx + 1) * ny + static_cast<long long>(nx) * (ny + 1) +
           4LL * nx * ny;
  }
};

StructuredMesh build_mesh(int nx, int ny, const Rect &domain);

enum class DisableReason : std::uint8_t
{
  none = 0,
  pec = 1,
  dirichlet = 2
};

struct ActiveDofs
{
  std::vector<DisableReason> reason;  // per edge
  std::vector<int> compact;           // edge -> compact index, -1 if disabled
  std::vector<int> edge_of;           // compact index -> edge

  int size() const { return static_cast<int>(edge_of.size()); }
  bool active(int edge) const { return compact[edge] >= 0; }
  int count(DisableReason r) const;
};

ActiveDofs mask_dofs(const StructuredMesh &mesh, const GeometrySpec &geo);

// Ownership of one edge: interior of subdomain `first`, or interface
// {first, second} with first < second.
struct EdgeOwner
{
  int first = -1;
  int second = -1;
  bool is_interface() const { return second >= 0; }
};

class SubdomainGrid
{
public:
  int mx = 0;
  int my = 0;
  int squares_x = 0;  // squares per subdomain along x
  int squares_y = 0;
  std::vector<int> triangle_subdomain;
  std::vector<EdgeOwner> edge_owner;
  // Axis-adjacent pairs (i < j) in lexicographic order.
  std::vector<std::pair<int, int>> interfaces;

  int num_subdomains() const { return mx * my; }
  int index(int sx, int sy) const { return sy * mx + sx; }
  int sx(int s) const { return s % mx; }
  int sy(int s) const { return s / mx; }
  // Rectangle covered by subdomain s.
  Rect bounds(const StructuredMesh &mesh, int s) const;
};

SubdomainGrid assign_subdomains(const StructuredMesh &mesh, int mx, int my);

}  // namespace arbilomod

#endif  // ARBILOMOD_MESH_HPP
