// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/fem.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "arbilomod/linalg.hpp"
#include "arbilomod/quadrature.hpp"

namespace arbilomod
{

namespace quadrature
{

namespace
{

constexpr std::array<TrianglePoint, 3> kEdgeMidpoints = {{
    {{0.5, 0.5, 0.0}, 1.0 / 3.0},
    {{0.0, 0.5, 0.5}, 1.0 / 3.0},
    {{0.5, 0.0, 0.5}, 1.0 / 3.0},
}};

constexpr std::array<TrianglePoint, 16> make_degree8()
{
  std::array<TrianglePoint, 16> pts{};
  int n = 0;
  pts[n++] = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.144315607677787};
  constexpr std::array<std::array<double, 2>, 3> orbit3 = {{
      {0.459292588292723, 0.095091634267285},
      {0.170569307751760, 0.103217370534718},
      {0.050547228317031, 0.032458497623198},
  }};
  for (const auto &[a, w] : orbit3)
  {
    const double b = 1.0 - 2.0 * a;
    pts[n++] = {{b, a, a}, w};
    pts[n++] = {{a, b, a}, w};
    pts[n++] = {{a, a, b}, w};
  }
  constexpr double a = 0.263112829634638;
  constexpr double b = 0.728492392955404;
  constexpr double c = 0.008394777409958;
  constexpr double w = 0.027230314174435;
  pts[n++] = {{a, b, c}, w};
  pts[n++] = {{a, c, b}, w};
  pts[n++] = {{b, a, c}, w};
  pts[n++] = {{b, c, a}, w};
  pts[n++] = {{c, a, b}, w};
  pts[n++] = {{c, b, a}, w};
  return pts;
}

constexpr std::array<TrianglePoint, 16> kDegree8 = make_degree8();

}  // namespace

std::span<const TrianglePoint> edge_midpoints() { return kEdgeMidpoints; }
std::span<const TrianglePoint> degree8() { return kDegree8; }

}  // namespace quadrature

void MaterialParams::validate() const
{
  if (!(eps > 0.0 && mu > 0.0 && kappa > 0.0 && omega_max > 0.0))
  {
    throw InvalidInput("material parameters must be strictly positive");
  }
}

ParameterSet::ParameterSet(std::vector<double> frequencies) : frequencies_(std::move(frequencies))
{
  for (std::size_t k = 0; k < frequencies_.size(); k++)
  {
    if (!(frequencies_[k] > 0.0) || (k > 0 && !(frequencies_[k] > frequencies_[k - 1])))
    {
      throw InvalidInput("parameter set must be positive and strictly increasing");
    }
  }
}

ParameterSet ParameterSet::equidistant(double f_min, double f_max, int count)
{
  if (count < 1 || !(f_min > 0.0) || (count > 1 && !(f_max > f_min)))
  {
    throw InvalidInput("equidistant parameter set needs count >= 1 and 0 < f_min < f_max");
  }
  std::vector<double> f(count);
  for (int k = 0; k < count; k++)
  {
    f[k] = count == 1 ? f_min : f_min + (f_max - f_min) * k / (count - 1);
  }
  return ParameterSet(std::move(f));
}

namespace
{

struct Gradients
{
  std::array<std::array<double, 2>, 3> g;
  double area;
};

Gradients barycentric_gradients(const std::array<Point, 3> &t)
{
  const double area2 = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[2].x - t[0].x) * (t[1].y - t[0].y);
  if (!(area2 > 0.0))
  {
    throw InvalidInput("triangle must have positive signed area");
  }
  Gradients out;
  out.area = 0.5 * area2;
  out.g[0] = {(t[1].y - t[2].y) / area2, (t[2].x - t[1].x) / area2};
  out.g[1] = {(t[2].y - t[0].y) / area2, (t[0].x - t[2].x) / area2};
  out.g[2] = {(t[0].y - t[1].y) / area2, (t[1].x - t[0].x) / area2};
  return out;
}

std::array<double, 2> whitney(const Gradients &g, int k, const std::array<double, 3> &lambda)
{
  const int a = k;
  const int b = (k + 1) % 3;
  return {lambda[a] * g.g[b][0] - lambda[b] * g.g[a][0],
          lambda[a] * g.g[b][1] - lambda[b] * g.g[a][1]};
}

double whitney_curl(const Gradients &g, int k)
{
  const int a = k;
  const int b = (k + 1) % 3;
  return 2.0 * (g.g[a][0] * g.g[b][1] - g.g[a][1] * g.g[b][0]);
}

std::array<Point, 3> corners(const StructuredMesh &mesh, const Triangle &t)
{
  return {mesh.vertices[t.vertex[0]], mesh.vertices[t.vertex[1]], mesh.vertices[t.vertex[2]]};
}

}  // namespace

std::array<double, 2> whitney_value(const std::array<Point, 3> &triangle, int k,
                                    const std::array<double, 3> &lambda)
{
  return whitney(barycentric_gradients(triangle), k, lambda);
}

double whitney_curl(const std::array<Point, 3> &triangle, int k)
{
  return whitney_curl(barycentric_gradients(triangle), k);
}

ElementMatrices element_matrices(const std::array<Point, 3> &triangle)
{
  const Gradients g = barycentric_gradients(triangle);
  ElementMatrices m;
  Eigen::Vector3d c;
  for (int k = 0; k < 3; k++)
  {
    c[k] = whitney_curl(g, k);
  }
  m.curl = g.area * c * c.transpose();
  m.mass.setZero();
  for (const auto &qp : quadrature::edge_midpoints())
  {
    std::array<std::array<double, 2>, 3> w;
    for (int k = 0; k < 3; k++)
    {
      w[k] = whitney(g, k, qp.lambda);
    }
    for (int i = 0; i < 3; i++)
    {
      for (int j = 0; j < 3; j++)
      {
        m.mass(i, j) += qp.weight * g.area * (w[i][0] * w[j][0] + w[i][1] * w[j][1]);
      }
    }
  }
  return m;
}

CurrentDensity gaussian_line_current(Point centre, double width_sq)
{
  return [centre, width_sq](Point p) -> std::array<double, 2>
  {
    const double dx = p.x - centre.x;
    const double dy = p.y - centre.y;
    return {0.0, std::exp(-(dx * dx + dy * dy) / width_sq)};
  };
}

CVec assemble_rhs(const StructuredMesh &mesh, const ActiveDofs &dofs, const CurrentDensity &current,
                  int refinement)
{
  if (refinement < 0)
  {
    throw InvalidInput("assemble_rhs: refinement must be >= 0");
  }
  CVec f = CVec::Zero(dofs.size());
  const int n_sub = 1 << refinement;
  const double sub_weight = 1.0 / (n_sub * n_sub);
  for (const Triangle &t : mesh.triangles)
  {
    const auto pts = corners(mesh, t);
    const Gradients g = barycentric_gradients(pts);
    std::array<double, 3> acc{};
    // Uniform sub-triangles in barycentric coordinates: "up" cells (i, j) and "down" cells.
    auto integrate = [&](const std::array<std::array<double, 3>, 3> &sub)
    {
      for (const auto &qp : quadrature::degree8())
      {
        std::array<double, 3> lam{};
        for (int v = 0; v < 3; v++)
        {
          for (int c = 0; c < 3; c++)
          {
            lam[c] += qp.lambda[v] * sub[v][c];
          }
        }
        const Point x{lam[0] * pts[0].x + lam[1] * pts[1].x + lam[2] * pts[2].x,
                      lam[0] * pts[0].y + lam[1] * pts[1].y + lam[2] * pts[2].y};
        const auto j = current(x);
        const double w = qp.weight * sub_weight * g.area;
        for (int k = 0; k < 3; k++)
        {
          const auto wk = whitney(g, k, lam);
          acc[k] += w * (j[0] * wk[0] + j[1] * wk[1]);
        }
      }
    };
    const double s = 1.0 / n_sub;
    for (int i = 0; i < n_sub; i++)
    {
      for (int j = 0; i + j < n_sub; j++)
      {
        // barycentric (l1, l2) lattice coordinates
        auto node = [s](int a, int b) -> std::array<double, 3>
        { return {1.0 - (a + b) * s, a * s, b * s}; };
        integrate({node(i, j), node(i + 1, j), node(i, j + 1)});
        if (i + j + 1 < n_sub)
        {
          integrate({node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
        }
      }
    }
    for (int k = 0; k < 3; k++)
    {
      const int row = dofs.compact[t.edge[k]];
      if (row >= 0)
      {
        f[row] += static_cast<double>(t.sign[k]) * acc[k];
      }
    }
  }
  return f;
}

AffineSystem assemble_affine(const StructuredMesh &mesh, const ActiveDofs &dofs,
                             const GeometrySpec &geo, const MaterialParams &mat,
                             const CurrentDensity &current)
{
  mat.validate();
  geo.validate();
  if (static_cast<int>(dofs.compact.size()) != mesh.num_edges())
  {
    throw InvalidInput("assemble_affine: DOF mask does not belong to this mesh");
  }
  const int n = dofs.size();
  std::vector<Eigen::Triplet<double>> curl_t, mass_t, robin_t;
  curl_t.reserve(mesh.triangles.size() * 9);
  mass_t.reserve(mesh.triangles.size() * 9);
  for (const Triangle &t : mesh.triangles)
  {
    const ElementMatrices em = element_matrices(corners(mesh, t));
    for (int i = 0; i < 3; i++)
    {
      const int r = dofs.compact[t.edge[i]];
      if (r < 0)
      {
        continue;
      }
      for (int j = 0; j < 3; j++)
      {
        const int c = dofs.compact[t.edge[j]];
        if (c < 0)
        {
          continue;
        }
        const double s = t.sign[i] * t.sign[j];
        curl_t.emplace_back(r, c, s * em.curl(i, j) / mat.mu);
        mass_t.emplace_back(r, c, s * em.mass(i, j) * mat.eps);
      }
    }
  }
  // Tangential trace of a Whitney function is 1/|e| on its own edge and zero on
  // every other edge, so the boundary term is diagonal.
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    Side side{};
    const int r = dofs.compact[e];
    if (r < 0 || !mesh.boundary_side(e, side) || !geo.robin_sides.contains(side))
    {
      continue;
    }
    const Point &a = mesh.vertices[mesh.edges[e].a];
    const Point &b = mesh.vertices[mesh.edges[e].b];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    robin_t.emplace_back(r, r, mat.kappa / len);
  }

  AffineSystem sys;
  sys.material = mat;
  sys.curl.resize(n, n);
  sys.mass.resize(n, n);
  sys.robin.resize(n, n);
  sys.curl.setFromTriplets(curl_t.begin(), curl_t.end());
  sys.mass.setFromTriplets(mass_t.begin(), mass_t.end());
  sys.robin.setFromTriplets(robin_t.begin(), robin_t.end());
  sys.gram = sys.curl + (mat.omega_max * mat.omega_max) * sys.mass + mat.omega_max * sys.robin;
  sys.curl.makeCompressed();
  sys.mass.makeCompressed();
  sys.robin.makeCompressed();
  sys.gram.makeCompressed();
  sys.current = assemble_rhs(mesh, dofs, current);
  return sys;
}

SpMat system_matrix(const AffineSystem &sys, double omega)
{
  SpMat a = sys.curl.cast<Complex>() - Complex(omega * omega, 0.0) * sys.mass.cast<Complex>() +
            Complex(0.0, omega) * sys.robin.cast<Complex>();
  a.makeCompressed();
  return a;
}

CVec system_rhs(const AffineSystem &sys, double omega)
{
  return Complex(0.0, -omega) * sys.current;
}

SystemAt system_at(const AffineSystem &sys, double omega)
{
  if (!(omega > 0.0))
  {
    throw InvalidInput("system_at: omega must be positive");
  }
  return {system_matrix(sys, omega), system_rhs(sys, omega)};
}

CVec solve_full(const AffineSystem &sys, double omega)
{
  const SystemAt s = system_at(sys, omega);
  Factorization lu(s.matrix);
  return lu.solve(s.rhs);
}

double v_norm(const AffineSystem &sys, const CVec &v)
{
  const RVec re = v.real();
  const RVec im = v.imag();
  return std::sqrt(std::max(0.0, re.dot(sys.gram * re) + im.dot(sys.gram * im)));
}

void write_coo(std::ostream &out, const RSpMat &m)
{
  out << fmt::format("# {} {} {}\n", m.rows(), m.cols(), m.nonZeros());
  for (int k = 0; k < m.outerSize(); k++)
  {
    for (RSpMat::InnerIterator it(m, k); it; ++it)
    {
      out << fmt::format("{} {} {:.17g}\n", it.row(), it.col(), it.value());
    }
  }
}

}  // namespace arbilomod
