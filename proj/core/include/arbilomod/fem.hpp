// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_FEM_HPP
#define ARBILOMOD_FEM_HPP

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "arbilomod/common.hpp"
#include "arbilomod/mesh.hpp"

namespace arbilomod
{

namespace constants
{
inline constexpr double eps0 = 8.8541878128e-12;  // F/m
inline constexpr double mu0 = 4.0e-7 * pi;        // H/m
inline constexpr double z0 = 376.730313;          // Ohm
}  // namespace constants

struct MaterialParams
{
  double eps = constants::eps0;
  double mu = constants::mu0;
  double kappa = 1.0 / constants::z0;  // surface admittance of free space, S
  double omega_max = 2.0 * pi * 1.0e9;

  void validate() const;
};

// Frequencies in Hz, strictly increasing and positive.
class ParameterSet
{
public:
  ParameterSet() = default;
  explicit ParameterSet(std::vector<double> frequencies);

  // count points from f_min to f_max, both included.
  static ParameterSet equidistant(double f_min, double f_max, int count);

  std::size_t size() const { return frequencies_.size(); }
  bool empty() const { return frequencies_.empty(); }
  double frequency(std::size_t k) const { return frequencies_[k]; }
  double omega(std::size_t k) const { return 2.0 * pi * frequencies_[k]; }
  const std::vector<double> &frequencies() const { return frequencies_; }

private:
  std::vector<double> frequencies_;
};

struct ElementMatrices
{
  // Unscaled: curl(i, j) = int curl w_i curl w_j, mass(i, j) = int w_i . w_j,
  // for local edges oriented vertex[k] -> vertex[k+1].
  Eigen::Matrix3d curl;
  Eigen::Matrix3d mass;
};

ElementMatrices element_matrices(const std::array<Point, 3> &triangle);

// Lowest-order Whitney function of local edge k, evaluated at barycentric lambda.
std::array<double, 2> whitney_value(const std::array<Point, 3> &triangle, int k,
                                    const std::array<double, 3> &lambda);
double whitney_curl(const std::array<Point, 3> &triangle, int k);

// Real source current density j(x, y).
using CurrentDensity = std::function<std::array<double, 2>(Point)>;

// exp(-((x - 0.1)^2 + (y - 0.5)^2) / 1.25e-3) e_y
CurrentDensity gaussian_line_current(Point centre = {0.1, 0.5}, double width_sq = 1.25e-3);

// Frequency-affine full-order system over the active DOFs:
//   A(omega) = curl - omega^2 mass + i omega robin,   f(omega) = -i omega current
// with 1/mu, eps and kappa already folded into curl, mass and robin.
struct AffineSystem
{
  RSpMat curl;
  RSpMat mass;
  RSpMat robin;
  CVec current;  // int j . w_e
  RSpMat gram;   // V inner product: curl + omega_max^2 mass + omega_max robin
  MaterialParams material;

  int size() const { return static_cast<int>(curl.rows()); }
};

// Quadrature for the right-hand side: the degree-8 rule on each triangle,
// optionally on 4^refinement congruent sub-triangles.
CVec assemble_rhs(const StructuredMesh &mesh, const ActiveDofs &dofs, const CurrentDensity &current,
                  int refinement = 0);

AffineSystem assemble_affine(const StructuredMesh &mesh, const ActiveDofs &dofs,
                             const GeometrySpec &geo, const MaterialParams &mat,
                             const CurrentDensity &current = gaussian_line_current());

struct SystemAt
{
  SpMat matrix;
  CVec rhs;
};

SpMat system_matrix(const AffineSystem &sys, double omega);
CVec system_rhs(const AffineSystem &sys, double omega);
SystemAt system_at(const AffineSystem &sys, double omega);

// Full-order solution u_h(omega).
CVec solve_full(const AffineSystem &sys, double omega);

// M-norm of v.
double v_norm(const AffineSystem &sys, const CVec &v);

// Coordinate format: "# rows cols nnz" header then "row col value" (0-based).
void write_coo(std::ostream &out, const RSpMat &m);

}  // namespace arbilomod

#endif  // ARBILOMOD_FEM_HPP
