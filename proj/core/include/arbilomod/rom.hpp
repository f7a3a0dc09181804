// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_ROM_HPP
#define ARBILOMOD_ROM_HPP

#include <optional>
#include <vector>

#include "arbilomod/problem.hpp"
#include "arbilomod/training.hpp"

namespace arbilomod
{

struct ReducedBlock
{
  SpaceId space;
  int offset = 0;
  int size = 0;
  std::vector<int> support;  // compact DOFs of the rows of `vectors`
  CMat vectors;
  std::vector<int> subdomains;
};

// Galerkin projection onto the direct sum of local bases. Operators are kept as
// dense matrices, but only block pairs with touching supports are ever filled.
struct ReducedModel
{
  int n_active = 0;
  std::vector<ReducedBlock> blocks;
  std::vector<std::pair<int, int>> coupled_blocks;  // (a, b) pairs that were assembled
  CMat curl, mass, robin, gram;
  CVec current;

  int dim() const { return static_cast<int>(curl.rows()); }
  CMat matrix(double omega) const;
  CVec rhs(double omega) const;
  // Global field sum_a B_a c_a.
  CVec reconstruct(const CVec &coefficients) const;
  // B^H x for a global vector x.
  CVec restrict_adjoint(const CVec &x) const;
  // Dense aggregated basis B (n_active x dim); intended for small checks.
  CMat aggregated_basis() const;
};

// True when the supports of two spaces can share a triangle.
bool spaces_coupled(const SpaceId &a, const SpaceId &b);

ReducedModel assemble_rom(const std::vector<LocalBasis> &bases, const Problem &problem);

struct RomSolution
{
  CVec coefficients;
  CVec field;
};

RomSolution solve_rom(const ReducedModel &rom, double omega);

// u_h(omega) for every parameter, solved concurrently.
std::vector<CVec> full_solutions(const AffineSystem &sys, const ParameterSet &xi);

struct ErrorSweep
{
  std::vector<double> frequencies;
  std::vector<double> errors;     // relative V-norm error, NaN where the ROM failed
  std::vector<bool> unstable;
  double max_error = 0.0;         // max over the stable points
  int failures = 0;
};

ErrorSweep rom_error_sweep(const ReducedModel &rom, const AffineSystem &sys, const ParameterSet &xi,
                           const std::vector<CVec> *reference = nullptr);

// Relative V-norm distance of u from the span of the aggregated basis.
double best_approximation_error(const ReducedModel &rom, const AffineSystem &sys, const CVec &u);

int total_size(const std::vector<LocalBasis> &bases);

}  // namespace arbilomod

#endif  // ARBILOMOD_ROM_HPP
