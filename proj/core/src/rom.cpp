// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/rom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "arbilomod/linalg.hpp"
#include "arbilomod/parallel.hpp"

namespace arbilomod
{

bool spaces_coupled(const SpaceId &a, const SpaceId &b)
{
  if (a.is_volume() && b.is_volume())
  {
    return a.i == b.i;
  }
  auto touches = [](const SpaceId &s, int sub) { return s.i == sub || (s.is_interface() && s.j == sub); };
  return touches(b, a.i) || (a.is_interface() && touches(b, a.j));
}

CMat ReducedModel::matrix(double omega) const
{
  return curl - Complex(omega * omega, 0.0) * mass + Complex(0.0, omega) * robin;
}

CVec ReducedModel::rhs(double omega) const { return Complex(0.0, -omega) * current; }

CVec ReducedModel::reconstruct(const CVec &coefficients) const
{
  if (coefficients.size() != dim())
  {
    throw InvalidInput("reconstruct: coefficient vector has the wrong length");
  }
  CVec out = CVec::Zero(n_active);
  for (const auto &b : blocks)
  {
    const CVec local = b.vectors * coefficients.segment(b.offset, b.size);
    for (std::size_t p = 0; p < b.support.size(); p++)
    {
      out[b.support[p]] += local[static_cast<Eigen::Index>(p)];
    }
  }
  return out;
}

CVec ReducedModel::restrict_adjoint(const CVec &x) const
{
  CVec out(dim());
  for (const auto &b : blocks)
  {
    CVec local(static_cast<Eigen::Index>(b.support.size()));
    for (std::size_t p = 0; p < b.support.size(); p++)
    {
      local[static_cast<Eigen::Index>(p)] = x[b.support[p]];
    }
    out.segment(b.offset, b.size) = b.vectors.adjoint() * local;
  }
  return out;
}

CMat ReducedModel::aggregated_basis() const
{
  CMat out = CMat::Zero(n_active, dim());
  for (const auto &b : blocks)
  {
    for (std::size_t p = 0; p < b.support.size(); p++)
    {
      out.block(b.support[p], b.offset, 1, b.size) = b.vectors.row(static_cast<Eigen::Index>(p));
    }
  }
  return out;
}

ReducedModel assemble_rom(const std::vector<LocalBasis> &bases, const Problem &problem)
{
  const AffineSystem &sys = problem.sys();
  ReducedModel rom;
  rom.n_active = sys.size();
  int offset = 0;
  for (const auto &basis : bases)
  {
    if (basis.size() == 0)
    {
      continue;
    }
    ReducedBlock b;
    b.space = basis.space;
    b.offset = offset;
    b.size = basis.size();
    b.vectors = basis.vectors;
    b.subdomains = problem.layout().subdomains(basis.space);
    b.support.reserve(basis.support_edges.size());
    for (int e : basis.support_edges)
    {
      if (e < 0 || e >= problem.mesh.num_edges() || problem.dofs.compact[e] < 0)
      {
        throw InvalidInput(fmt::format("basis of {} references edge {} which is not an active DOF",
                                       basis.space.str(), e));
      }
      b.support.push_back(problem.dofs.compact[e]);
    }
    offset += b.size;
    rom.blocks.push_back(std::move(b));
  }
  const int n = offset;
  rom.curl = CMat::Zero(n, n);
  rom.mass = CMat::Zero(n, n);
  rom.robin = CMat::Zero(n, n);
  rom.gram = CMat::Zero(n, n);
  rom.current = CVec::Zero(n);

  const int nb = static_cast<int>(rom.blocks.size());
  std::vector<std::vector<int>> partners(nb);
  for (int a = 0; a < nb; a++)
  {
    for (int b = 0; b < nb; b++)
    {
      if (spaces_coupled(rom.blocks[a].space, rom.blocks[b].space))
      {
        partners[b].push_back(a);
        rom.coupled_blocks.emplace_back(a, b);
      }
    }
  }

  // Column block b at a time: rows restricted to the supports of its partners.
  parallel_for(static_cast<std::size_t>(nb),
               [&](std::size_t bi)
               {
                 const ReducedBlock &b = rom.blocks[bi];
                 for (int ai : partners[bi])
                 {
                   const ReducedBlock &a = rom.blocks[ai];
                   auto project = [&](const RSpMat &m, CMat &target)
                   {
                     const RSpMat sub = extract_block(m, a.support, b.support);
                     CMat mb(sub.rows(), b.size);
                     mb.real() = sub * RMat(b.vectors.real());
                     mb.imag() = sub * RMat(b.vectors.imag());
                     target.block(a.offset, b.offset, a.size, b.size) = a.vectors.adjoint() * mb;
                   };
                   project(sys.curl, rom.curl);
                   project(sys.mass, rom.mass);
                   project(sys.robin, rom.robin);
                   project(sys.gram, rom.gram);
                 }
                 CVec local(static_cast<Eigen::Index>(b.support.size()));
                 for (std::size_t p = 0; p < b.support.size(); p++)
                 {
                   local[static_cast<Eigen::Index>(p)] = sys.current[b.support[p]];
                 }
                 rom.current.segment(b.offset, b.size) = b.vectors.adjoint() * local;
               });
  return rom;
}

RomSolution solve_rom(const ReducedModel &rom, double omega)
{
  if (rom.dim() < 1)
  {
    throw InvalidInput("solve_rom: reduced model is empty");
  }
  const CMat a = rom.matrix(omega);
  Eigen::PartialPivLU<CMat> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
  {
    throw ReducedInstability(fmt::format(
        "reduced system at f={:.6e} Hz is numerically singular (rcond {:.2e}); the Galerkin "
        "projection lost inf-sup stability",
        omega / (2.0 * pi), rcond));
  }
  RomSolution sol;
  sol.coefficients = lu.solve(rom.rhs(omega));
  if (!sol.coefficients.allFinite())
  {
    throw ReducedInstability("reduced solve produced non-finite coefficients");
  }
  sol.field = rom.reconstruct(sol.coefficients);
  return sol;
}

std::vector<CVec> full_solutions(const AffineSystem &sys, const ParameterSet &xi)
{
  std::vector<CVec> out(xi.size());
  parallel_for(xi.size(), [&](std::size_t k) { out[k] = solve_full(sys, xi.omega(k)); });
  return out;
}

ErrorSweep rom_error_sweep(const ReducedModel &rom, const AffineSystem &sys, const ParameterSet &xi,
                           const std::vector<CVec> *reference)
{
  std::vector<CVec> computed;
  if (!reference)
  {
    computed = full_solutions(sys, xi);
    reference = &computed;
  }
  if (reference->size() != xi.size())
  {
    throw InvalidInput("rom_error_sweep: reference solutions do not match the parameter set");
  }
  ErrorSweep sweep;
  sweep.frequencies = xi.frequencies();
  sweep.errors.assign(xi.size(), std::numeric_limits<double>::quiet_NaN());
  sweep.unstable.assign(xi.size(), false);
  for (std::size_t k = 0; k < xi.size(); k++)
  {
    const CVec &u = (*reference)[k];
    try
    {
      const RomSolution sol = solve_rom(rom, xi.omega(k));
      const double nu = v_norm(sys, u);
      sweep.errors[k] = v_norm(sys, u - sol.field) / (nu > 0.0 ? nu : 1.0);
      sweep.max_error = std::max(sweep.max_error, sweep.errors[k]);
    }
    catch (const ReducedInstability &)
    {
      sweep.unstable[k] = true;
      sweep.failures++;
    }
  }
  return sweep;
}

double best_approximation_error(const ReducedModel &rom, const AffineSystem &sys, const CVec &u)
{
  const double nu = v_norm(sys, u);
  if (rom.dim() == 0)
  {
    return nu > 0.0 ? 1.0 : 0.0;
  }
  const CVec rhs = rom.restrict_adjoint(apply_gram(sys.gram, u));
  const CVec c = rom.gram.ldlt().solve(rhs);
  const CVec r = u - rom.reconstruct(c);
  return v_norm(sys, r) / (nu > 0.0 ? nu : 1.0);
}

int total_size(const std::vector<LocalBasis> &bases)
{
  int n = 0;
  for (const auto &b : bases)
  {
    n += b.size();
  }
  return n;
}

}  // namespace arbilomod
