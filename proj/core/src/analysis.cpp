// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/analysis.hpp"

#include <cmath>

#include "arbilomod/parallel.hpp"

namespace arbilomod
{

std::vector<StabilityPoint> stability_sweep(const AffineSystem &sys, const ParameterSet &xi,
                                            const SvdOptions &opts)
{
  std::vector<StabilityPoint> out(xi.size());
  parallel_for(xi.size(),
               [&](std::size_t k)
               {
                 StabilityPoint &p = out[k];
                 p.frequency = xi.frequency(k);
                 try
                 {
                   const auto s =
                       extremal_singular_values(system_matrix(sys, xi.omega(k)), sys.gram, opts);
                   p.beta = s.sigma_min;
                   p.gamma = s.sigma_max;
                 }
                 catch (const NumericalError &err)
                 {
                   p.ok = false;
                   p.beta = p.gamma = std::nan("");
                   p.error = err.what();
                 }
               });
  return out;
}

namespace
{

CMat stack(const std::vector<CVec> &columns, Eigen::Index rows)
{
  CMat s(rows, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); k++)
  {
    s.col(static_cast<Eigen::Index>(k)) = columns[k];
  }
  return s;
}

}  // namespace

GreedyResult global_greedy_nwidth(const AffineSystem &sys, const ParameterSet &xi, double tol,
                                  int max_size, const std::vector<CVec> *solutions)
{
  std::vector<CVec> computed;
  if (!solutions)
  {
    computed = full_solutions(sys, xi);
    solutions = &computed;
  }
  return greedy_compress(stack(*solutions, sys.size()), sys.gram, tol, max_size);
}

std::vector<LocalBasis> localized_reference_bases(const Problem &problem, const ParameterSet &xi,
                                                  double tol, int max_size,
                                                  const std::vector<CVec> *solutions)
{
  std::vector<CVec> computed;
  if (!solutions)
  {
    computed = full_solutions(problem.sys(), xi);
    solutions = &computed;
  }
  const CMat snapshots = stack(*solutions, problem.sys().size());
  const auto spaces = problem.layout().spaces();
  std::vector<LocalBasis> out(spaces.size());
  parallel_for(spaces.size(),
               [&](std::size_t k)
               { out[k] = compress_components(spaces[k], problem, snapshots, tol, max_size); });
  return out;
}

std::vector<LocalBasis> truncate_all(const std::vector<LocalBasis> &bases, double tol)
{
  std::vector<LocalBasis> out;
  out.reserve(bases.size());
  for (const auto &b : bases)
  {
    out.push_back(b.truncated(tol));
  }
  return out;
}

std::vector<SizeErrorPoint> error_vs_size(const std::vector<LocalBasis> &bases,
                                          const Problem &problem, const ParameterSet &xi,
                                          const std::vector<double> &tolerances,
                                          const std::vector<CVec> *solutions)
{
  std::vector<CVec> computed;
  if (!solutions)
  {
    computed = full_solutions(problem.sys(), xi);
    solutions = &computed;
  }
  std::vector<SizeErrorPoint> out;
  for (double tol : tolerances)
  {
    const auto truncated = truncate_all(bases, tol);
    const ReducedModel rom = assemble_rom(truncated, problem);
    SizeErrorPoint p;
    p.tol = tol;
    p.size = rom.dim();
    if (rom.dim() == 0)
    {
      p.max_error = 1.0;
    }
    else
    {
      const ErrorSweep sweep = rom_error_sweep(rom, problem.sys(), xi, solutions);
      p.max_error = sweep.max_error;
      p.failures = sweep.failures;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<LocalBasis> truncate_to_total_size(const std::vector<LocalBasis> &bases,
                                               int target_size)
{
  std::vector<LocalBasis> best = truncate_all(bases, 1.0);
  for (int k = 1; k <= 280; k++)
  {
    const double tol = std::pow(10.0, -k / 20.0);
    auto candidate = truncate_all(bases, tol);
    if (total_size(candidate) > target_size)
    {
      break;
    }
    best = std::move(candidate);
  }
  return best;
}

std::vector<InfSupTrackRow> reduced_infsup_track(const std::vector<std::vector<LocalBasis>> &nested,
                                                 const Problem &problem,
                                                 const std::vector<double> &frequencies)
{
  std::vector<InfSupTrackRow> out;
  for (const auto &bases : nested)
  {
    const ReducedModel rom = assemble_rom(bases, problem);
    std::vector<InfSupTrackRow> rows(frequencies.size());
    parallel_for(frequencies.size(),
                 [&](std::size_t k)
                 {
                   InfSupTrackRow &r = rows[k];
                   r.size = rom.dim();
                   r.frequency = frequencies[k];
                   if (rom.dim() == 0)
                   {
                     r.ok = false;
                     return;
                   }
                   try
                   {
                     r.beta = extremal_singular_values(rom.matrix(2.0 * pi * frequencies[k]), rom.gram)
                                  .sigma_min;
                   }
                   catch (const NumericalError &)
                   {
                     r.ok = false;
                     r.beta = std::nan("");
                   }
                 });
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

}  // namespace arbilomod
