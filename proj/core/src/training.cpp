// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/training.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include <fmt/format.h>

#include "arbilomod/hash.hpp"
#include "arbilomod/linalg.hpp"
#include "arbilomod/parallel.hpp"

namespace arbilomod
{

std::vector<int> TrainingDomain::dofs() const
{
  std::vector<int> out;
  out.reserve(interior.size() + ring.size());
  std::merge(interior.begin(), interior.end(), ring.begin(), ring.end(), std::back_inserter(out));
  return out;
}

std::vector<int> training_block(const SpaceId &space, const SubdomainGrid &grid)
{
  int x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  if (space.is_volume())
  {
    if (space.i < 0 || space.i >= grid.num_subdomains())
    {
      throw InvalidInput(fmt::format("training_block: unknown space {}", space.str()));
    }
    x0 = grid.sx(space.i) - 1;
    x1 = grid.sx(space.i) + 1;
    y0 = grid.sy(space.i) - 1;
    y1 = grid.sy(space.i) + 1;
  }
  else
  {
    const int a = space.i;
    const int b = space.j;
    if (a < 0 || b >= grid.num_subdomains())
    {
      throw InvalidInput(fmt::format("training_block: unknown space {}", space.str()));
    }
    if (grid.sy(a) == grid.sy(b) && grid.sx(b) == grid.sx(a) + 1)
    {
      // Vertical interface line: two columns, three rows.
      x0 = grid.sx(a);
      x1 = grid.sx(b);
      y0 = grid.sy(a) - 1;
      y1 = grid.sy(a) + 1;
    }
    else if (grid.sx(a) == grid.sx(b) && grid.sy(b) == grid.sy(a) + 1)
    {
      x0 = grid.sx(a) - 1;
      x1 = grid.sx(a) + 1;
      y0 = grid.sy(a);
      y1 = grid.sy(b);
    }
    else
    {
      throw InvalidInput(fmt::format("training_block: {} is not an axis-adjacent pair", space.str()));
    }
  }
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, grid.mx - 1);
  y1 = std::min(y1, grid.my - 1);
  std::vector<int> out;
  for (int y = y0; y <= y1; y++)
  {
    for (int x = x0; x <= x1; x++)
    {
      out.push_back(grid.index(x, y));
    }
  }
  return out;
}

TrainingDomain build_training_domain(const SpaceId &space, const StructuredMesh &mesh,
                                     const SubdomainGrid &grid, const ActiveDofs &dofs)
{
  TrainingDomain td;
  td.space = space;
  td.subdomains = training_block(space, grid);
  std::vector<char> in_block(grid.num_subdomains(), 0);
  for (int s : td.subdomains)
  {
    in_block[s] = 1;
  }
  for (int e = 0; e < mesh.num_edges(); e++)
  {
    int inside = 0, total = 0;
    for (int t : mesh.edges[e].triangle)
    {
      if (t >= 0)
      {
        total++;
        inside += in_block[grid.triangle_subdomain[t]];
      }
    }
    if (inside == 0)
    {
      continue;
    }
    td.closure_edges.push_back(e);
    const int d = dofs.compact[e];
    if (d < 0)
    {
      continue;
    }
    (inside == total ? td.interior : td.ring).push_back(d);
  }
  return td;
}

std::string to_string(RandomDistribution d)
{
  return d == RandomDistribution::gaussian ? "gaussian" : "uniform";
}

void TrainingConfig::validate() const
{
  if (n_random < 0)
  {
    throw InvalidInput("training: n_random must be >= 0");
  }
  if (!(tol_local > 0.0))
  {
    throw InvalidInput("training: tol_local must be positive");
  }
  if (max_local_size < 0)
  {
    throw InvalidInput("training: max_local_size must be >= 0");
  }
}

std::uint64_t space_stream_seed(std::uint64_t seed, const SpaceId &space)
{
  const std::uint64_t id = (static_cast<std::uint64_t>(space.kind) << 62) ^
                           (static_cast<std::uint64_t>(space.i) << 31) ^
                           static_cast<std::uint64_t>(space.j + 1);
  return mix64(seed ^ mix64(id));
}

namespace
{

struct LocalOperators
{
  RSpMat curl_ii, mass_ii, robin_ii;
  RSpMat curl_ir, mass_ir, robin_ir;
  CVec current_i;
};

LocalOperators local_operators(const TrainingDomain &td, const AffineSystem &sys)
{
  LocalOperators op;
  op.curl_ii = extract_block(sys.curl, td.interior, td.interior);
  op.mass_ii = extract_block(sys.mass, td.interior, td.interior);
  op.robin_ii = extract_block(sys.robin, td.interior, td.interior);
  op.curl_ir = extract_block(sys.curl, td.interior, td.ring);
  op.mass_ir = extract_block(sys.mass, td.interior, td.ring);
  op.robin_ir = extract_block(sys.robin, td.interior, td.ring);
  op.current_i.resize(static_cast<Eigen::Index>(td.interior.size()));
  for (std::size_t k = 0; k < td.interior.size(); k++)
  {
    op.current_i[static_cast<Eigen::Index>(k)] = sys.current[td.interior[k]];
  }
  return op;
}

SpMat combine(const RSpMat &curl, const RSpMat &mass, const RSpMat &robin, double omega)
{
  SpMat a = curl.cast<Complex>() - Complex(omega * omega, 0.0) * mass.cast<Complex>() +
            Complex(0.0, omega) * robin.cast<Complex>();
  a.makeCompressed();
  return a;
}

CMat draw_ring_data(const TrainingDomain &td, std::size_t n_freq, const TrainingConfig &cfg)
{
  const Eigen::Index ring = static_cast<Eigen::Index>(td.ring.size());
  CMat g(ring, static_cast<Eigen::Index>(n_freq) * cfg.n_random);
  std::mt19937_64 rng(space_stream_seed(cfg.seed, td.space));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (Eigen::Index c = 0; c < g.cols(); c++)
  {
    for (Eigen::Index r = 0; r < ring; r++)
    {
      if (cfg.distribution == RandomDistribution::gaussian)
      {
        const double re = normal(rng);
        const double im = normal(rng);
        g(r, c) = Complex(re, im);
      }
      else
      {
        const double re = uniform(rng);
        const double im = uniform(rng);
        g(r, c) = Complex(re, im);
      }
    }
  }
  return g;
}

SnapshotSet local_snapshots(const TrainingDomain &td, const AffineSystem &sys,
                            const ParameterSet &xi, const TrainingConfig &cfg, bool particular,
                            bool random, TrainingStats *stats)
{
  const LocalOperators op = local_operators(td, sys);
  const int per_freq = (particular ? 1 : 0) + (random ? cfg.n_random : 0);
  const CMat ring_data = random ? draw_ring_data(td, xi.size(), cfg) : CMat();

  SnapshotSet out;
  out.dofs = td.dofs();
  std::vector<int> interior_pos, ring_pos;
  for (int d : td.interior)
  {
    interior_pos.push_back(
        static_cast<int>(std::lower_bound(out.dofs.begin(), out.dofs.end(), d) - out.dofs.begin()));
  }
  for (int d : td.ring)
  {
    ring_pos.push_back(
        static_cast<int>(std::lower_bound(out.dofs.begin(), out.dofs.end(), d) - out.dofs.begin()));
  }

  const Eigen::Index n_i = static_cast<Eigen::Index>(td.interior.size());
  std::vector<CMat> blocks;
  int factorizations = 0, skipped = 0;
  for (std::size_t k = 0; k < xi.size(); k++)
  {
    const double omega = xi.omega(k);
    CMat rhs(n_i, per_freq);
    int col = 0;
    if (particular)
    {
      rhs.col(col++) = Complex(0.0, -omega) * op.current_i;
    }
    CMat g;
    if (random && cfg.n_random > 0)
    {
      g = ring_data.middleCols(static_cast<Eigen::Index>(k) * cfg.n_random, cfg.n_random);
      const SpMat a_ir = combine(op.curl_ir, op.mass_ir, op.robin_ir, omega);
      rhs.middleCols(col, cfg.n_random) = -(a_ir * g);
    }
    CMat u;
    try
    {
      const Factorization lu(combine(op.curl_ii, op.mass_ii, op.robin_ii, omega));
      factorizations++;
      u = lu.solve(rhs);
    }
    catch (const SingularFactorization &err)
    {
      fmt::print(stderr, "warning: training {} skips f={:.6e} Hz: {}\n", td.space.str(),
                 xi.frequency(k), err.what());
      skipped++;
      continue;
    }
    CMat snap = CMat::Zero(static_cast<Eigen::Index>(out.dofs.size()), per_freq);
    for (Eigen::Index r = 0; r < n_i; r++)
    {
      snap.row(interior_pos[r]) = u.row(r);
    }
    if (g.size() > 0)
    {
      const int first_random = particular ? 1 : 0;
      for (std::size_t r = 0; r < ring_pos.size(); r++)
      {
        snap.row(ring_pos[r]).segment(first_random, cfg.n_random) =
            g.row(static_cast<Eigen::Index>(r));
      }
    }
    blocks.push_back(std::move(snap));
  }
  Eigen::Index total = 0;
  for (const auto &b : blocks)
  {
    total += b.cols();
  }
  out.values.resize(static_cast<Eigen::Index>(out.dofs.size()), total);
  Eigen::Index c = 0;
  for (const auto &b : blocks)
  {
    out.values.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  if (stats)
  {
    stats->local_size = static_cast<int>(n_i);
    stats->factorizations += factorizations;
    stats->skipped_frequencies += skipped;
    stats->snapshots += static_cast<int>(total);
  }
  return out;
}

}  // namespace

SnapshotSet particular_snapshots(const TrainingDomain &td, const AffineSystem &sys,
                                 const ParameterSet &xi)
{
  return local_snapshots(td, sys, xi, TrainingConfig{}, true, false, nullptr);
}

SnapshotSet random_snapshots(const TrainingDomain &td, const AffineSystem &sys,
                             const ParameterSet &xi, const TrainingConfig &cfg)
{
  cfg.validate();
  if (cfg.n_random < 1)
  {
    throw InvalidInput("random_snapshots: n_random must be >= 1");
  }
  return local_snapshots(td, sys, xi, cfg, false, true, nullptr);
}

SnapshotSet training_snapshots(const TrainingDomain &td, const AffineSystem &sys,
                               const ParameterSet &xi, const TrainingConfig &cfg,
                               TrainingStats *stats)
{
  cfg.validate();
  return local_snapshots(td, sys, xi, cfg, true, cfg.n_random > 0, stats);
}

LocalBasis LocalBasis::truncated(double tol) const
{
  for (int n = 0; n < static_cast<int>(trajectory.size()) && n <= size(); n++)
  {
    if (trajectory[n] <= tol)
    {
      return truncated_to(n);
    }
  }
  return *this;
}

LocalBasis LocalBasis::truncated_to(int n) const
{
  LocalBasis out;
  out.space = space;
  out.support_edges = support_edges;
  const int keep = std::clamp(n, 0, size());
  out.vectors = vectors.leftCols(keep);
  out.trajectory.assign(trajectory.begin(),
                        trajectory.begin() + std::min<std::size_t>(trajectory.size(), keep + 1));
  out.content_hash = content_hash;
  return out;
}

std::uint64_t training_hash(const Problem &problem, const TrainingDomain &td,
                            const ParameterSet &xi, const TrainingConfig &cfg)
{
  ContentHasher h;
  h.add(std::string_view("arbilomod-training-v1"));
  h.add(static_cast<int>(td.space.kind)).add(td.space.i).add(td.space.j);
  h.add(cfg.n_random).add(cfg.seed).add(cfg.tol_local).add(cfg.max_local_size);
  h.add(static_cast<int>(cfg.distribution));
  h.add<std::uint64_t>(xi.size());
  for (double f : xi.frequencies())
  {
    h.add(f);
  }
  const auto &mat = problem.sys().material;
  h.add(mat.eps).add(mat.mu).add(mat.kappa).add(mat.omega_max);
  h.add(problem.dec().extension_omega());
  h.add(problem.mesh.nx).add(problem.mesh.ny);
  h.add(problem.mesh.rect.x0).add(problem.mesh.rect.y0).add(problem.mesh.rect.x1).add(problem.mesh.rect.y1);
  h.add(problem.grid.mx).add(problem.grid.my);
  for (int s : td.subdomains)
  {
    h.add(s);
  }

  const auto &dofs = problem.dofs;
  const auto &sys = problem.sys();
  std::vector<char> in_closure(problem.mesh.num_edges(), 0);
  for (int e : td.closure_edges)
  {
    in_closure[e] = 1;
  }
  for (int e : td.closure_edges)
  {
    h.add(e).add(static_cast<int>(dofs.reason[e]));
    const int c = dofs.compact[e];
    if (c < 0)
    {
      continue;
    }
    for (const RSpMat *m : {&sys.curl, &sys.mass, &sys.robin})
    {
      for (RSpMat::InnerIterator it(*m, c); it; ++it)
      {
        const int other = dofs.edge_of[it.row()];
        if (in_closure[other])
        {
          h.add(other).add(it.value());
        }
      }
      h.add(-1);
    }
    h.add(sys.current[c].real()).add(sys.current[c].imag());
  }
  return h.value();
}

namespace
{

LocalBasis greedy_basis(const SpaceId &space, const Problem &problem, const CMat &components,
                        double tol, int max_size)
{
  const auto &support = problem.layout().support(space);
  const RSpMat gram = extract_block(problem.sys().gram, support, support);
  GreedyResult g = greedy_compress(components, gram, tol, max_size);
  LocalBasis basis;
  basis.space = space;
  basis.support_edges.reserve(support.size());
  for (int d : support)
  {
    basis.support_edges.push_back(problem.dofs.edge_of[d]);
  }
  basis.vectors = std::move(g.basis);
  basis.trajectory = std::move(g.trajectory);
  return basis;
}

}  // namespace

LocalBasis train_space(const SpaceId &space, const Problem &problem, const ParameterSet &xi,
                       const TrainingConfig &cfg, TrainingStats *stats)
{
  cfg.validate();
  const TrainingDomain td = build_training_domain(space, problem.mesh, problem.grid, problem.dofs);
  const SnapshotSet snaps = training_snapshots(td, problem.sys(), xi, cfg, stats);
  const CMat comp = problem.dec().component(space, snaps.dofs, snaps.values);
  LocalBasis basis = greedy_basis(space, problem, comp, cfg.tol_local, cfg.max_local_size);
  basis.content_hash = training_hash(problem, td, xi, cfg);
  return basis;
}

LocalBasis compress_components(const SpaceId &space, const Problem &problem, const CMat &global,
                               double tol, int max_size)
{
  std::vector<int> all(problem.dofs.size());
  for (int d = 0; d < problem.dofs.size(); d++)
  {
    all[d] = d;
  }
  const CMat comp = problem.dec().component(space, all, global);
  return greedy_basis(space, problem, comp, tol, max_size);
}

std::vector<LocalBasis> train_spaces(const std::vector<SpaceId> &spaces, const Problem &problem,
                                     const ParameterSet &xi, const TrainingConfig &cfg,
                                     std::vector<TrainingStats> *stats)
{
  std::vector<LocalBasis> out(spaces.size());
  std::vector<TrainingStats> local_stats(spaces.size());
  parallel_for(spaces.size(),
               [&](std::size_t k)
               { out[k] = train_space(spaces[k], problem, xi, cfg, &local_stats[k]); });
  if (stats)
  {
    *stats = std::move(local_stats);
  }
  return out;
}

}  // namespace arbilomod
