// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "arbilomod/basis_io.hpp"
#include "arbilomod/rom.hpp"
#include "arbilomod/training.hpp"
#include "helpers.hpp"

using namespace arbilomod;

namespace
{

const ParameterSet xi4 = ParameterSet::equidistant(100e6, 900e6, 4);

bool sorted_subset(const std::vector<int> &small, const std::vector<int> &big)
{
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<int> all_dofs(const Problem &p)
{
  std::vector<int> all(p.sys().size());
  for (int d = 0; d < p.sys().size(); d++)
  {
    all[d] = d;
  }
  return all;
}

}  // namespace

TEST(TrainingBlock, ClippedAtGrid)
{
  const auto mesh = build_mesh(8, 8, Rect{0, 0, 1, 1});
  const auto grid = assign_subdomains(mesh, 4, 4);
  EXPECT_EQ(training_block(SpaceId::volume(0), grid), (std::vector<int>{0, 1, 4, 5}));
  EXPECT_EQ(training_block(SpaceId::volume(5), grid).size(), 9u);
  EXPECT_EQ(training_block(SpaceId::interface(5, 6), grid),
            (std::vector<int>{1, 2, 5, 6, 9, 10}));
  EXPECT_EQ(training_block(SpaceId::interface(5, 9), grid),
            (std::vector<int>{4, 5, 6, 8, 9, 10}));
  EXPECT_EQ(training_block(SpaceId::interface(0, 1), grid).size(), 4u);
  EXPECT_THROW(training_block(SpaceId::interface(0, 5), grid), InvalidInput);
}

TEST(TrainingDomain, PublishedLocalProblemSizes)
{
  const auto mesh = build_mesh(100, 100, Rect{0, 0, 1, 1});
  const auto grid = assign_subdomains(mesh, 10, 10);
  const auto dofs = mask_dofs(mesh, GeometrySpec{});
  const int centre = grid.index(4, 4);
  EXPECT_EQ(build_training_domain(SpaceId::volume(centre), mesh, grid, dofs).size(), 5340);
  EXPECT_EQ(build_training_domain(SpaceId::interface(centre, centre + 1), mesh, grid, dofs).size(),
            3550);
  EXPECT_EQ(build_training_domain(SpaceId::interface(centre, centre + 10), mesh, grid, dofs).size(),
            3550);
}

TEST(TrainingDomain, SupportInsideInterior)
{
  const auto p = test::small_problem(12, 3);
  for (const auto &space : p.layout().spaces())
  {
    const auto td = build_training_domain(space, p.mesh, p.grid, p.dofs);
    EXPECT_TRUE(sorted_subset(p.layout().support(space), td.interior)) << space.str();
    std::vector<int> both;
    std::set_intersection(td.interior.begin(), td.interior.end(), td.ring.begin(), td.ring.end(),
                          std::back_inserter(both));
    EXPECT_TRUE(both.empty());
  }
}

TEST(Snapshots, ParticularResidual)
{
  const auto p = test::small_problem(12, 3);
  const auto td = build_training_domain(SpaceId::volume(3), p.mesh, p.grid, p.dofs);
  const auto snaps = particular_snapshots(td, p.sys(), xi4);
  ASSERT_EQ(snaps.values.cols(), 4);
  for (std::size_t k = 0; k < xi4.size(); k++)
  {
    const SpMat a = extract_block(system_matrix(p.sys(), xi4.omega(k)), td.interior, td.interior);
    const CVec full_f = system_rhs(p.sys(), xi4.omega(k));
    CVec f(td.size()), u(td.size());
    for (int i = 0; i < td.size(); i++)
    {
      f[i] = full_f[td.interior[i]];
      const auto pos = std::lower_bound(snaps.dofs.begin(), snaps.dofs.end(), td.interior[i]);
      u[i] = snaps.values(pos - snaps.dofs.begin(), static_cast<Eigen::Index>(k));
    }
    EXPECT_LT((a * u - f).norm(), 1e-10 * f.norm());
  }
}

TEST(Snapshots, RandomAreHomogeneousAndDeterministic)
{
  const auto p = test::small_problem(12, 3);
  const auto td = build_training_domain(SpaceId::interface(4, 5), p.mesh, p.grid, p.dofs);
  TrainingConfig cfg;
  cfg.n_random = 3;
  cfg.seed = 42;
  const auto a = random_snapshots(td, p.sys(), xi4, cfg);
  const auto b = random_snapshots(td, p.sys(), xi4, cfg);
  ASSERT_EQ(a.values.cols(), 12);
  EXPECT_EQ(a.values, b.values);
  cfg.seed = 43;
  EXPECT_NE(random_snapshots(td, p.sys(), xi4, cfg).values, a.values);

  const auto dofs = a.dofs;
  std::vector<int> interior_pos;
  for (int d : td.interior)
  {
    interior_pos.push_back(static_cast<int>(std::lower_bound(dofs.begin(), dofs.end(), d) - dofs.begin()));
  }
  for (int c = 0; c < 12; c++)
  {
    const SpMat full = system_matrix(p.sys(), xi4.omega(c / 3));
    const SpMat local = extract_block(full, td.interior, dofs);
    const CVec r = local * a.values.col(c);
    const SpMat ring = extract_block(full, td.interior, td.ring);
    CVec g(td.ring.size());
    for (std::size_t k = 0; k < td.ring.size(); k++)
    {
      g[k] = a.values(std::lower_bound(dofs.begin(), dofs.end(), td.ring[k]) - dofs.begin(), c);
    }
    EXPECT_LT(r.norm(), 1e-10 * (ring * g).norm());
  }
  cfg.n_random = 0;
  EXPECT_THROW(random_snapshots(td, p.sys(), xi4, cfg), InvalidInput);
}

TEST(Snapshots, WholeDomainPatchReproducesFullSolve)
{
  // On a 3x3 grid the centre volume's patch is the whole domain.
  const auto p = test::small_problem(9, 3);
  const auto td = build_training_domain(SpaceId::volume(4), p.mesh, p.grid, p.dofs);
  ASSERT_EQ(td.size(), p.sys().size());
  EXPECT_TRUE(td.ring.empty());
  const auto snaps = particular_snapshots(td, p.sys(), xi4);
  for (std::size_t k = 0; k < xi4.size(); k++)
  {
    const CVec u = solve_full(p.sys(), xi4.omega(k));
    EXPECT_LT((snaps.values.col(static_cast<Eigen::Index>(k)) - u).norm(), 1e-10 * u.norm());
  }
}

TEST(Snapshots, ZeroSourceGivesZero)
{
  DiscretizationOptions opts;
  opts.nx = opts.ny = 6;
  opts.mx = opts.my = 3;
  const CurrentDensity zero = [](Point) -> std::array<double, 2> { return {0.0, 0.0}; };
  const auto p = make_problem(test::bar_geometry(), opts, zero);
  const auto td = build_training_domain(SpaceId::volume(0), p.mesh, p.grid, p.dofs);
  EXPECT_EQ(particular_snapshots(td, p.sys(), xi4).values.cwiseAbs().maxCoeff(), 0.0);
  TrainingConfig cfg;
  cfg.n_random = 0;
  EXPECT_EQ(train_space(SpaceId::volume(0), p, xi4, cfg).size(), 0);
}

TEST(TrainSpace, BasisContract)
{
  const auto p = test::small_problem(12, 3);
  TrainingConfig cfg;
  cfg.n_random = 2;
  cfg.tol_local = 1e-3;
  for (const SpaceId space : {SpaceId::volume(4), SpaceId::interface(1, 4), SpaceId::volume(0)})
  {
    const LocalBasis b = train_space(space, p, xi4, cfg);
    ASSERT_GT(b.size(), 0) << space.str();
    EXPECT_EQ(b.trajectory.size(), static_cast<std::size_t>(b.size() + 1));
    EXPECT_LE(b.trajectory.back(), cfg.tol_local);
    for (std::size_t k = 1; k < b.trajectory.size(); k++)
    {
      EXPECT_LE(b.trajectory[k], b.trajectory[k - 1] + 1e-14);
    }
    const auto &support = p.layout().support(space);
    ASSERT_EQ(b.support_edges.size(), support.size());
    const RSpMat m = extract_block(p.sys().gram, support, support);
    const CMat g = b.vectors.adjoint() * apply_gram(m, b.vectors);
    EXPECT_LT((g - CMat::Identity(b.size(), b.size())).cwiseAbs().maxCoeff(), 1e-10);
    // Every vector lies in its own space.
    for (int c = 0; c < b.size(); c++)
    {
      const CVec v = p.dec().embed(space, b.vectors.col(c));
      for (const auto &[other, w] : p.dec().project(v))
      {
        EXPECT_LT((other == space ? (w - v).norm() : w.norm()), 1e-10 * v.norm());
      }
    }
  }
}

TEST(TrainSpace, OrderIndependent)
{
  const auto p = test::small_problem(8, 2);
  TrainingConfig cfg;
  cfg.n_random = 2;
  auto spaces = p.layout().spaces();
  const auto forward = train_spaces(spaces, p, xi4, cfg);
  std::reverse(spaces.begin(), spaces.end());
  const auto backward = train_spaces(spaces, p, xi4, cfg);
  for (std::size_t k = 0; k < spaces.size(); k++)
  {
    const auto &a = forward[k];
    const auto &b = backward[spaces.size() - 1 - k];
    EXPECT_EQ(a.space, b.space);
    EXPECT_EQ(a.vectors, b.vectors);
    EXPECT_EQ(a.content_hash, b.content_hash);
  }
}

TEST(TrainSpace, Truncation)
{
  const auto p = test::small_problem(8, 2);
  TrainingConfig cfg;
  cfg.n_random = 2;
  cfg.tol_local = 1e-6;
  const LocalBasis b = train_space(SpaceId::volume(0), p, xi4, cfg);
  ASSERT_GT(b.size(), 2);
  const LocalBasis t = b.truncated_to(2);
  EXPECT_EQ(t.size(), 2);
  EXPECT_EQ(t.trajectory.size(), 3u);
  EXPECT_EQ(t.vectors, b.vectors.leftCols(2));
  const LocalBasis loose = b.truncated(b.trajectory[1]);
  EXPECT_EQ(loose.size(), 1);
  EXPECT_EQ(b.truncated(0.0).size(), b.size());
}

TEST(TrainSpace, CloseToGlobalReferenceOnToyProblem)
{
  const auto p = test::small_problem(12, 3);
  const auto xi = ParameterSet::equidistant(50e6, 1e9, 12);
  const auto solutions = full_solutions(p.sys(), xi);
  CMat u(p.sys().size(), static_cast<Eigen::Index>(xi.size()));
  for (std::size_t k = 0; k < xi.size(); k++)
  {
    u.col(static_cast<Eigen::Index>(k)) = solutions[k];
  }
  TrainingConfig cfg;
  cfg.tol_local = 1e-2;
  for (const SpaceId space : {SpaceId::volume(4), SpaceId::interface(3, 4)})
  {
    const LocalBasis trained = train_space(space, p, xi, cfg);
    const LocalBasis reference = compress_components(space, p, u, 1e-14, trained.size());
    const auto &support = p.layout().support(space);
    const RSpMat m = extract_block(p.sys().gram, support, support);
    const CMat comp = p.dec().component(space, all_dofs(p), u);
    auto worst = [&](const CMat &basis)
    {
      double err = 0.0;
      for (int c = 0; c < comp.cols(); c++)
      {
        const CVec x = comp.col(c);
        const double nx = test::m_norm(m, x);
        if (nx == 0.0)
        {
          continue;
        }
        const CVec r = x - basis * (basis.adjoint() * apply_gram(m, x));
        err = std::max(err, test::m_norm(m, r) / nx);
      }
      return err;
    };
    const double e_trained = worst(trained.vectors);
    const double e_ref = worst(reference.vectors);
    EXPECT_LE(e_trained, 10.0 * e_ref + 1e-10) << space.str() << " " << e_trained << " " << e_ref;
  }
}

TEST(BasisIo, RoundTripIsBitExact)
{
  const auto p = test::small_problem(8, 2);
  TrainingConfig cfg;
  cfg.n_random = 1;
  const auto b = train_space(SpaceId::interface(0, 1), p, xi4, cfg);
  const auto dir = std::filesystem::temp_directory_path() / "arbilomod_test_basis_io";
  std::filesystem::remove_all(dir);
  write_bases(dir, {b});
  const auto back = try_read_basis(dir, b.space);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->space, b.space);
  EXPECT_EQ(back->support_edges, b.support_edges);
  EXPECT_EQ(back->vectors, b.vectors);
  EXPECT_EQ(back->trajectory, b.trajectory);
  EXPECT_EQ(back->content_hash, b.content_hash);
  EXPECT_FALSE(try_read_basis(dir, SpaceId::volume(3)).has_value());
  std::ofstream(basis_path(dir, SpaceId::volume(3))) << "ALMB garbage";
  EXPECT_THROW(try_read_basis(dir, SpaceId::volume(3)), InvalidInput);
  std::filesystem::remove_all(dir);
}

TEST(TrainingConfig, Validation)
{
  TrainingConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.tol_local = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.n_random = -1;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  EXPECT_EQ(to_string(RandomDistribution::uniform), "uniform");
  EXPECT_NE(space_stream_seed(0, SpaceId::volume(1)), space_stream_seed(0, SpaceId::volume(2)));
}
