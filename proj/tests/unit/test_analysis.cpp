// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "arbilomod/analysis.hpp"
#include "helpers.hpp"

using namespace arbilomod;

TEST(Stability, SweepShape)
{
  const auto p = test::small_problem(8, 2);
  const auto xi = ParameterSet::equidistant(10e6, 1e9, 6);
  const auto points = stability_sweep(p.sys(), xi);
  ASSERT_EQ(points.size(), 6u);
  for (const auto &pt : points)
  {
    EXPECT_TRUE(pt.ok) << pt.error;
    EXPECT_GT(pt.beta, 0.0);
    EXPECT_LE(pt.gamma, 1.0 + 1e-8);
    EXPECT_GE(pt.gamma, pt.beta);
  }
  // Low-frequency decay of the inf-sup constant.
  EXPECT_LT(points[0].beta, points[1].beta);
}

TEST(Stability, IterativeMatchesDenseOnMesh)
{
  const auto p = test::small_problem(8, 2);
  const SpMat a = system_matrix(p.sys(), 2.0 * pi * 6e8);
  const auto dense = extremal_singular_values(CMat(a), CMat(p.sys().gram.cast<Complex>()));
  const auto lanczos = extremal_singular_values_lanczos(a, p.sys().gram);
  EXPECT_NEAR(lanczos.sigma_min / dense.sigma_min, 1.0, 1e-8);
  EXPECT_NEAR(lanczos.sigma_max / dense.sigma_max, 1.0, 1e-8);
}

TEST(NWidth, SingleParameter)
{
  const auto p = test::small_problem(6, 2);
  const auto g = global_greedy_nwidth(p.sys(), ParameterSet({5e8}), 1e-12);
  ASSERT_EQ(g.trajectory.size(), 2u);
  EXPECT_DOUBLE_EQ(g.trajectory[0], 1.0);
  EXPECT_LT(g.trajectory[1], 1e-12);
}

TEST(NWidth, TrajectoryNonIncreasing)
{
  const auto p = test::small_problem(8, 2);
  const auto g = global_greedy_nwidth(p.sys(), ParameterSet::equidistant(10e6, 1e9, 12), 1e-8);
  for (std::size_t k = 1; k < g.trajectory.size(); k++)
  {
    EXPECT_LE(g.trajectory[k], g.trajectory[k - 1] + 1e-14);
  }
  EXPECT_LE(g.trajectory.back(), 1e-8);
}

TEST(LocalizedReference, ReconstructsSolutions)
{
  const auto p = test::small_problem(8, 2);
  const auto xi = ParameterSet::equidistant(100e6, 1e9, 4);
  const auto solutions = full_solutions(p.sys(), xi);
  const auto bases = localized_reference_bases(p, xi, 1e-12, INT_MAX, &solutions);
  ASSERT_EQ(bases.size(), p.layout().spaces().size());
  const auto rom = assemble_rom(bases, p);
  for (const auto &u : solutions)
  {
    EXPECT_LT(best_approximation_error(rom, p.sys(), u), 1e-10);
  }
  const auto sweep = rom_error_sweep(rom, p.sys(), xi, &solutions);
  EXPECT_LT(sweep.max_error, 1e-9);
}

TEST(LocalizedReference, ErrorVsSizeAndTruncation)
{
  const auto p = test::small_problem(8, 2);
  const auto xi = ParameterSet::equidistant(100e6, 1e9, 6);
  const auto bases = localized_reference_bases(p, xi, 1e-10);
  const auto curve = error_vs_size(bases, p, xi, {1e-1, 1e-3, 1e-10});
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_LE(curve[0].size, curve[1].size);
  EXPECT_LE(curve[1].size, curve[2].size);
  EXPECT_LT(curve[2].max_error, 1e-8);
  const int target = curve[1].size;
  const auto cut = truncate_to_total_size(bases, target);
  EXPECT_LE(total_size(cut), target);
  EXPECT_GT(total_size(cut), 0);
}

TEST(InfSupTrack, FullSpaceMatchesFullProblem)
{
  const auto p = test::small_problem(6, 2);
  const CMat unit = CMat::Identity(p.sys().size(), p.sys().size());
  std::vector<LocalBasis> bases;
  for (const auto &space : p.layout().spaces())
  {
    bases.push_back(compress_components(space, p, unit, 1e-13, INT_MAX));
  }
  const std::vector<double> freqs{2e8, 8e8};
  const auto rows = reduced_infsup_track({bases}, p, freqs);
  ASSERT_EQ(rows.size(), 2u);
  for (std::size_t k = 0; k < freqs.size(); k++)
  {
    const auto s = extremal_singular_values(CMat(system_matrix(p.sys(), 2.0 * pi * freqs[k])),
                                            CMat(p.sys().gram.cast<Complex>()));
    EXPECT_NEAR(rows[k].beta / s.sigma_min, 1.0, 1e-8);
    EXPECT_EQ(rows[k].size, p.sys().size());
  }
}
