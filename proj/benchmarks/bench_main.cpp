// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <benchmark/benchmark.h>

#include "arbilomod/analysis.hpp"
#include "arbilomod/geometry_io.hpp"

using namespace arbilomod;

namespace
{

GeometrySpec geometry1() { return read_geometry(ARBILOMOD_DATA_DIR "/geometry1.geo"); }

Problem problem(int n, int m)
{
  DiscretizationOptions opts;
  opts.nx = opts.ny = n;
  opts.mx = opts.my = m;
  return make_problem(geometry1(), opts);
}

void BM_Assembly(benchmark::State &state)
{
  const int n = static_cast<int>(state.range(0));
  const auto geo = geometry1();
  const auto mesh = build_mesh(n, n, geo.domain);
  const auto dofs = mask_dofs(mesh, geo);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(assemble_affine(mesh, dofs, geo, MaterialParams{}));
  }
  state.counters["dofs"] = dofs.size();
}
BENCHMARK(BM_Assembly)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FullFactorization(benchmark::State &state)
{
  const auto p = problem(static_cast<int>(state.range(0)), 2);
  const SpMat a = system_matrix(p.sys(), 2.0 * pi * 5e8);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(Factorization(a));
  }
  state.counters["dofs"] = p.sys().size();
}
BENCHMARK(BM_FullFactorization)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Greedy(benchmark::State &state)
{
  const auto p = problem(20, 4);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  const int rank = static_cast<int>(state.range(0));
  CMat left(p.sys().size(), rank), right(rank, 200);
  for (auto *m : {&left, &right})
  {
    for (Eigen::Index k = 0; k < m->size(); k++)
    {
      m->data()[k] = Complex(normal(rng), normal(rng));
    }
  }
  const CMat snaps = left * right;
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(greedy_compress(snaps, p.sys().gram, 1e-8));
  }
}
BENCHMARK(BM_Greedy)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_TrainSpace(benchmark::State &state)
{
  const auto p = problem(40, 4);
  const auto xi = ParameterSet::equidistant(10e6, 1e9, 10);
  const SpaceId space = state.range(0) == 0 ? SpaceId::volume(p.grid.index(1, 1))
                                            : SpaceId::interface(p.grid.index(1, 1), p.grid.index(2, 1));
  TrainingConfig cfg;
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(train_space(space, p, xi, cfg));
  }
  state.SetLabel(space.str());
}
BENCHMARK(BM_TrainSpace)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RomSolve(benchmark::State &state)
{
  const auto p = problem(20, 4);
  const auto xi = ParameterSet::equidistant(10e6, 1e9, 10);
  TrainingConfig cfg;
  cfg.tol_local = 1e-3;
  const auto rom = assemble_rom(train_spaces(p.layout().spaces(), p, xi, cfg), p);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(solve_rom(rom, 2.0 * pi * 5e8));
  }
  state.counters["rom_dim"] = rom.dim();
}
BENCHMARK(BM_RomSolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
