// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "arbilomod/basis_io.hpp"
#include "arbilomod/change.hpp"
#include "arbilomod/config.hpp"
#include "arbilomod/experiments.hpp"
#include "arbilomod/geometry_io.hpp"
#include "helpers.hpp"

using namespace arbilomod;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / "arbilomod_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path &path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig tiny_config()
{
  std::istringstream in(
      "geometry = geometry1.geo\n"
      "new_geometry = geometry2.geo\n"
      "nx = 8\nny = 8\nmx = 2\nmy = 2\n"
      "f_count = 3\nn_random = 2\ntol_local = 1e-3\n"
      "tolerances = 1e-1 1e-2\n");
  return parse_run_config(in, ARBILOMOD_DATA_DIR, "tiny");
}

std::set<std::string> names(const std::vector<SpaceId> &ids)
{
  std::set<std::string> out;
  for (const auto &id : ids)
  {
    out.insert(id.str());
  }
  return out;
}

int run_cli(const std::string &args)
{
  const std::string cmd = fmt::format("\"{}\" {} > /dev/null 2>&1", ARBILOMOD_CLI, args);
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesAndResolvesPaths)
{
  const auto cfg = tiny_config();
  EXPECT_EQ(cfg.geometry, fs::path(ARBILOMOD_DATA_DIR) / "geometry1.geo");
  EXPECT_EQ(cfg.discretization.nx, 8);
  EXPECT_EQ(cfg.discretization.mx, 2);
  EXPECT_EQ(cfg.f_count, 3);
  EXPECT_EQ(cfg.training.n_random, 2);
  EXPECT_EQ(cfg.tolerances, (std::vector<double>{1e-1, 1e-2}));
  EXPECT_EQ(cfg.parameters().size(), 3u);
  EXPECT_EQ(cfg.selected().size(), 3u);
}

TEST(Config, RoundTrip)
{
  auto cfg = tiny_config();
  cfg.selected_frequencies = {1.5e8, 9e8};
  cfg.training.seed = 77;
  std::ostringstream out;
  write_run_config(out, cfg);
  std::istringstream in(out.str());
  const auto back = parse_run_config(in);
  EXPECT_EQ(back.geometry, cfg.geometry);
  EXPECT_EQ(back.new_geometry, cfg.new_geometry);
  EXPECT_EQ(back.discretization.ny, cfg.discretization.ny);
  EXPECT_EQ(back.discretization.extension_frequency, cfg.discretization.extension_frequency);
  EXPECT_EQ(back.f_min, cfg.f_min);
  EXPECT_EQ(back.f_max, cfg.f_max);
  EXPECT_EQ(back.training.seed, 77u);
  EXPECT_EQ(back.training.tol_local, cfg.training.tol_local);
  EXPECT_EQ(back.tolerances, cfg.tolerances);
  EXPECT_EQ(back.selected_frequencies, cfg.selected_frequencies);
}

TEST(Config, RejectsBadInput)
{
  const auto bad = [](const std::string &text) {
    std::istringstream in(text);
    return parse_run_config(in);
  };
  EXPECT_THROW(bad("nx = 8\n"), InvalidInput);                          // no geometry
  EXPECT_THROW(bad("geometry = g.geo\ncolour = red\n"), InvalidInput);  // unknown key
  EXPECT_THROW(bad("geometry = g.geo\nnx = 8.5\n"), InvalidInput);
  EXPECT_THROW(bad("geometry = g.geo\nf_min = fast\n"), InvalidInput);
  EXPECT_THROW(bad("geometry = g.geo\nnx = 9\nmx = 2\n"), InvalidInput);  // grid mismatch
  EXPECT_THROW(bad("geometry = g.geo\nf_min = 2e9\n"), InvalidInput);
  EXPECT_THROW(bad("geometry = g.geo\nseed = -1\n"), InvalidInput);
  EXPECT_THROW(bad("geometry = g.geo\ndistribution = cauchy\n"), InvalidInput);
  EXPECT_THROW(bad("geometry = g.geo\ntolerances =\n"), InvalidInput);
}

TEST(Change, IdenticalGeometriesChangeNothing)
{
  const auto p = test::small_problem(12, 4);
  const auto cs = plan_change(p, p);
  EXPECT_TRUE(cs.changed_subdomains.empty());
  EXPECT_TRUE(cs.retrain.empty());
  EXPECT_EQ(cs.reuse.size(), p.layout().spaces().size());
}

TEST(Change, InteriorSubdomainChange)
{
  // 4x4 grid on a 12x12 mesh; subdomain (1, 1) covers [0.25, 0.5]^2.
  auto geo = test::bar_geometry();
  geo.pec.clear();
  const auto old_p = test::small_problem(12, 4, geo);
  geo.pec.push_back({0.3, 0.3, 0.45, 0.45});
  const auto new_p = test::small_problem(12, 4, geo);
  const auto cs = plan_change(old_p, new_p);
  EXPECT_EQ(cs.changed_subdomains, std::vector<int>{old_p.grid.index(1, 1)});
  EXPECT_EQ(cs.retrain_count(SpaceId::Kind::volume), 9);
  EXPECT_EQ(cs.retrain_count(SpaceId::Kind::interface), 12);

  // Brute force: a space needs retraining iff its training fingerprint moved.
  const auto xi = ParameterSet::equidistant(1e8, 1e9, 2);
  TrainingConfig tc;
  std::set<std::string> moved;
  for (const auto &space : old_p.layout().spaces())
  {
    const auto a = build_training_domain(space, old_p.mesh, old_p.grid, old_p.dofs);
    const auto b = build_training_domain(space, new_p.mesh, new_p.grid, new_p.dofs);
    if (training_hash(old_p, a, xi, tc) != training_hash(new_p, b, xi, tc))
    {
      moved.insert(space.str());
    }
  }
  EXPECT_EQ(names(cs.retrain), moved);
  EXPECT_EQ(cs.retrain.size() + cs.reuse.size(), old_p.layout().spaces().size());
}

TEST(Change, RejectsDifferentMesh)
{
  EXPECT_THROW(plan_change(test::small_problem(8, 2), test::small_problem(12, 2)), InvalidInput);
  EXPECT_THROW(plan_change(test::small_problem(8, 2), test::small_problem(8, 4)), InvalidInput);
}

TEST(Change, ChangesetRoundTrip)
{
  ChangeSet cs;
  cs.old_geometry = "/a/old.geo";
  cs.new_geometry = "/a/new.geo";
  cs.config = "/a/run.cfg";
  cs.changed_subdomains = {3, 5};
  cs.retrain = {SpaceId::volume(3), SpaceId::interface(3, 4)};
  cs.reuse = {SpaceId::volume(0)};
  std::ostringstream out;
  write_changeset(out, cs);
  std::istringstream in(out.str());
  const auto back = parse_changeset(in);
  EXPECT_EQ(back.old_geometry, cs.old_geometry);
  EXPECT_EQ(back.new_geometry, cs.new_geometry);
  EXPECT_EQ(back.config, cs.config);
  EXPECT_EQ(back.changed_subdomains, cs.changed_subdomains);
  EXPECT_EQ(names(back.retrain), names(cs.retrain));
  EXPECT_EQ(names(back.reuse), names(cs.reuse));

  std::istringstream garbage("# not a changeset\nretrain = V1\n");
  EXPECT_THROW(parse_changeset(garbage), InvalidInput);
}

TEST(Change, RerunWithoutChangeReusesEverything)
{
  const auto p = test::small_problem(8, 2);
  const auto xi = ParameterSet::equidistant(1e8, 1e9, 3);
  TrainingConfig tc;
  tc.n_random = 2;
  tc.tol_local = 1e-3;
  const auto bases = train_spaces(p.layout().spaces(), p, xi, tc);
  const auto dir = scratch("rerun_identity");
  write_bases(dir, bases);

  const auto report = rerun_after_change(plan_change(p, p), p, dir, xi, tc);
  EXPECT_TRUE(report.retrained.empty());
  EXPECT_TRUE(report.hash_mismatch.empty());
  EXPECT_EQ(report.reused.size(), bases.size());
  EXPECT_EQ(report.volume_factorizations, 0);
  EXPECT_EQ(report.interface_factorizations, 0);
  ASSERT_EQ(report.bases.size(), bases.size());
  for (std::size_t k = 0; k < bases.size(); k++)
  {
    EXPECT_EQ(report.bases[k].vectors, bases[k].vectors);
  }

  // A stored basis trained with another configuration is stale.
  TrainingConfig other = tc;
  other.seed = tc.seed + 1;
  const auto stale = rerun_after_change(plan_change(p, p), p, dir, xi, other);
  EXPECT_EQ(stale.hash_mismatch.size(), bases.size());
  EXPECT_EQ(stale.retrained.size(), bases.size());
}

TEST(Experiments, NWidthIsDeterministic)
{
  const auto cfg = tiny_config();
  const auto a = scratch("nwidth_a");
  const auto b = scratch("nwidth_b");
  run_experiment("nwidth", cfg, a);
  run_experiment("nwidth", cfg, b);
  const auto text = slurp(a / "nwidth.csv");
  EXPECT_EQ(text.rfind("# arbilomod-csv v1 nwidth", 0), 0u);
  EXPECT_EQ(text, slurp(b / "nwidth.csv"));
  EXPECT_TRUE(fs::exists(a / "manifest.json"));
}

TEST(Experiments, StabilityHasOneRowPerFrequency)
{
  const auto cfg = tiny_config();
  const auto dir = scratch("stability");
  const auto result = run_experiment("stability", cfg, dir);
  EXPECT_EQ(result.failures, 0);
  std::ifstream in(dir / "stability.csv");
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
  {
    if (!line.empty() && line[0] != '#' && line.rfind("frequency", 0) != 0)
    {
      rows++;
    }
  }
  EXPECT_EQ(rows, cfg.f_count);
}

TEST(Experiments, TrainingWritesOneBasisPerSpace)
{
  const auto cfg = tiny_config();
  const auto dir = scratch("training");
  run_experiment("training", cfg, dir);
  const auto p = make_problem(read_geometry(cfg.geometry), cfg.discretization);
  for (const auto &space : p.layout().spaces())
  {
    const auto path = basis_path(dir / "bases", space);
    ASSERT_TRUE(fs::exists(path)) << path;
    EXPECT_EQ(read_basis(path).space.str(), space.str());
  }
}

TEST(Experiments, UnknownName)
{
  EXPECT_THROW(run_experiment("fig99", tiny_config(), scratch("unknown")), InvalidInput);
}

TEST(Cli, ExitCodes)
{
  const auto dir = scratch("cli");
  const fs::path cfg = dir / "tiny.cfg";
  {
    std::ofstream out(cfg);
    write_run_config(out, tiny_config());
  }
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("run"), 1);
  EXPECT_EQ(run_cli("run nwidth"), 1);
  EXPECT_EQ(run_cli(fmt::format("run fig99 --config {}", cfg.string())), 1);
  EXPECT_EQ(run_cli(fmt::format("run nwidth --config {}", (dir / "missing.cfg").string())), 1);
  EXPECT_EQ(run_cli(fmt::format("run nwidth --config {} --out {}", cfg.string(), (dir / "nw").string())), 0);
  EXPECT_TRUE(fs::exists(dir / "nw" / "nwidth.csv"));

  const std::string geo1 = ARBILOMOD_DATA_DIR "/geometry1.geo";
  const std::string geo2 = ARBILOMOD_DATA_DIR "/geometry2.geo";
  const fs::path cs = dir / "changeset.txt";
  EXPECT_EQ(run_cli(fmt::format("plan-change --old {} --new {} --config {} --out {}", geo1, geo2,
                                cfg.string(), cs.string())),
            0);
  const auto parsed = read_changeset(cs);
  EXPECT_FALSE(parsed.retrain.empty());
}
