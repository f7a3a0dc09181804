// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Batch driver:
//   arbilomod run <experiment> --config FILE [--full-scale] [--seed N] [--out DIR]
//   arbilomod plan-change --old GEO --new GEO [--config FILE] [--out FILE]
//   arbilomod rerun --changeset FILE --bases DIR [--config FILE] [--out DIR]
// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "arbilomod/basis_io.hpp"
#include "arbilomod/change.hpp"
#include "arbilomod/config.hpp"
#include "arbilomod/experiments.hpp"
#include "arbilomod/geometry_io.hpp"

namespace fs = std::filesystem;
using namespace arbilomod;

namespace
{

constexpr int kUsage = 1;
constexpr int kNumerical = 2;

// Mesh and grid for plan-change when no config is given.
RunConfig default_config(const fs::path &geometry)
{
  RunConfig cfg;
  cfg.geometry = geometry;
  return cfg;
}

int run(const std::string &experiment, const fs::path &config_path, bool full_scale,
        const std::optional<std::uint64_t> &seed, const fs::path &out)
{
  RunConfig cfg = read_run_config(config_path);
  if (full_scale)
  {
    cfg.apply_full_scale();
  }
  if (seed)
  {
    cfg.training.seed = *seed;
  }
  const fs::path dir = out.empty() ? fs::path("out") / experiment : out;
  const auto result = run_experiment(experiment, cfg, dir);
  for (const auto &f : result.files)
  {
    std::cout << (dir / f).string() << '\n';
  }
  std::cerr << fmt::format("{}: {:.1f} s, {} numerical failure(s)\n", experiment, result.seconds,
                           result.failures);
  return result.failures > 0 ? kNumerical : 0;
}

int plan(const fs::path &old_geo, const fs::path &new_geo, const fs::path &config_path,
         const fs::path &out)
{
  RunConfig cfg = config_path.empty() ? default_config(old_geo) : read_run_config(config_path);
  const Problem before = make_problem(read_geometry(old_geo), cfg.discretization);
  const Problem after = make_problem(read_geometry(new_geo), cfg.discretization);
  ChangeSet cs = plan_change(before, after);
  cs.old_geometry = fs::absolute(old_geo);
  cs.new_geometry = fs::absolute(new_geo);
  if (!config_path.empty())
  {
    cs.config = fs::absolute(config_path);
  }
  if (out.empty())
  {
    write_changeset(std::cout, cs);
  }
  else
  {
    std::ofstream f(out);
    write_changeset(f, cs);
  }
  std::cerr << fmt::format("{} changed subdomain(s); retrain {} volume and {} interface space(s), "
                           "reuse {}\n",
                           cs.changed_subdomains.size(), cs.retrain_count(SpaceId::Kind::volume),
                           cs.retrain_count(SpaceId::Kind::interface), cs.reuse.size());
  return 0;
}

int rerun(const fs::path &changeset, const fs::path &bases, const fs::path &config_override,
          const fs::path &out)
{
  const ChangeSet cs = read_changeset(changeset);
  const fs::path config_path = config_override.empty() ? cs.config : config_override;
  if (config_path.empty())
  {
    throw InvalidInput("the changeset names no config; pass --config");
  }
  if (cs.new_geometry.empty())
  {
    throw InvalidInput("the changeset names no new geometry");
  }
  const RunConfig cfg = read_run_config(config_path);
  const Problem problem = make_problem(read_geometry(cs.new_geometry), cfg.discretization);
  const auto xi = cfg.parameters();
  const RerunReport report = rerun_after_change(cs, problem, bases, xi, cfg.training);

  const fs::path dir = out.empty() ? fs::path("out") / "rerun" : out;
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "rerun.csv");
    csv << "# arbilomod-csv v1 rerun\nfrequency,rel_error\n";
    for (std::size_t k = 0; k < xi.size(); k++)
    {
      csv << fmt::format("{:.12g},{:.12g}\n", xi.frequency(k), report.errors.errors[k]);
    }
  }
  write_bases(dir / "bases", report.bases);
  std::cout << fmt::format("reused {} space(s), retrained {} ({} stale)\n", report.reused.size(),
                           report.retrained.size(), report.hash_mismatch.size())
            << fmt::format("local factorizations per frequency: {} volume (size {}), "
                           "{} interface (size {})\n",
                           report.volume_factorizations, report.max_volume_problem,
                           report.interface_factorizations, report.max_interface_problem)
            << fmt::format("reduced factorizations per frequency: {} (size {})\n",
                           report.reduced_factorizations, report.rom_dim)
            << fmt::format("max relative error: {:.4g}\n", report.errors.max_error);
  return report.errors.failures > 0 ? kNumerical : 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Localized reduced basis driver for time-harmonic Maxwell problems"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  std::string experiment;
  fs::path config, out, old_geo, new_geo, changeset, bases;
  bool full_scale = false;
  std::optional<std::uint64_t> seed;

  auto *run_cmd = app.add_subcommand("run", "Run one experiment");
  run_cmd->add_option("experiment", experiment, "Experiment selector")
      ->required()
      ->check(CLI::IsMember(experiment_names()));
  run_cmd->add_option("--config", config, "Run configuration")->required()->check(CLI::ExistingFile);
  run_cmd->add_flag("--full-scale", full_scale, "100x100 mesh, 10x10 subdomains, 100 frequencies");
  run_cmd->add_option("--seed", seed, "Override the training seed");
  run_cmd->add_option("--out", out, "Output directory (default out/<experiment>)");

  auto *plan_cmd = app.add_subcommand("plan-change", "Find the spaces a geometry change invalidates");
  plan_cmd->add_option("--old", old_geo, "Geometry before the change")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--new", new_geo, "Geometry after the change")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--config", config, "Run configuration (mesh and grid)")->check(CLI::ExistingFile);
  plan_cmd->add_option("--out", out, "Changeset file (default stdout)");

  auto *rerun_cmd = app.add_subcommand("rerun", "Retrain invalidated spaces and check the recycled model");
  rerun_cmd->add_option("--changeset", changeset, "Changeset file")->required()->check(CLI::ExistingFile);
  rerun_cmd->add_option("--bases", bases, "Directory of stored bases")->required()->check(CLI::ExistingDirectory);
  rerun_cmd->add_option("--config", config, "Override the changeset's config")->check(CLI::ExistingFile);
  rerun_cmd->add_option("--out", out, "Output directory (default out/rerun)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &err)
  {
    const int code = app.exit(err);
    return code == 0 ? 0 : kUsage;
  }

  try
  {
    if (*run_cmd)
    {
      return run(experiment, config, full_scale, seed, out);
    }
    if (*plan_cmd)
    {
      return plan(old_geo, new_geo, config, out);
    }
    return rerun(changeset, bases, config, out);
  }
  catch (const InvalidInput &err)
  {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  }
  catch (const NumericalError &err)
  {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return kNumerical;
  }
  catch (const std::exception &err)
  {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  }
}
