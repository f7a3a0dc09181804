// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "arbilomod/analysis.hpp"
#include "arbilomod/basis_io.hpp"
#include "arbilomod/change.hpp"
#include "arbilomod/geometry_io.hpp"
#include "arbilomod/parallel.hpp"

#ifndef ARBILOMOD_VERSION
#define ARBILOMOD_VERSION "unknown"
#endif

namespace arbilomod
{

const char *version()
{
  return ARBILOMOD_VERSION;
}

namespace
{

namespace fs = std::filesystem;

class Output
{
public:
  explicit Output(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  // Opens <dir>/<name>.csv with the schema comment and column header.
  std::ofstream csv(const std::string &name, const std::string &columns)
  {
    const fs::path rel = name + ".csv";
    std::ofstream out(dir_ / rel);
    if (!out)
    {
      throw InvalidInput(fmt::format("cannot write '{}'", (dir_ / rel).string()));
    }
    out << "# arbilomod-csv v1 " << name << '\n' << columns << '\n';
    files_.push_back(rel);
    return out;
  }

  fs::path path(const fs::path &rel)
  {
    files_.push_back(rel);
    return dir_ / rel;
  }

  const fs::path &dir() const { return dir_; }
  std::vector<fs::path> files() const { return files_; }

private:
  fs::path dir_;
  std::vector<fs::path> files_;
};

std::string num(double v)
{
  return fmt::format("{:.12g}", v);
}

Problem load_problem(const fs::path &geometry, const RunConfig &cfg)
{
  return make_problem(read_geometry(geometry), cfg.discretization);
}

double min_tolerance(const RunConfig &cfg)
{
  double tol = cfg.training.tol_local;
  for (double t : cfg.tolerances)
  {
    tol = std::min(tol, t);
  }
  return tol;
}

void write_size_error(Output &out, const std::string &name,
                      const std::vector<SizeErrorPoint> &points)
{
  auto csv = out.csv(name, "size,max_rel_error");
  for (const auto &p : points)
  {
    csv << p.size << ',' << num(p.max_error) << '\n';
  }
}

void write_basis_sizes(Output &out, const std::string &name, const std::vector<LocalBasis> &bases)
{
  auto csv = out.csv(name, "space,size,final_error");
  for (const auto &b : bases)
  {
    csv << b.space.str() << ',' << b.size() << ','
        << num(b.trajectory.empty() ? 0.0 : b.trajectory.back()) << '\n';
  }
}

int count_failures(const std::vector<SizeErrorPoint> &points)
{
  int n = 0;
  for (const auto &p : points)
  {
    n += p.failures;
  }
  return n;
}

int stability(const RunConfig &cfg, Output &out)
{
  const Problem problem = load_problem(cfg.geometry, cfg);
  const auto points = stability_sweep(problem.sys(), cfg.parameters());
  auto csv = out.csv("stability", "frequency,beta,gamma");
  int failures = 0;
  for (const auto &p : points)
  {
    csv << num(p.frequency) << ',' << num(p.beta) << ',' << num(p.gamma) << '\n';
    failures += p.ok ? 0 : 1;
  }
  return failures;
}

int nwidth(const RunConfig &cfg, Output &out)
{
  const Problem problem = load_problem(cfg.geometry, cfg);
  const auto result = global_greedy_nwidth(problem.sys(), cfg.parameters(), cfg.nwidth_tol);
  auto csv = out.csv("nwidth", "size,max_rel_error");
  for (std::size_t k = 0; k < result.trajectory.size(); k++)
  {
    csv << k << ',' << num(result.trajectory[k]) << '\n';
  }
  return 0;
}

int localized_reference(const RunConfig &cfg, Output &out)
{
  const Problem problem = load_problem(cfg.geometry, cfg);
  const auto xi = cfg.parameters();
  const auto solutions = full_solutions(problem.sys(), xi);
  const auto bases = localized_reference_bases(problem, xi, min_tolerance(cfg), INT_MAX, &solutions);
  const auto points = error_vs_size(bases, problem, xi, cfg.tolerances, &solutions);
  write_size_error(out, "localized_reference", points);
  write_basis_sizes(out, "localized_reference_sizes", bases);
  return count_failures(points);
}

int infsup_track(const RunConfig &cfg, Output &out)
{
  const Problem problem = load_problem(cfg.geometry, cfg);
  const auto xi = cfg.parameters();
  const auto solutions = full_solutions(problem.sys(), xi);
  const auto bases = localized_reference_bases(problem, xi, min_tolerance(cfg), INT_MAX, &solutions);
  std::vector<std::vector<LocalBasis>> nested;
  for (double tol : cfg.tolerances)
  {
    nested.push_back(truncate_all(bases, tol));
  }
  const auto freqs = cfg.selected();
  const auto rows = reduced_infsup_track(nested, problem, freqs);
  int failures = 0;
  {
    auto csv = out.csv("infsup_track", "size,frequency,beta_reduced");
    for (const auto &r : rows)
    {
      csv << r.size << ',' << num(r.frequency) << ',' << num(r.beta) << '\n';
      failures += r.ok ? 0 : 1;
    }
  }
  // Errors at the same points, for lining up spikes with inf-sup drops.
  auto csv = out.csv("infsup_track_errors", "size,frequency,rel_error");
  const ParameterSet selected(freqs);
  const auto references = full_solutions(problem.sys(), selected);
  for (const auto &set : nested)
  {
    const ReducedModel rom = assemble_rom(set, problem);
    if (rom.dim() == 0)
    {
      continue;
    }
    const auto sweep = rom_error_sweep(rom, problem.sys(), selected, &references);
    for (std::size_t k = 0; k < freqs.size(); k++)
    {
      csv << rom.dim() << ',' << num(freqs[k]) << ',' << num(sweep.errors[k]) << '\n';
    }
  }
  return failures;
}

std::vector<LocalBasis> train_all(const Problem &problem, const ParameterSet &xi,
                                  const TrainingConfig &tc, std::vector<TrainingStats> *stats)
{
  return train_spaces(problem.layout().spaces(), problem, xi, tc, stats);
}

int training(const RunConfig &cfg, Output &out)
{
  const Problem problem = load_problem(cfg.geometry, cfg);
  std::vector<TrainingStats> stats;
  const auto bases = train_all(problem, cfg.parameters(), cfg.training, &stats);
  write_bases(out.dir() / "bases", bases);
  auto csv = out.csv("training", "space,size,local_size,factorizations,skipped_frequencies,final_error");
  int failures = 0;
  for (std::size_t k = 0; k < bases.size(); k++)
  {
    const auto &b = bases[k];
    csv << b.space.str() << ',' << b.size() << ',' << stats[k].local_size << ','
        << stats[k].factorizations << ',' << stats[k].skipped_frequencies << ','
        << num(b.trajectory.empty() ? 0.0 : b.trajectory.back()) << '\n';
    failures += stats[k].skipped_frequencies;
  }
  return failures;
}

int training_benchmark(const RunConfig &cfg, Output &out)
{
  const Problem problem = load_problem(cfg.geometry, cfg);
  const auto xi = cfg.parameters();
  const auto solutions = full_solutions(problem.sys(), xi);
  TrainingConfig tc = cfg.training;
  tc.tol_local = min_tolerance(cfg);
  const auto trained = train_all(problem, xi, tc, nullptr);
  const auto points = error_vs_size(trained, problem, xi, cfg.tolerances, &solutions);
  write_size_error(out, "training_benchmark", points);
  write_basis_sizes(out, "training_benchmark_sizes", trained);

  // Localized reference at the same total sizes.
  const auto reference = localized_reference_bases(problem, xi, tc.tol_local, INT_MAX, &solutions);
  std::vector<SizeErrorPoint> ref_points;
  for (const auto &p : points)
  {
    const auto truncated = truncate_to_total_size(reference, p.size);
    const ReducedModel rom = assemble_rom(truncated, problem);
    SizeErrorPoint q;
    q.size = rom.dim();
    q.max_error = 1.0;
    if (rom.dim() > 0)
    {
      const auto sweep = rom_error_sweep(rom, problem.sys(), xi, &solutions);
      q.max_error = sweep.max_error;
      q.failures = sweep.failures;
    }
    ref_points.push_back(q);
  }
  write_size_error(out, "training_reference", ref_points);
  return count_failures(points) + count_failures(ref_points);
}

int geochange(const RunConfig &cfg, Output &out)
{
  if (cfg.new_geometry.empty())
  {
    throw InvalidInput("geochange needs 'new_geometry' in the config");
  }
  const Problem old_problem = load_problem(cfg.geometry, cfg);
  const Problem new_problem = load_problem(cfg.new_geometry, cfg);
  const auto xi = cfg.parameters();

  const auto old_bases = train_all(old_problem, xi, cfg.training, nullptr);
  const fs::path bases_dir = out.dir() / "bases_old";
  write_bases(bases_dir, old_bases);

  ChangeSet cs = plan_change(old_problem, new_problem);
  cs.old_geometry = fs::absolute(cfg.geometry);
  cs.new_geometry = fs::absolute(cfg.new_geometry);
  {
    std::ofstream f(out.path("changeset.txt"));
    write_changeset(f, cs);
  }

  const auto reference = full_solutions(new_problem.sys(), xi);
  const RerunReport report =
      rerun_after_change(cs, new_problem, bases_dir, xi, cfg.training, &reference);

  // Oracle: every space retrained on the new geometry.
  const auto fresh = train_all(new_problem, xi, cfg.training, nullptr);
  const ReducedModel fresh_rom = assemble_rom(fresh, new_problem);
  const auto fresh_sweep = rom_error_sweep(fresh_rom, new_problem.sys(), xi, &reference);

  {
    auto csv = out.csv("geochange", "frequency,rel_error_recycled,rel_error_retrained");
    for (std::size_t k = 0; k < xi.size(); k++)
    {
      csv << num(xi.frequency(k)) << ',' << num(report.errors.errors[k]) << ','
          << num(fresh_sweep.errors[k]) << '\n';
    }
  }
  auto csv = out.csv("geochange_ledger", "quantity,value");
  csv << "changed_subdomains," << cs.changed_subdomains.size() << '\n'
      << "volume_spaces_retrained," << cs.retrain_count(SpaceId::Kind::volume) << '\n'
      << "interface_spaces_retrained," << cs.retrain_count(SpaceId::Kind::interface) << '\n'
      << "spaces_reused," << report.reused.size() << '\n'
      << "stale_bases_retrained," << report.hash_mismatch.size() << '\n'
      << "volume_factorizations_per_frequency," << report.volume_factorizations << '\n'
      << "volume_problem_size," << report.max_volume_problem << '\n'
      << "interface_factorizations_per_frequency," << report.interface_factorizations << '\n'
      << "interface_problem_size," << report.max_interface_problem << '\n'
      << "reduced_factorizations_per_frequency," << report.reduced_factorizations << '\n'
      << "reduced_size," << report.rom_dim << '\n'
      << "max_rel_error_recycled," << num(report.errors.max_error) << '\n'
      << "max_rel_error_retrained," << num(fresh_sweep.max_error) << '\n';
  return report.errors.failures + fresh_sweep.failures;
}

void export_fields(const Problem &problem, int geometry, const std::vector<double> &freqs,
                   std::ostream &csv)
{
  const auto &mesh = problem.mesh;
  std::vector<CVec> solutions(freqs.size());
  parallel_for(freqs.size(),
               [&](std::size_t k) { solutions[k] = solve_full(problem.sys(), 2.0 * pi * freqs[k]); });
  const std::array<double, 3> centroid{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  for (std::size_t k = 0; k < freqs.size(); k++)
  {
    for (const auto &tri : mesh.triangles)
    {
      const std::array<Point, 3> pts{mesh.vertices[tri.vertex[0]], mesh.vertices[tri.vertex[1]],
                                     mesh.vertices[tri.vertex[2]]};
      double ex = 0.0, ey = 0.0;
      for (int l = 0; l < 3; l++)
      {
        const int c = problem.dofs.compact[tri.edge[l]];
        if (c < 0)
        {
          continue;
        }
        const auto w = whitney_value(pts, l, centroid);
        const double coeff = tri.sign[l] * solutions[k][c].real();
        ex += coeff * w[0];
        ey += coeff * w[1];
      }
      const double x = (pts[0].x + pts[1].x + pts[2].x) / 3.0;
      const double y = (pts[0].y + pts[1].y + pts[2].y) / 3.0;
      csv << num(freqs[k]) << ',' << geometry << ',' << num(x) << ',' << num(y) << ','
          << num(std::hypot(ex, ey)) << '\n';
    }
  }
}

int solutions_export(const RunConfig &cfg, Output &out)
{
  const auto freqs = cfg.selected();
  auto csv = out.csv("solutions", "frequency,geometry,x,y,abs_re_e");
  export_fields(load_problem(cfg.geometry, cfg), 1, freqs, csv);
  if (!cfg.new_geometry.empty())
  {
    export_fields(load_problem(cfg.new_geometry, cfg), 2, freqs, csv);
  }
  return 0;
}

int export_system(const RunConfig &cfg, Output &out)
{
  const Problem problem = load_problem(cfg.geometry, cfg);
  const auto &sys = problem.sys();
  const std::pair<const char *, const RSpMat *> mats[] = {
      {"curl.coo", &sys.curl}, {"mass.coo", &sys.mass}, {"robin.coo", &sys.robin}, {"gram.coo", &sys.gram}};
  for (const auto &[name, m] : mats)
  {
    std::ofstream f(out.path(name));
    write_coo(f, *m);
  }
  {
    auto csv = out.csv("current", "dof,edge,re,im");
    for (int d = 0; d < sys.size(); d++)
    {
      csv << d << ',' << problem.dofs.edge_of[d] << ',' << num(sys.current[d].real()) << ','
          << num(sys.current[d].imag()) << '\n';
    }
  }
  std::ofstream stats(out.path("mesh_stats.csv"));
  write_mesh_stats_csv(stats, problem.mesh, problem.dofs, problem.grid);
  return 0;
}

using Runner = std::function<int(const RunConfig &, Output &)>;

const std::map<std::string, Runner> &runners()
{
  static const std::map<std::string, Runner> table{
      {"stability", stability},
      {"nwidth", nwidth},
      {"localized-reference", localized_reference},
      {"infsup-track", infsup_track},
      {"training", training},
      {"training-benchmark", training_benchmark},
      {"geochange", geochange},
      {"solutions-export", solutions_export},
      {"export-system", export_system},
  };
  return table;
}

}  // namespace

const std::vector<std::string> &experiment_names()
{
  static const std::vector<std::string> names = []
  {
    std::vector<std::string> out;
    for (const auto &[name, fn] : runners())
    {
      out.push_back(name);
    }
    return out;
  }();
  return names;
}

ExperimentResult run_experiment(const std::string &name, const RunConfig &cfg,
                                const std::filesystem::path &out_dir)
{
  const auto it = runners().find(name);
  if (it == runners().end())
  {
    throw InvalidInput(fmt::format("unknown experiment '{}'", name));
  }
  cfg.validate();

  Output out(out_dir);
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.failures = it->second(cfg, out);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.files = out.files();

  std::ostringstream echo;
  write_run_config(echo, cfg);
  nlohmann::json manifest;
  manifest["experiment"] = name;
  manifest["version"] = version();
  manifest["eigen"] = fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                                  EIGEN_MINOR_VERSION);
  manifest["config"] = echo.str();
  manifest["seed"] = cfg.training.seed;
  manifest["full_scale"] = cfg.full_scale;
  manifest["workers"] = worker_count();
  manifest["wall_clock_seconds"] = result.seconds;
  manifest["failures"] = result.failures;
  manifest["files"] = nlohmann::json::array();
  for (const auto &f : result.files)
  {
    manifest["files"].push_back(f.generic_string());
  }
  std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';
  return result;
}

}  // namespace arbilomod
