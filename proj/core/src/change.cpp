// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/change.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <fmt/format.h>

#include "arbilomod/basis_io.hpp"
#include "arbilomod/hash.hpp"
#include "arbilomod/text_util.hpp"

namespace arbilomod
{

std::vector<std::uint64_t> subdomain_fingerprints(const Problem &problem)
{
  const auto &mesh = problem.mesh;
  const auto &grid = problem.grid;
  const auto &dofs = problem.dofs;
  const auto &sys = problem.sys();

  std::vector<std::vector<int>> closure(grid.num_subdomains());
  for (int t = 0; t < mesh.num_triangles(); t++)
  {
    for (int e : mesh.triangles[t].edge)
    {
      closure[grid.triangle_subdomain[t]].push_back(e);
    }
  }

  std::vector<std::uint64_t> out(grid.num_subdomains());
  std::vector<char> inside(mesh.num_edges(), 0);
  for (int s = 0; s < grid.num_subdomains(); s++)
  {
    auto &edges = closure[s];
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (int e : edges)
    {
      inside[e] = 1;
    }
    ContentHasher h;
    for (int e : edges)
    {
      h.add(e).add(static_cast<int>(dofs.reason[e]));
      const int c = dofs.compact[e];
      if (c < 0)
      {
        continue;
      }
      h.add(sys.current[c].real()).add(sys.current[c].imag());
      for (const RSpMat *m : {&sys.curl, &sys.mass, &sys.robin})
      {
        for (RSpMat::InnerIterator it(*m, c); it; ++it)
        {
          const int other = dofs.edge_of[it.row()];
          if (inside[other])
          {
            h.add(other).add(it.value());
          }
        }
      }
    }
    for (int e : edges)
    {
      inside[e] = 0;
    }
    out[s] = h.value();
  }
  return out;
}

std::vector<SpaceId> affected_spaces(const SpaceLayout &layout, const SubdomainGrid &grid,
                                     const std::vector<int> &changed)
{
  std::vector<SpaceId> out;
  for (const auto &space : layout.spaces())
  {
    const auto block = training_block(space, grid);
    const bool hit = std::any_of(block.begin(), block.end(),
                                 [&](int s)
                                 { return std::find(changed.begin(), changed.end(), s) != changed.end(); });
    if (hit)
    {
      out.push_back(space);
    }
  }
  return out;
}

int ChangeSet::retrain_count(SpaceId::Kind kind) const
{
  return static_cast<int>(
      std::count_if(retrain.begin(), retrain.end(), [&](const SpaceId &s) { return s.kind == kind; }));
}

ChangeSet plan_change(const Problem &old_problem, const Problem &new_problem)
{
  const auto &a = old_problem.options;
  const auto &b = new_problem.options;
  if (a.nx != b.nx || a.ny != b.ny || a.mx != b.mx || a.my != b.my ||
      !(old_problem.mesh.rect == new_problem.mesh.rect))
  {
    throw InvalidInput("geometry change needs the same mesh and subdomain grid");
  }
  const auto before = subdomain_fingerprints(old_problem);
  const auto after = subdomain_fingerprints(new_problem);
  ChangeSet cs;
  for (std::size_t s = 0; s < before.size(); s++)
  {
    if (before[s] != after[s])
    {
      cs.changed_subdomains.push_back(static_cast<int>(s));
    }
  }
  cs.retrain = affected_spaces(new_problem.layout(), new_problem.grid, cs.changed_subdomains);
  for (const auto &space : new_problem.layout().spaces())
  {
    if (std::find(cs.retrain.begin(), cs.retrain.end(), space) == cs.retrain.end())
    {
      cs.reuse.push_back(space);
    }
  }
  return cs;
}

namespace
{

std::string join_spaces(const std::vector<SpaceId> &spaces)
{
  std::string out;
  for (const auto &s : spaces)
  {
    out += (out.empty() ? "" : " ") + s.str();
  }
  return out;
}

constexpr const char *kChangesetHeader = "# arbilomod changeset v1";

}  // namespace

void write_changeset(std::ostream &out, const ChangeSet &cs)
{
  out << kChangesetHeader << '\n';
  if (!cs.old_geometry.empty())
  {
    out << "old = " << cs.old_geometry.string() << '\n';
  }
  if (!cs.new_geometry.empty())
  {
    out << "new = " << cs.new_geometry.string() << '\n';
  }
  if (!cs.config.empty())
  {
    out << "config = " << cs.config.string() << '\n';
  }
  out << "changed =";
  for (int s : cs.changed_subdomains)
  {
    out << ' ' << s;
  }
  out << "\nretrain = " << join_spaces(cs.retrain) << "\nreuse = " << join_spaces(cs.reuse)
      << '\n';
}

ChangeSet parse_changeset(std::istream &in, const std::filesystem::path &base_dir,
                          const std::string &origin)
{
  ChangeSet cs;
  std::string line, key, value;
  int lineno = 0;
  auto resolve = [&](const std::string &v)
  {
    std::filesystem::path p(v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  if (!std::getline(in, line) || text::trim(line) != kChangesetHeader)
  {
    throw InvalidInput(fmt::format("{}: missing '{}' header", origin, kChangesetHeader));
  }
  lineno++;
  while (std::getline(in, line))
  {
    lineno++;
    if (!text::split_key_value(line, key, value))
    {
      continue;
    }
    const std::string where = fmt::format("{}:{}", origin, lineno);
    try
    {
      if (key == "old")
      {
        cs.old_geometry = resolve(value);
      }
      else if (key == "new")
      {
        cs.new_geometry = resolve(value);
      }
      else if (key == "config")
      {
        cs.config = resolve(value);
      }
      else if (key == "changed")
      {
        for (const auto &w : text::words(value))
        {
          std::size_t used = 0;
          const int s = std::stoi(w, &used);
          if (used != w.size() || s < 0)
          {
            throw InvalidInput(w);
          }
          cs.changed_subdomains.push_back(s);
        }
      }
      else if (key == "retrain" || key == "reuse")
      {
        auto &list = key == "retrain" ? cs.retrain : cs.reuse;
        for (const auto &w : text::words(value))
        {
          list.push_back(SpaceId::parse(w));
        }
      }
      else
      {
        throw InvalidInput(fmt::format("unknown key '{}'", key));
      }
    }
    catch (const InvalidInput &err)
    {
      throw InvalidInput(fmt::format("{}: {}", where, err.what()));
    }
    catch (const std::exception &)
    {
      throw InvalidInput(fmt::format("{}: malformed value for '{}'", where, key));
    }
  }
  return cs;
}

ChangeSet read_changeset(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw InvalidInput(fmt::format("cannot open changeset '{}'", path.string()));
  }
  return parse_changeset(in, path.parent_path(), path.string());
}

RerunReport rerun_after_change(const ChangeSet &cs, const Problem &new_problem,
                               const std::filesystem::path &bases_dir, const ParameterSet &xi,
                               const TrainingConfig &cfg, const std::vector<CVec> *reference)
{
  const auto spaces = new_problem.layout().spaces();
  RerunReport report;
  report.bases.resize(spaces.size());

  std::vector<std::size_t> todo;
  for (std::size_t k = 0; k < spaces.size(); k++)
  {
    const SpaceId &space = spaces[k];
    const bool planned = std::find(cs.retrain.begin(), cs.retrain.end(), space) != cs.retrain.end();
    if (!planned)
    {
      auto stored = try_read_basis(bases_dir, space);
      if (stored)
      {
        const auto td =
            build_training_domain(space, new_problem.mesh, new_problem.grid, new_problem.dofs);
        if (stored->space == space &&
            stored->content_hash == training_hash(new_problem, td, xi, cfg))
        {
          report.bases[k] = std::move(*stored);
          report.reused.push_back(space);
          continue;
        }
        report.hash_mismatch.push_back(space);
        std::cerr << fmt::format("warning: stored basis of {} does not match its training "
                                 "domain; retraining\n",
                                 space.str());
      }
      else
      {
        report.hash_mismatch.push_back(space);
        std::cerr << fmt::format("warning: no stored basis for {}; retraining\n", space.str());
      }
    }
    todo.push_back(k);
  }

  std::vector<SpaceId> retrain;
  for (std::size_t k : todo)
  {
    retrain.push_back(spaces[k]);
  }
  std::vector<TrainingStats> stats;
  auto trained = train_spaces(retrain, new_problem, xi, cfg, &stats);
  for (std::size_t n = 0; n < todo.size(); n++)
  {
    const SpaceId &space = retrain[n];
    report.bases[todo[n]] = std::move(trained[n]);
    report.retrained.push_back(space);
    if (space.is_volume())
    {
      report.volume_factorizations++;
      report.max_volume_problem = std::max(report.max_volume_problem, stats[n].local_size);
    }
    else
    {
      report.interface_factorizations++;
      report.max_interface_problem = std::max(report.max_interface_problem, stats[n].local_size);
    }
  }

  const ReducedModel rom = assemble_rom(report.bases, new_problem);
  report.rom_dim = rom.dim();
  report.errors = rom_error_sweep(rom, new_problem.sys(), xi, reference);
  return report;
}

}  // namespace arbilomod
