// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/config.hpp"

#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "arbilomod/common.hpp"
#include "arbilomod/text_util.hpp"

namespace arbilomod
{

namespace
{

double to_double(const std::string &w, const std::string &where)
{
  try
  {
    std::size_t used = 0;
    const double v = std::stod(w, &used);
    if (used == w.size())
    {
      return v;
    }
  }
  catch (const std::exception &)
  {
  }
  throw InvalidInput(fmt::format("{}: '{}' is not a number", where, w));
}

long long to_integer(const std::string &w, const std::string &where)
{
  try
  {
    std::size_t used = 0;
    const long long v = std::stoll(w, &used);
    if (used == w.size())
    {
      return v;
    }
  }
  catch (const std::exception &)
  {
  }
  throw InvalidInput(fmt::format("{}: '{}' is not an integer", where, w));
}

int to_int(const std::string &w, const std::string &where)
{
  const long long v = to_integer(w, where);
  if (v < INT_MIN || v > INT_MAX)
  {
    throw InvalidInput(fmt::format("{}: '{}' is out of range", where, w));
  }
  return static_cast<int>(v);
}

std::vector<double> to_doubles(const std::string &value, const std::string &where)
{
  std::vector<double> out;
  for (const auto &w : text::words(value))
  {
    out.push_back(to_double(w, where));
  }
  return out;
}

std::filesystem::path resolve(const std::string &value, const std::filesystem::path &base)
{
  std::filesystem::path p(value);
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

ParameterSet RunConfig::parameters() const
{
  return ParameterSet::equidistant(f_min, f_max, f_count);
}

std::vector<double> RunConfig::selected() const
{
  if (!selected_frequencies.empty())
  {
    return selected_frequencies;
  }
  const auto f = parameters().frequencies();
  return {f.front(), f[f.size() / 2], f.back()};
}

void RunConfig::apply_full_scale()
{
  full_scale = true;
  discretization.nx = discretization.ny = 100;
  discretization.mx = discretization.my = 10;
  f_count = 100;
}

void RunConfig::validate() const
{
  const auto &d = discretization;
  if (d.nx < 1 || d.ny < 1 || d.mx < 1 || d.my < 1)
  {
    throw InvalidInput("mesh and subdomain counts must be positive");
  }
  if (d.nx % d.mx != 0 || d.ny % d.my != 0)
  {
    throw InvalidInput(
        fmt::format("a {}x{} mesh cannot be split into {}x{} subdomains", d.nx, d.ny, d.mx, d.my));
  }
  if (!(d.extension_frequency > 0.0))
  {
    throw InvalidInput("extension_frequency must be positive");
  }
  d.material.validate();
  if (!(f_min > 0.0) || !(f_max >= f_min) || f_count < 1 || (f_count > 1 && f_max == f_min))
  {
    throw InvalidInput("sweep needs 0 < f_min < f_max and f_count >= 1");
  }
  training.validate();
  for (double t : tolerances)
  {
    if (!(t > 0.0))
    {
      throw InvalidInput("tolerances must be positive");
    }
  }
  if (!(nwidth_tol > 0.0))
  {
    throw InvalidInput("nwidth_tol must be positive");
  }
  for (double f : selected_frequencies)
  {
    if (!(f > 0.0))
    {
      throw InvalidInput("selected frequencies must be positive");
    }
  }
}

RunConfig parse_run_config(std::istream &in, const std::filesystem::path &base_dir,
                           const std::string &origin)
{
  RunConfig cfg;
  std::string line, key, value;
  int lineno = 0;
  while (std::getline(in, line))
  {
    lineno++;
    if (!text::split_key_value(line, key, value))
    {
      continue;
    }
    const std::string where = fmt::format("{}:{}", origin, lineno);
    if (value.empty())
    {
      throw InvalidInput(fmt::format("{}: '{}' needs a value", where, key));
    }
    auto &d = cfg.discretization;
    if (key == "geometry")
    {
      cfg.geometry = resolve(value, base_dir);
    }
    else if (key == "new_geometry")
    {
      cfg.new_geometry = resolve(value, base_dir);
    }
    else if (key == "nx")
    {
      d.nx = to_int(value, where);
    }
    else if (key == "ny")
    {
      d.ny = to_int(value, where);
    }
    else if (key == "mx")
    {
      d.mx = to_int(value, where);
    }
    else if (key == "my")
    {
      d.my = to_int(value, where);
    }
    else if (key == "extension_frequency")
    {
      d.extension_frequency = to_double(value, where);
    }
    else if (key == "eps")
    {
      d.material.eps = to_double(value, where);
    }
    else if (key == "mu")
    {
      d.material.mu = to_double(value, where);
    }
    else if (key == "kappa")
    {
      d.material.kappa = to_double(value, where);
    }
    else if (key == "f_min")
    {
      cfg.f_min = to_double(value, where);
    }
    else if (key == "f_max")
    {
      cfg.f_max = to_double(value, where);
    }
    else if (key == "f_count")
    {
      cfg.f_count = to_int(value, where);
    }
    else if (key == "n_random")
    {
      cfg.training.n_random = to_int(value, where);
    }
    else if (key == "seed")
    {
      const long long s = to_integer(value, where);
      if (s < 0)
      {
        throw InvalidInput(fmt::format("{}: seed must be non-negative", where));
      }
      cfg.training.seed = static_cast<std::uint64_t>(s);
    }
    else if (key == "tol_local")
    {
      cfg.training.tol_local = to_double(value, where);
    }
    else if (key == "max_local_size")
    {
      cfg.training.max_local_size = to_int(value, where);
    }
    else if (key == "distribution")
    {
      if (value == "gaussian")
      {
        cfg.training.distribution = RandomDistribution::gaussian;
      }
      else if (value == "uniform")
      {
        cfg.training.distribution = RandomDistribution::uniform;
      }
      else
      {
        throw InvalidInput(fmt::format("{}: unknown distribution '{}'", where, value));
      }
    }
    else if (key == "tolerances")
    {
      cfg.tolerances = to_doubles(value, where);
    }
    else if (key == "nwidth_tol")
    {
      cfg.nwidth_tol = to_double(value, where);
    }
    else if (key == "selected_frequencies")
    {
      cfg.selected_frequencies = to_doubles(value, where);
    }
    else if (key == "full_scale")
    {
      if (value == "true" || value == "1")
      {
        cfg.apply_full_scale();
      }
      else if (value != "false" && value != "0")
      {
        throw InvalidInput(fmt::format("{}: full_scale must be true or false", where));
      }
    }
    else
    {
      throw InvalidInput(fmt::format("{}: unknown key '{}'", where, key));
    }
  }
  if (cfg.geometry.empty())
  {
    throw InvalidInput(fmt::format("{}: 'geometry' is required", origin));
  }
  cfg.validate();
  return cfg;
}

RunConfig read_run_config(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw InvalidInput(fmt::format("cannot open config '{}'", path.string()));
  }
  return parse_run_config(in, path.parent_path(), path.string());
}

void write_run_config(std::ostream &out, const RunConfig &cfg)
{
  const auto &d = cfg.discretization;
  out << fmt::format("geometry = {}\n", cfg.geometry.string());
  if (!cfg.new_geometry.empty())
  {
    out << fmt::format("new_geometry = {}\n", cfg.new_geometry.string());
  }
  out << fmt::format("nx = {}\nny = {}\nmx = {}\nmy = {}\n", d.nx, d.ny, d.mx, d.my);
  out << fmt::format("extension_frequency = {:.17g}\n", d.extension_frequency);
  out << fmt::format("eps = {:.17g}\nmu = {:.17g}\nkappa = {:.17g}\n", d.material.eps,
                     d.material.mu, d.material.kappa);
  out << fmt::format("f_min = {:.17g}\nf_max = {:.17g}\nf_count = {}\n", cfg.f_min, cfg.f_max,
                     cfg.f_count);
  const auto &t = cfg.training;
  out << fmt::format("n_random = {}\nseed = {}\ntol_local = {:.17g}\n", t.n_random, t.seed,
                     t.tol_local);
  if (t.max_local_size != INT_MAX)
  {
    out << fmt::format("max_local_size = {}\n", t.max_local_size);
  }
  out << fmt::format("distribution = {}\n", to_string(t.distribution));
  out << fmt::format("tolerances = {:.17g}\n", fmt::join(cfg.tolerances, " "));
  out << fmt::format("nwidth_tol = {:.17g}\n", cfg.nwidth_tol);
  if (!cfg.selected_frequencies.empty())
  {
    out << fmt::format("selected_frequencies = {:.17g}\n", fmt::join(cfg.selected_frequencies, " "));
  }
}

}  // namespace arbilomod
