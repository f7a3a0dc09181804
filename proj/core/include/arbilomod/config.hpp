// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_CONFIG_HPP
#define ARBILOMOD_CONFIG_HPP

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "arbilomod/fem.hpp"
#include "arbilomod/problem.hpp"
#include "arbilomod/training.hpp"

namespace arbilomod
{

// Settings of one batch run. Text format: one "key = value" per line, '#'
// starts a comment, relative paths are resolved against the config file.
struct RunConfig
{
  std::filesystem::path geometry;      // required
  std::filesystem::path new_geometry;  // geochange only
  DiscretizationOptions discretization;
  double f_min = 10.0e6;
  double f_max = 1.0e9;
  int f_count = 10;
  TrainingConfig training;
  // Truncation tolerances for size/error curves, largest first.
  std::vector<double> tolerances{1e-1, 1e-2, 1e-3, 1e-4};
  double nwidth_tol = 1e-6;
  // Frequencies for the reduced inf-sup track and the field export; empty
  // picks the lower end, the middle and the upper end of the sweep.
  std::vector<double> selected_frequencies;
  bool full_scale = false;

  ParameterSet parameters() const;
  std::vector<double> selected() const;
  // 100x100 mesh, 10x10 subdomains, 100 frequencies.
  void apply_full_scale();
  void validate() const;
};

RunConfig parse_run_config(std::istream &in, const std::filesystem::path &base_dir = {},
                           const std::string &origin = "<stream>");
RunConfig read_run_config(const std::filesystem::path &path);
// Inverse of parse_run_config (paths written as given).
void write_run_config(std::ostream &out, const RunConfig &cfg);

}  // namespace arbilomod

#endif  // ARBILOMOD_CONFIG_HPP
