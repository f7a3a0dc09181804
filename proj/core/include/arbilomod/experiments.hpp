// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_EXPERIMENTS_HPP
#define ARBILOMOD_EXPERIMENTS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "arbilomod/config.hpp"

namespace arbilomod
{

const char *version();

// Selectors accepted by run_experiment.
const std::vector<std::string> &experiment_names();

struct ExperimentResult
{
  std::vector<std::filesystem::path> files;  // written, relative to the output directory
  int failures = 0;                          // items that failed numerically and were skipped
  double seconds = 0.0;
};

// Runs one experiment, writing CSV files plus manifest.json into out_dir.
// CSV files start with "# arbilomod-csv v1 <name>" and are deterministic for
// a fixed configuration.
ExperimentResult run_experiment(const std::string &name, const RunConfig &cfg,
                                const std::filesystem::path &out_dir);

}  // namespace arbilomod

#endif  // ARBILOMOD_EXPERIMENTS_HPP
