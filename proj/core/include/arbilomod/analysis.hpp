// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_ANALYSIS_HPP
#define ARBILOMOD_ANALYSIS_HPP

#include <string>
#include <vector>

#include "arbilomod/linalg.hpp"
#include "arbilomod/problem.hpp"
#include "arbilomod/rom.hpp"
#include "arbilomod/training.hpp"

namespace arbilomod
{

struct StabilityPoint
{
  double frequency = 0.0;
  double beta = 0.0;   // inf-sup constant
  double gamma = 0.0;  // continuity constant
  bool ok = true;
  std::string error;
};

// Inf-sup and continuity constants of a(., .; omega) in the V-norm. Failures at
// single points are recorded and the sweep continues.
std::vector<StabilityPoint> stability_sweep(const AffineSystem &sys, const ParameterSet &xi,
                                            const SvdOptions &opts = {});

// Greedy upper bound of the Kolmogorov n-width of {u_h(omega) : omega in xi}.
GreedyResult global_greedy_nwidth(const AffineSystem &sys, const ParameterSet &xi, double tol,
                                  int max_size = INT_MAX,
                                  const std::vector<CVec> *solutions = nullptr);

// Per-space greedy bases of the projected global solutions: the best localized
// basis available, used as a reference for training.
std::vector<LocalBasis> localized_reference_bases(const Problem &problem, const ParameterSet &xi,
                                                  double tol, int max_size = INT_MAX,
                                                  const std::vector<CVec> *solutions = nullptr);

std::vector<LocalBasis> truncate_all(const std::vector<LocalBasis> &bases, double tol);

struct SizeErrorPoint
{
  double tol = 0.0;
  int size = 0;
  double max_error = 0.0;
  int failures = 0;  // frequencies where the reduced system was singular
};

// ROM error over xi for the nested truncations of `bases` at each tolerance.
std::vector<SizeErrorPoint> error_vs_size(const std::vector<LocalBasis> &bases,
                                          const Problem &problem, const ParameterSet &xi,
                                          const std::vector<double> &tolerances,
                                          const std::vector<CVec> *solutions = nullptr);

// Largest truncation tolerance (from a fine log grid) whose total size does not
// exceed target_size; returns the truncated bases.
std::vector<LocalBasis> truncate_to_total_size(const std::vector<LocalBasis> &bases,
                                               int target_size);

struct InfSupTrackRow
{
  int size = 0;
  double frequency = 0.0;
  double beta = 0.0;
  bool ok = true;
};

// Reduced inf-sup constant for each member of a nested sequence of bases at
// the selected frequencies.
std::vector<InfSupTrackRow> reduced_infsup_track(const std::vector<std::vector<LocalBasis>> &nested,
                                                 const Problem &problem,
                                                 const std::vector<double> &frequencies);

}  // namespace arbilomod

#endif  // ARBILOMOD_ANALYSIS_HPP
