// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_CHANGE_HPP
#define ARBILOMOD_CHANGE_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

#include "arbilomod/problem.hpp"
#include "arbilomod/rom.hpp"
#include "arbilomod/training.hpp"

namespace arbilomod
{

// Per subdomain: hash of the active pattern, the operator entries and the
// source restricted to the edges of its triangles.
std::vector<std::uint64_t> subdomain_fingerprints(const Problem &problem);

struct ChangeSet
{
  std::filesystem::path old_geometry;  // informational; may be empty
  std::filesystem::path new_geometry;
  std::filesystem::path config;
  std::vector<int> changed_subdomains;
  std::vector<SpaceId> retrain;
  std::vector<SpaceId> reuse;

  int retrain_count(SpaceId::Kind kind) const;
};

// Both problems must share mesh and subdomain grid.
ChangeSet plan_change(const Problem &old_problem, const Problem &new_problem);

// Spaces whose training patch contains one of the given subdomains.
std::vector<SpaceId> affected_spaces(const SpaceLayout &layout, const SubdomainGrid &grid,
                                     const std::vector<int> &changed);

// "key = value" text: old, new, config (paths), changed, retrain, reuse.
void write_changeset(std::ostream &out, const ChangeSet &cs);
ChangeSet parse_changeset(std::istream &in, const std::filesystem::path &base_dir = {},
                          const std::string &origin = "<stream>");
ChangeSet read_changeset(const std::filesystem::path &path);

struct RerunReport
{
  std::vector<LocalBasis> bases;  // in layout order
  std::vector<SpaceId> retrained;
  std::vector<SpaceId> reused;
  std::vector<SpaceId> hash_mismatch;  // stored but stale; retrained
  // Local factorizations per frequency by space kind and their problem sizes.
  int volume_factorizations = 0;
  int interface_factorizations = 0;
  int max_volume_problem = 0;
  int max_interface_problem = 0;
  int reduced_factorizations = 1;  // per frequency
  int rom_dim = 0;
  ErrorSweep errors;
};

// Retrains cs.retrain plus every reuse candidate without a matching stored
// basis, then assembles and checks the mixed model on the new problem.
RerunReport rerun_after_change(const ChangeSet &cs, const Problem &new_problem,
                               const std::filesystem::path &bases_dir, const ParameterSet &xi,
                               const TrainingConfig &cfg,
                               const std::vector<CVec> *reference = nullptr);

}  // namespace arbilomod

#endif  // ARBILOMOD_CHANGE_HPP
