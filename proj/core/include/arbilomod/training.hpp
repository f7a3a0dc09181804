// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_TRAINING_HPP
#define ARBILOMOD_TRAINING_HPP

#include <climits>
#include <cstdint>
#include <string>
#include <vector>

#include "arbilomod/decomposition.hpp"
#include "arbilomod/fem.hpp"
#include "arbilomod/problem.hpp"

namespace arbilomod
{

// Patch of subdomains on which a space is trained: 3x3 around a volume,
// the six subdomains around an interface, clipped at the grid.
struct TrainingDomain
{
  SpaceId space;
  std::vector<int> subdomains;  // sorted
  std::vector<int> interior;    // unknowns: active edges with all triangles in the patch
  std::vector<int> ring;        // active edges on the patch boundary inside the domain
  std::vector<int> closure_edges;  // every mesh edge touching a patch triangle

  int size() const { return static_cast<int>(interior.size()); }
  // interior U ring, sorted
  std::vector<int> dofs() const;
};

std::vector<int> training_block(const SpaceId &space, const SubdomainGrid &grid);

TrainingDomain build_training_domain(const SpaceId &space, const StructuredMesh &mesh,
                                     const SubdomainGrid &grid, const ActiveDofs &dofs);

enum class RandomDistribution
{
  gaussian,  // real and imaginary parts ~ N(0, 1)
  uniform    // real and imaginary parts ~ U(-1, 1)
};

std::string to_string(RandomDistribution d);

struct TrainingConfig
{
  int n_random = 5;
  std::uint64_t seed = 0;
  double tol_local = 1e-4;
  int max_local_size = INT_MAX;
  RandomDistribution distribution = RandomDistribution::gaussian;

  void validate() const;
};

// Local vectors over a sorted list of active DOFs.
struct SnapshotSet
{
  std::vector<int> dofs;
  CMat values;
};

struct TrainingStats
{
  int local_size = 0;        // unknowns of the local problem
  int factorizations = 0;    // one per frequency
  int skipped_frequencies = 0;
  int snapshots = 0;
};

// Zero boundary data, true source, every frequency.
SnapshotSet particular_snapshots(const TrainingDomain &td, const AffineSystem &sys,
                                 const ParameterSet &xi);
// Homogeneous problem with random ring data; n_random draws per frequency.
SnapshotSet random_snapshots(const TrainingDomain &td, const AffineSystem &sys,
                             const ParameterSet &xi, const TrainingConfig &cfg);
// Both of the above sharing one factorization per frequency.
SnapshotSet training_snapshots(const TrainingDomain &td, const AffineSystem &sys,
                               const ParameterSet &xi, const TrainingConfig &cfg,
                               TrainingStats *stats = nullptr);

// Deterministic RNG stream of one space.
std::uint64_t space_stream_seed(std::uint64_t seed, const SpaceId &space);

// Reduced basis of one localized space.
struct LocalBasis
{
  SpaceId space;
  std::vector<int> support_edges;  // mesh edge ids of the rows of `vectors`
  CMat vectors;                    // M-orthonormal columns
  std::vector<double> trajectory;  // greedy max relative error per size
  std::uint64_t content_hash = 0;

  int size() const { return static_cast<int>(vectors.cols()); }
  // Shortest greedy prefix whose error is <= tol (the whole basis if none is).
  LocalBasis truncated(double tol) const;
  LocalBasis truncated_to(int size) const;
};

// Fingerprint of everything a space's training reads: the active pattern and
// operator entries on the patch, the source, the configuration and the RNG stream.
std::uint64_t training_hash(const Problem &problem, const TrainingDomain &td,
                            const ParameterSet &xi, const TrainingConfig &cfg);

LocalBasis train_space(const SpaceId &space, const Problem &problem, const ParameterSet &xi,
                       const TrainingConfig &cfg, TrainingStats *stats = nullptr);

// Greedy on the `space` components of arbitrary global vectors (columns over
// all active DOFs).
LocalBasis compress_components(const SpaceId &space, const Problem &problem, const CMat &global,
                               double tol, int max_size);

// Trains all listed spaces concurrently; results in input order.
std::vector<LocalBasis> train_spaces(const std::vector<SpaceId> &spaces, const Problem &problem,
                                     const ParameterSet &xi, const TrainingConfig &cfg,
                                     std::vector<TrainingStats> *stats = nullptr);

}  // namespace arbilomod

#endif  // ARBILOMOD_TRAINING_HPP
