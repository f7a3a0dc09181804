// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_DECOMPOSITION_HPP
#define ARBILOMOD_DECOMPOSITION_HPP

#include <atomic>
#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arbilomod/common.hpp"
#include "arbilomod/fem.hpp"
#include "arbilomod/linalg.hpp"
#include "arbilomod/mesh.hpp"

namespace arbilomod
{

struct SpaceId
{
  enum class Kind : std::uint8_t
  {
    volume = 0,
    interface = 1
  };

  Kind kind = Kind::volume;
  int i = 0;
  int j = -1;  // interface partner, i < j

  static SpaceId volume(int s) { return {Kind::volume, s, -1}; }
  static SpaceId interface(int a, int b)
  {
    return {Kind::interface, std::min(a, b), std::max(a, b)};
  }
  bool is_volume() const { return kind == Kind::volume; }
  bool is_interface() const { return kind == Kind::interface; }

  // "V7" or "I7-8"
  std::string str() const;
  static SpaceId parse(const std::string &text);

  auto operator<=>(const SpaceId &) const = default;
};

// Index sets of the direct decomposition: which active DOFs generate which
// localized space. Pure bookkeeping, no operators.
class SpaceLayout
{
public:
  struct InterfaceSets
  {
    int first = -1;
    int second = -1;
    std::vector<int> seed;      // U_{first,second}, compact, sorted
    std::vector<int> interior;  // volume(first) U volume(second), sorted
    std::vector<int> support;   // seed U interior, sorted
  };

  int num_active() const { return n_active_; }
  int num_subdomains() const { return static_cast<int>(volume_.size()); }
  int num_interfaces() const { return static_cast<int>(interfaces_.size()); }

  const std::vector<int> &volume_dofs(int s) const { return volume_[s]; }
  const InterfaceSets &interface_sets(int k) const { return interfaces_[k]; }
  std::optional<int> interface_index(int a, int b) const;
  const std::vector<int> &interfaces_of(int s) const { return interfaces_of_[s]; }

  // Volumes 0..N-1 followed by interfaces in grid order.
  std::vector<SpaceId> spaces() const;
  // DOFs a vector of this space may be nonzero on (sorted).
  const std::vector<int> &support(const SpaceId &space) const;
  // Subdomains the space's support touches.
  std::vector<int> subdomains(const SpaceId &space) const;

private:
  friend SpaceLayout classify(const SubdomainGrid &grid, const ActiveDofs &dofs);
  int n_active_ = 0;
  std::vector<std::vector<int>> volume_;
  std::vector<InterfaceSets> interfaces_;
  std::map<std::pair<int, int>, int> lookup_;
  std::vector<std::vector<int>> interfaces_of_;
};

SpaceLayout classify(const SubdomainGrid &grid, const ActiveDofs &dofs);

// Volume spaces, discrete-harmonic interface spaces and the projections onto them.
class SpaceDecomposition
{
public:
  SpaceDecomposition(SpaceLayout layout, std::shared_ptr<const AffineSystem> sys,
                     double extension_omega);
  ~SpaceDecomposition();

  const SpaceLayout &layout() const { return layout_; }
  const AffineSystem &system() const { return *sys_; }
  double extension_omega() const { return omega_; }

  // Extension of seed coefficients (columns, ordered like interface_sets(k).seed)
  // into the two adjacent subdomains; rows ordered like interface_sets(k).interior.
  CMat extend_interior(int k, const CMat &seed) const;
  // Global vector equal to `seed` (ordered like the interface's seed set) on U
  // and discrete-harmonic at omega' inside.
  CVec extend(const SpaceId &space, const CVec &seed) const;

  // Component of every column of `values` in `space`, returned on
  // layout().support(space). Values live on the listed DOFs and are taken as
  // zero elsewhere.
  CMat component(const SpaceId &space, std::span<const int> dofs, const CMat &values) const;

  // All components as global vectors; they sum to phi.
  std::map<SpaceId, CVec> project(const CVec &phi) const;

  // Embeds a support-ordered vector into the global active-DOF vector.
  CVec embed(const SpaceId &space, const CVec &local) const;

  // Local extension factorizations performed so far.
  int factorizations() const { return factorizations_.load(); }

private:
  struct Extension;
  const Extension &extension(int k) const;

  SpaceLayout layout_;
  std::shared_ptr<const AffineSystem> sys_;
  double omega_;
  SpMat a_ext_;
  mutable std::vector<std::unique_ptr<std::once_flag>> once_;
  mutable std::vector<std::unique_ptr<Extension>> ext_;
  mutable std::atomic<int> factorizations_{0};
};

}  // namespace arbilomod

#endif  // ARBILOMOD_DECOMPOSITION_HPP
