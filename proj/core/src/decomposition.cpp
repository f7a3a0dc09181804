// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/decomposition.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace arbilomod
{

std::string SpaceId::str() const
{
  return is_volume() ? fmt::format("V{}", i) : fmt::format("I{}-{}", i, j);
}

SpaceId SpaceId::parse(const std::string &text)
{
  try
  {
    if (text.size() >= 2 && text[0] == 'V')
    {
      std::size_t used = 0;
      const int s = std::stoi(text.substr(1), &used);
      if (used + 1 == text.size() && s >= 0)
      {
        return volume(s);
      }
    }
    else if (text.size() >= 4 && text[0] == 'I')
    {
      const auto dash = text.find('-');
      if (dash != std::string::npos)
      {
        std::size_t used_a = 0, used_b = 0;
        const int a = std::stoi(text.substr(1, dash - 1), &used_a);
        const int b = std::stoi(text.substr(dash + 1), &used_b);
        if (used_a + 1 == dash && dash + 1 + used_b == text.size() && a >= 0 && b >= 0 && a != b)
        {
          return interface(a, b);
        }
      }
    }
  }
  catch (const std::exception &)
  {
  }
  throw InvalidInput(fmt::format("'{}' is not a space id (expected V<i> or I<i>-<j>)", text));
}

std::optional<int> SpaceLayout::interface_index(int a, int b) const
{
  const auto it = lookup_.find({std::min(a, b), std::max(a, b)});
  if (it == lookup_.end())
  {
    return std::nullopt;
  }
  return it->second;
}

std::vector<SpaceId> SpaceLayout::spaces() const
{
  std::vector<SpaceId> out;
  out.reserve(volume_.size() + interfaces_.size());
  for (int s = 0; s < num_subdomains(); s++)
  {
    out.push_back(SpaceId::volume(s));
  }
  for (const auto &f : interfaces_)
  {
    out.push_back(SpaceId::interface(f.first, f.second));
  }
  return out;
}

const std::vector<int> &SpaceLayout::support(const SpaceId &space) const
{
  if (space.is_volume())
  {
    if (space.i < 0 || space.i >= num_subdomains())
    {
      throw InvalidInput(fmt::format("unknown space {}", space.str()));
    }
    return volume_[space.i];
  }
  const auto k = interface_index(space.i, space.j);
  if (!k)
  {
    throw InvalidInput(fmt::format("unknown space {}", space.str()));
  }
  return interfaces_[*k].support;
}

std::vector<int> SpaceLayout::subdomains(const SpaceId &space) const
{
  if (space.is_volume())
  {
    return {space.i};
  }
  return {space.i, space.j};
}

SpaceLayout classify(const SubdomainGrid &grid, const ActiveDofs &dofs)
{
  if (grid.edge_owner.size() != dofs.compact.size())
  {
    throw InvalidInput("classify: subdomain grid and DOF mask belong to different meshes");
  }
  SpaceLayout layout;
  layout.n_active_ = dofs.size();
  layout.volume_.resize(grid.num_subdomains());
  layout.interfaces_of_.resize(grid.num_subdomains());
  for (std::size_t k = 0; k < grid.interfaces.size(); k++)
  {
    const auto [a, b] = grid.interfaces[k];
    SpaceLayout::InterfaceSets sets;
    sets.first = a;
    sets.second = b;
    layout.interfaces_.push_back(std::move(sets));
    layout.lookup_[{a, b}] = static_cast<int>(k);
    layout.interfaces_of_[a].push_back(static_cast<int>(k));
    layout.interfaces_of_[b].push_back(static_cast<int>(k));
  }
  // Compact indices increase with edge index, so the sets come out sorted.
  for (int d = 0; d < dofs.size(); d++)
  {
    const EdgeOwner owner = grid.edge_owner[dofs.edge_of[d]];
    if (owner.is_interface())
    {
      layout.interfaces_[layout.lookup_.at({owner.first, owner.second})].seed.push_back(d);
    }
    else
    {
      layout.volume_[owner.first].push_back(d);
    }
  }
  for (auto &f : layout.interfaces_)
  {
    const auto &va = layout.volume_[f.first];
    const auto &vb = layout.volume_[f.second];
    std::merge(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(f.interior));
    std::merge(f.interior.begin(), f.interior.end(), f.seed.begin(), f.seed.end(),
               std::back_inserter(f.support));
  }
  return layout;
}

struct SpaceDecomposition::Extension
{
  std::unique_ptr<Factorization> lu;  // A_II(omega'), absent when the interior is empty
  SpMat coupling;                     // A_IU(omega')
  // Positions of volume(first) / volume(second) inside `interior`.
  std::vector<int> first_pos;
  std::vector<int> second_pos;
  // Positions of seed / interior inside `support`.
  std::vector<int> seed_in_support;
  std::vector<int> interior_in_support;
};

namespace
{

std::vector<int> positions_in(const std::vector<int> &sub, const std::vector<int> &sorted_super)
{
  std::vector<int> pos;
  pos.reserve(sub.size());
  for (int d : sub)
  {
    const auto it = std::lower_bound(sorted_super.begin(), sorted_super.end(), d);
    pos.push_back(static_cast<int>(it - sorted_super.begin()));
  }
  return pos;
}

}  // namespace

SpaceDecomposition::SpaceDecomposition(SpaceLayout layout, std::shared_ptr<const AffineSystem> sys,
                                       double extension_omega)
  : layout_(std::move(layout)), sys_(std::move(sys)), omega_(extension_omega)
{
  if (!sys_ || sys_->size() != layout_.num_active())
  {
    throw InvalidInput("SpaceDecomposition: system does not match the DOF layout");
  }
  if (!(omega_ > 0.0))
  {
    throw InvalidInput("SpaceDecomposition: extension frequency must be positive");
  }
  a_ext_ = system_matrix(*sys_, omega_);
  const std::size_t n = static_cast<std::size_t>(layout_.num_interfaces());
  once_.resize(n);
  ext_.resize(n);
  for (std::size_t k = 0; k < n; k++)
  {
    once_[k] = std::make_unique<std::once_flag>();
  }
}

SpaceDecomposition::~SpaceDecomposition() = default;

const SpaceDecomposition::Extension &SpaceDecomposition::extension(int k) const
{
  std::call_once(*once_[k],
                 [this, k]()
                 {
                   const auto &sets = layout_.interface_sets(k);
                   auto e = std::make_unique<Extension>();
                   e->coupling = extract_block(a_ext_, sets.interior, sets.seed);
                   if (!sets.interior.empty())
                   {
                     try
                     {
                       e->lu = std::make_unique<Factorization>(
                           extract_block(a_ext_, sets.interior, sets.interior));
                     }
                     catch (const SingularFactorization &err)
                     {
                       throw SingularFactorization(fmt::format(
                           "extension problem of interface I{}-{} is singular at omega'={:.6e} "
                           "rad/s; choose a different extension frequency ({})",
                           sets.first, sets.second, omega_, err.what()));
                     }
                     factorizations_++;
                   }
                   e->first_pos = positions_in(layout_.volume_dofs(sets.first), sets.interior);
                   e->second_pos = positions_in(layout_.volume_dofs(sets.second), sets.interior);
                   e->seed_in_support = positions_in(sets.seed, sets.support);
                   e->interior_in_support = positions_in(sets.interior, sets.support);
                   ext_[k] = std::move(e);
                 });
  return *ext_[k];
}

CMat SpaceDecomposition::extend_interior(int k, const CMat &seed) const
{
  const auto &sets = layout_.interface_sets(k);
  if (seed.rows() != static_cast<Eigen::Index>(sets.seed.size()))
  {
    throw InvalidInput("extend: seed coefficients do not match the interface seed set");
  }
  const Extension &e = extension(k);
  if (!e.lu)
  {
    return CMat(0, seed.cols());
  }
  const CMat rhs = -(e.coupling * seed);
  return e.lu->solve(rhs);
}

CVec SpaceDecomposition::extend(const SpaceId &space, const CVec &seed) const
{
  if (!space.is_interface())
  {
    throw InvalidInput("extend: only interface spaces have an extension");
  }
  const auto k = layout_.interface_index(space.i, space.j);
  if (!k)
  {
    throw InvalidInput(fmt::format("extend: unknown interface {}", space.str()));
  }
  const auto &sets = layout_.interface_sets(*k);
  const CMat inner = extend_interior(*k, seed);
  CVec out = CVec::Zero(layout_.num_active());
  for (std::size_t p = 0; p < sets.seed.size(); p++)
  {
    out[sets.seed[p]] = seed[static_cast<Eigen::Index>(p)];
  }
  for (std::size_t p = 0; p < sets.interior.size(); p++)
  {
    out[sets.interior[p]] = inner(static_cast<Eigen::Index>(p), 0);
  }
  return out;
}

namespace
{

CMat gather(const std::vector<int> &wanted, const std::vector<int> &row_of, const CMat &values)
{
  CMat out = CMat::Zero(static_cast<Eigen::Index>(wanted.size()), values.cols());
  for (std::size_t p = 0; p < wanted.size(); p++)
  {
    const int r = row_of[wanted[p]];
    if (r >= 0)
    {
      out.row(static_cast<Eigen::Index>(p)) = values.row(r);
    }
  }
  return out;
}

}  // namespace

CMat SpaceDecomposition::component(const SpaceId &space, std::span<const int> dofs,
                                   const CMat &values) const
{
  if (values.rows() != static_cast<Eigen::Index>(dofs.size()))
  {
    throw InvalidInput("component: value rows do not match the DOF list");
  }
  std::vector<int> row_of(layout_.num_active(), -1);
  for (std::size_t r = 0; r < dofs.size(); r++)
  {
    row_of[dofs[r]] = static_cast<int>(r);
  }

  if (space.is_interface())
  {
    const auto k = layout_.interface_index(space.i, space.j);
    if (!k)
    {
      throw InvalidInput(fmt::format("component: unknown interface {}", space.str()));
    }
    const auto &sets = layout_.interface_sets(*k);
    const CMat seed = gather(sets.seed, row_of, values);
    const CMat inner = extend_interior(*k, seed);
    const Extension &e = extension(*k);
    CMat out(static_cast<Eigen::Index>(sets.support.size()), values.cols());
    for (std::size_t p = 0; p < sets.seed.size(); p++)
    {
      out.row(e.seed_in_support[p]) = seed.row(static_cast<Eigen::Index>(p));
    }
    for (std::size_t p = 0; p < sets.interior.size(); p++)
    {
      out.row(e.interior_in_support[p]) = inner.row(static_cast<Eigen::Index>(p));
    }
    return out;
  }

  const int s = space.i;
  if (s < 0 || s >= layout_.num_subdomains())
  {
    throw InvalidInput(fmt::format("component: unknown space {}", space.str()));
  }
  CMat out = gather(layout_.volume_dofs(s), row_of, values);
  // P_i(phi) = (phi - sum of interface parts) restricted to the interior of
  // subdomain i; only the interfaces of i reach into it.
  for (int k : layout_.interfaces_of(s))
  {
    const auto &sets = layout_.interface_sets(k);
    const CMat seed = gather(sets.seed, row_of, values);
    if (seed.isZero(0.0))
    {
      continue;
    }
    const CMat inner = extend_interior(k, seed);
    const Extension &e = extension(k);
    const auto &pos = sets.first == s ? e.first_pos : e.second_pos;
    for (std::size_t p = 0; p < pos.size(); p++)
    {
      out.row(static_cast<Eigen::Index>(p)) -= inner.row(pos[p]);
    }
  }
  return out;
}

CVec SpaceDecomposition::embed(const SpaceId &space, const CVec &local) const
{
  const auto &support = layout_.support(space);
  if (local.size() != static_cast<Eigen::Index>(support.size()))
  {
    throw InvalidInput("embed: vector does not match the space support");
  }
  CVec out = CVec::Zero(layout_.num_active());
  for (std::size_t p = 0; p < support.size(); p++)
  {
    out[support[p]] = local[static_cast<Eigen::Index>(p)];
  }
  return out;
}

std::map<SpaceId, CVec> SpaceDecomposition::project(const CVec &phi) const
{
  if (phi.size() != layout_.num_active())
  {
    throw InvalidInput("project: vector is not over the active DOFs");
  }
  std::vector<int> all(layout_.num_active());
  for (int d = 0; d < layout_.num_active(); d++)
  {
    all[d] = d;
  }
  const CMat values = phi;
  std::map<SpaceId, CVec> out;
  for (const SpaceId &space : layout_.spaces())
  {
    out[space] = embed(space, component(space, all, values).col(0));
  }
  return out;
}

}  // namespace arbilomod
