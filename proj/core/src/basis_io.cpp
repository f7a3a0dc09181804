// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#include "arbilomod/basis_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

namespace arbilomod
{

namespace
{

constexpr std::array<char, 4> kMagic = {'A', 'L', 'M', 'B'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream &out, T value)
{
  out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T get(std::istream &in, const std::filesystem::path &path)
{
  T value{};
  in.read(reinterpret_cast<char *>(&value), sizeof(T));
  if (!in)
  {
    throw InvalidInput(fmt::format("truncated basis file '{}'", path.string()));
  }
  return value;
}

}  // namespace

void write_basis(const std::filesystem::path &path, const LocalBasis &basis)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw InvalidInput(fmt::format("cannot write basis file '{}'", path.string()));
  }
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(basis.space.kind));
  put<std::int32_t>(out, basis.space.i);
  put<std::int32_t>(out, basis.space.j);
  put<std::uint64_t>(out, basis.content_hash);
  put<std::uint64_t>(out, basis.support_edges.size());
  put<std::uint64_t>(out, static_cast<std::uint64_t>(basis.size()));
  put<std::uint64_t>(out, basis.trajectory.size());
  for (int e : basis.support_edges)
  {
    put<std::int32_t>(out, e);
  }
  for (double t : basis.trajectory)
  {
    put<double>(out, t);
  }
  for (Eigen::Index c = 0; c < basis.vectors.cols(); c++)
  {
    for (Eigen::Index r = 0; r < basis.vectors.rows(); r++)
    {
      put<double>(out, basis.vectors(r, c).real());
      put<double>(out, basis.vectors(r, c).imag());
    }
  }
  if (!out)
  {
    throw InvalidInput(fmt::format("failed writing basis file '{}'", path.string()));
  }
}

LocalBasis read_basis(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw InvalidInput(fmt::format("cannot open basis file '{}'", path.string()));
  }
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic)
  {
    throw InvalidInput(fmt::format("'{}' is not a basis bundle", path.string()));
  }
  if (get<std::uint32_t>(in, path) != kVersion)
  {
    throw InvalidInput(fmt::format("unsupported basis bundle version in '{}'", path.string()));
  }
  LocalBasis b;
  const auto kind = get<std::uint8_t>(in, path);
  if (kind > 1)
  {
    throw InvalidInput(fmt::format("bad space kind in '{}'", path.string()));
  }
  b.space.kind = static_cast<SpaceId::Kind>(kind);
  b.space.i = get<std::int32_t>(in, path);
  b.space.j = get<std::int32_t>(in, path);
  b.content_hash = get<std::uint64_t>(in, path);
  const auto n_support = get<std::uint64_t>(in, path);
  const auto n_vec = get<std::uint64_t>(in, path);
  const auto n_traj = get<std::uint64_t>(in, path);
  constexpr std::uint64_t limit = 1ULL << 32;
  if (n_support > limit || n_vec > limit || n_traj > limit)
  {
    throw InvalidInput(fmt::format("implausible sizes in basis file '{}'", path.string()));
  }
  b.support_edges.resize(n_support);
  for (auto &e : b.support_edges)
  {
    e = get<std::int32_t>(in, path);
  }
  b.trajectory.resize(n_traj);
  for (auto &t : b.trajectory)
  {
    t = get<double>(in, path);
  }
  b.vectors.resize(static_cast<Eigen::Index>(n_support), static_cast<Eigen::Index>(n_vec));
  for (Eigen::Index c = 0; c < b.vectors.cols(); c++)
  {
    for (Eigen::Index r = 0; r < b.vectors.rows(); r++)
    {
      const double re = get<double>(in, path);
      const double im = get<double>(in, path);
      b.vectors(r, c) = Complex(re, im);
    }
  }
  return b;
}

std::filesystem::path basis_path(const std::filesystem::path &dir, const SpaceId &space)
{
  return dir / (space.str() + ".basis");
}

void write_bases(const std::filesystem::path &dir, const std::vector<LocalBasis> &bases)
{
  std::filesystem::create_directories(dir);
  for (const auto &b : bases)
  {
    write_basis(basis_path(dir, b.space), b);
  }
}

std::optional<LocalBasis> try_read_basis(const std::filesystem::path &dir, const SpaceId &space)
{
  const auto path = basis_path(dir, space);
  if (!std::filesystem::exists(path))
  {
    return std::nullopt;
  }
  return read_basis(path);
}

}  // namespace arbilomod
