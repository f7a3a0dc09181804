// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_BASIS_IO_HPP
#define ARBILOMOD_BASIS_IO_HPP

#include <filesystem>
#include <optional>
#include <vector>

#include "arbilomod/training.hpp"

namespace arbilomod
{

// Little-endian binary bundle, one file per space:
//   "ALMB" | u32 version | u8 kind | i32 i | i32 j | u64 content hash |
//   u64 support | u64 size | u64 trajectory length |
//   i32 support edges[support] | f64 trajectory[...] |
//   f64 (re, im) vectors, column-major [support x size]
void write_basis(const std::filesystem::path &path, const LocalBasis &basis);
LocalBasis read_basis(const std::filesystem::path &path);

// <dir>/<space>.basis
std::filesystem::path basis_path(const std::filesystem::path &dir, const SpaceId &space);

void write_bases(const std::filesystem::path &dir, const std::vector<LocalBasis> &bases);
// Missing files give std::nullopt; malformed files throw.
std::optional<LocalBasis> try_read_basis(const std::filesystem::path &dir, const SpaceId &space);

}  // namespace arbilomod

#endif  // ARBILOMOD_BASIS_IO_HPP
