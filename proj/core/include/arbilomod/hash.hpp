// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_HASH_HPP
#define ARBILOMOD_HASH_HPP

#include <cstdint>
#include <cstring>
#include <string_view>
#include <type_traits>

namespace arbilomod
{

// 64-bit FNV-1a, stable across runs and platforms with the same endianness.
class ContentHasher
{
public:
  void bytes(const void *data, std::size_t n)
  {
    const auto *p = static_cast<const unsigned char *>(data);
    for (std::size_t k = 0; k < n; k++)
    {
      state_ ^= p[k];
      state_ *= 0x100000001b3ULL;
    }
  }

  template <typename T>
    requires std::is_arithmetic_v<T>
  ContentHasher &add(T value)
  {
    bytes(&value, sizeof(T));
    return *this;
  }

  ContentHasher &add(std::string_view s)
  {
    add<std::uint64_t>(s.size());
    bytes(s.data(), s.size());
    return *this;
  }

  std::uint64_t value() const { return state_; }

private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

// splitmix64 finaliser, used to derive independent RNG streams.
inline std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace arbilomod

#endif  // ARBILOMOD_HASH_HPP
