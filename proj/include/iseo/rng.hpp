/**
 * @file rng.hpp
 * @brief Named random streams derived from a single master seed.
 */

#ifndef ISEO_RNG_HPP
#define ISEO_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace iseo {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Independent generator for (seed, stream-name); re-seedable per component.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::string_view name) {
  return std::mt19937_64(splitmix64(seed ^ fnv1a(name)));
}

}  // namespace iseo

#endif  // ISEO_RNG_HPP
