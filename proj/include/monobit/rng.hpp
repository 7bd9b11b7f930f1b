#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace monobit {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Seed of an independent stream identified by (master, indices..., role).
/// The mapping is a pure function, so streams do not depend on the order in
/// which work units are scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices,
                                    std::string_view role) {
  std::uint64_t h = splitmix64(master ^ fnv1a(role));
  for (std::uint64_t i : indices) h = splitmix64(h ^ splitmix64(i + 0x632BE59BD9B4E019ull));
  return h;
}

}  // namespace monobit
