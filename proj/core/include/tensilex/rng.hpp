#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace tensilex::rng {

/// All randomness runs through std::mt19937_64, whose output sequence is fixed
/// by the standard. Index draws and shuffles are implemented here rather than
/// with <random> distributions, whose algorithms are implementation-defined.
using Engine = std::mt19937_64;

/// SplitMix64 finaliser; derives independent stream seeds from a base seed.
constexpr std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return mix(base ^ mix(stream));
}

/// Uniform integer in [0, n) by rejection sampling. n must be positive.
inline std::uint64_t uniform_index(Engine& engine, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  std::uint64_t v = engine();
  while (v > limit) v = engine();
  return v % n;
}

/// Fisher-Yates, swapping each position i (from the back) with a draw in [0, i].
template <typename T>
void shuffle(std::span<T> items, Engine& engine) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(engine, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace tensilex::rng
