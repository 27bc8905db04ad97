#pragma once

// Platform-stable randomness. The standard distributions and std::shuffle are
// implementation-defined, so every draw in the library goes through Rng below:
// a std::mt19937_64 engine (fully specified by the standard) plus our own
// bounded-integer and shuffle routines.

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace lexpalo {

/// SplitMix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a over the UTF-8 bytes.
constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Seed of the i-th repeated run under a master seed (counter scheme).
constexpr std::uint64_t run_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) + index);
}

/// Seed for one stratum (palo) of a split.
constexpr std::uint64_t stratum_seed(std::uint64_t seed, std::string_view palo) noexcept {
  return splitmix64(seed ^ fnv1a64(palo));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be > 0. Rejection sampling, no modulo bias.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Fisher-Yates, back to front.
  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lexpalo
