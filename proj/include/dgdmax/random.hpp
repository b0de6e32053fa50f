#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace dgdmax {

// SplitMix64 (Steele, Lea, Flood 2014). The state advances by the golden
// gamma 0x9E3779B97F4A7C15 and each output is the standard mix13 finalizer.
// Every stochastic component of the library draws from this generator so
// that golden values can be reproduced in any language.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Plain modulo reduction.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  // Standard normal via Box-Muller; consumes two draws per call.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

// FNV-1a 64-bit hash.
constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Named sub-seed: one SplitMix64 output of (global ^ fnv1a64(name)).
inline std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view name) {
  return SplitMix64(global_seed ^ fnv1a64(name)).next();
}

}  // namespace dgdmax
