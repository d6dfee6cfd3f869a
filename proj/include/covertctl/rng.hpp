// Counter-based 64-bit RNG with deterministic stream derivation.
//
// Each stream is a SplitMix64 sequence: output i is a bijective mix of
// (seed + i * gamma), so a stream is fully determined by its seed word and
// streams derived from distinct (master, tag, index) triples are
// statistically independent. This is what makes serial and parallel
// Monte Carlo runs reproduce each other exactly: trial i always consumes
// the same stream no matter which thread executes it.
#pragma once

#include <cstdint>

#include "covertctl/normal.hpp"

namespace covertctl {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from (master, tag, index).
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t tag,
                                   std::uint64_t index) {
  std::uint64_t h = mix64(master + 0x9E3779B97F4A7C15ULL);
  h = mix64(h ^ (tag + 0x9E3779B97F4A7C15ULL));
  h = mix64(h ^ (index + 0x9E3779B97F4A7C15ULL));
  return h;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return mix64(state_ += 0x9E3779B97F4A7C15ULL); }

  /// Uniform double strictly inside (0, 1); 53 significant bits.
  double next_unit_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform double on [-bound, bound].
  double next_symmetric(double bound) {
    return bound * (2.0 * next_unit_open() - 1.0);
  }

  /// N(0, stddev^2) by inversion of the normal tail function, so one
  /// uniform draw maps to exactly one Gaussian sample.
  double next_gaussian(double stddev) {
    return stddev * q_inverse(next_unit_open());
  }

  /// Uniform integer in [0, n); n >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(next_unit_open() * static_cast<double>(n)) % n;
  }

 private:
  std::uint64_t state_;
};

}  // namespace covertctl
