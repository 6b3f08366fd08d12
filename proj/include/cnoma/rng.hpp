#pragma once

#include <cstdint>
#include <random>

namespace cnoma {

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t v);

/// Deterministic random stream. Uniform and normal draws are generated from
/// explicit bit manipulation of the mt19937_64 output so that sequences are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }

  /// Standard normal via Box-Muller (second draw cached).
  double normal();

  /// Gamma(shape, scale) by Marsaglia-Tsang rejection; shape boosted below 1.
  double gamma(double shape, double scale);

 private:
  std::mt19937_64 eng_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace cnoma
