#pragma once

#include <cstdint>
#include <random>

namespace nnsr {

/// Deterministic random source: std::mt19937_64 (output sequence pinned by
/// the C++ standard) with hand-rolled variate transforms, so that identical
/// seeds give identical streams on every platform. std::*_distribution is
/// deliberately avoided (its algorithms are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller on the uniform stream (pairs cached).
  double normal();

  /// Uniform integer in [0, n), unbiased (rejection sampling). n >= 1.
  std::uint64_t below(std::uint64_t n);

  bool coin() { return (next_u64() >> 63) != 0; }

  /// Substream derivation: splitmix64 finalizer over seed + tag * golden
  /// ratio increment. Used to decorrelate per-purpose and per-(cell, repeat)
  /// streams derived from one base seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nnsr
