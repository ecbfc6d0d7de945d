#pragma once

#include <cstdint>
#include <random>

#include "conch/sexpr.hpp"

namespace conch {

/// Deterministic random source.
///
/// The engine is `std::mt19937_64`, whose output sequence is fixed by the
/// C++ standard. Independent streams are seeded through `std::seed_seq`
/// (also fully specified) from the pair (seed, stream index), so sample `i`
/// of a run draws the same numbers no matter which thread computes it or in
/// which order. Distributions are implemented here rather than with the
/// `std::*_distribution` templates, whose algorithms vary between standard
/// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Stream `index` of the family identified by `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform on {0, ..., n-1}; n must be at least 1.
  std::uint64_t below(std::uint64_t n);
  /// Uniform on {0, ..., n-1} for arbitrary-precision n >= 1.
  Integer below(const Integer& n);
  /// Gaussian draw by Box-Muller; always consumes two uniforms.
  double normal(double mean, double stdev);
  /// True with probability p.
  bool flip(double p);

 private:
  explicit Rng(std::seed_seq& seq);

  std::mt19937_64 engine_;
};

}  // namespace conch
