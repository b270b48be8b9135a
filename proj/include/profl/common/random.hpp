#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "profl/common/bigint.hpp"

namespace profl {

/// Seeded randomness source shared by the crypto layer and the simulator.
///
/// Every run derives all of its randomness from one experiment seed through
/// `derive`, so identical seeds give identical keys, blinding values, shards
/// and attack realizations. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }

  /// Independent child stream; stable for a given (seed, stream) pair.
  Rng derive(std::uint64_t stream) const;

  /// Uniform in [0, bound). bound must be positive.
  BigInt below(const BigInt& bound);
  /// Uniform in [1, bound).
  BigInt nonzero_below(const BigInt& bound);
  /// Uniform integer with exactly `bits` random bits (top bit may be zero).
  BigInt random_bits(unsigned bits);

  std::size_t index_below(std::size_t bound);
  double uniform();
  double normal(double mean = 0.0, double stddev = 1.0);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace profl
