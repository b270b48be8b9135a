#include "profl/common/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace profl {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over the combined words
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng Rng::derive(std::uint64_t stream) const { return Rng(mix_seed(seed_, stream)); }

BigInt Rng::random_bits(unsigned bits) {
  BigInt value = 0;
  unsigned filled = 0;
  while (filled < bits) {
    unsigned take = std::min(64u, bits - filled);
    std::uint64_t word = engine_();
    if (take < 64) word &= (std::uint64_t{1} << take) - 1;
    value <<= take;
    mpz_class part;
    mpz_import(part.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
    value += part;
    filled += take;
  }
  return value;
}

BigInt Rng::below(const BigInt& bound) {
  if (sgn(bound) <= 0) throw std::invalid_argument("Rng::below: bound must be positive");
  unsigned bits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  for (;;) {
    BigInt candidate = random_bits(bits);
    if (candidate < bound) return candidate;
  }
}

BigInt Rng::nonzero_below(const BigInt& bound) {
  if (bound <= 1) throw std::invalid_argument("Rng::nonzero_below: bound must exceed 1");
  for (;;) {
    BigInt candidate = below(bound);
    if (sgn(candidate) != 0) return candidate;
  }
}

std::size_t Rng::index_below(std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::index_below: empty range");
  // rejection sampling keeps the result unbiased and independent of the stdlib
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    std::uint64_t word = engine_();
    if (word < limit) return static_cast<std::size_t>(word % bound);
  }
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal(double mean, double stddev) {
  // Box-Muller; avoids implementation-defined std::normal_distribution output
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace profl
