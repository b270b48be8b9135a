#pragma once

// Fixed-point conversion between real gradients and integers modulo N.
//
// A real x becomes round(x * deg) (ties to even). Negative values use the
// upper half of Z_N: residues >= N/2 decode as residue - N, which is what
// homomorphic negation (scaling by N - 1) produces.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "profl/common/bigint.hpp"

namespace profl::encoding {

inline constexpr std::uint64_t kDefaultDeg = 1'000'000;
inline constexpr double kDefaultClipBound = 10.0;

class HeadroomError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

struct EncodedScalar {
  BigInt value;  // in [0, N)
  std::uint64_t deg = kDefaultDeg;
};

struct EncodedGradient {
  std::vector<BigInt> values;  // residues in [0, N)
  std::uint64_t deg = kDefaultDeg;

  std::size_t size() const { return values.size(); }
};

/// round(x * deg) as a signed integer; throws HeadroomError past 2^62.
std::int64_t to_fixed(double x, std::uint64_t deg);
double from_fixed(std::int64_t v, std::uint64_t deg);

/// Signed integer -> residue in [0, N); throws HeadroomError unless |v| < N/2.
BigInt to_residue(const BigInt& v, const BigInt& n);
BigInt to_residue(std::int64_t v, const BigInt& n);
/// Residue -> signed representative in (-N/2, N/2].
BigInt signed_value(const BigInt& residue, const BigInt& n);

EncodedScalar encode_scalar(double x, std::uint64_t deg, const BigInt& n);
double decode_scalar(const EncodedScalar& e, const BigInt& n);

EncodedGradient encode_vector(std::span<const double> xs, std::uint64_t deg, const BigInt& n);
std::vector<double> decode_vector(const EncodedGradient& g, const BigInt& n);
/// Rejects entries carrying different deg values.
std::vector<double> decode_vector(std::span<const EncodedScalar> entries, const BigInt& n);

/// Fast-path representation: signed fixed-point integers without the modulus.
std::vector<std::int64_t> to_fixed(std::span<const double> xs, std::uint64_t deg);
std::vector<double> from_fixed(std::span<const std::int64_t> vs, std::uint64_t deg);

/// Clamps every coordinate into [-bound, bound].
void clip(std::span<double> xs, double bound);

/// Throws HeadroomError unless dimension * (2 * bound * deg)^2 < N / 2, the
/// condition under which squared-distance accumulation never wraps.
void check_distance_headroom(std::size_t dimension, double bound, std::uint64_t deg,
                             std::size_t users, const BigInt& n);

}  // namespace profl::encoding
