#include "profl/encoding/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace profl::encoding {
namespace {

BigInt half(const BigInt& n) { return n / 2; }

BigInt round_scaled(double x, std::uint64_t deg) {
  if (!std::isfinite(x)) throw std::invalid_argument("encode: non-finite value");
  if (deg == 0) throw std::invalid_argument("encode: deg must be positive");
  // nearbyint honours the default round-to-nearest-even mode
  const double scaled = std::nearbyint(x * static_cast<double>(deg));
  return BigInt(scaled);  // exact: scaled is integral
}

}  // namespace

std::int64_t to_fixed(double x, std::uint64_t deg) {
  const BigInt v = round_scaled(x, deg);
  if (abs(v) >= BigInt(1) << 62) throw HeadroomError("to_fixed: |x * deg| exceeds 2^62");
  return to_int64(v);
}

double from_fixed(std::int64_t v, std::uint64_t deg) {
  return static_cast<double>(v) / static_cast<double>(deg);
}

BigInt to_residue(const BigInt& v, const BigInt& n) {
  if (abs(v) * 2 >= n) throw HeadroomError("encode: |x * deg| must stay below N/2");
  return mod(v, n);
}

BigInt to_residue(std::int64_t v, const BigInt& n) { return to_residue(from_int64(v), n); }

BigInt signed_value(const BigInt& residue, const BigInt& n) {
  return residue > half(n) ? BigInt(residue - n) : residue;
}

EncodedScalar encode_scalar(double x, std::uint64_t deg, const BigInt& n) {
  return EncodedScalar{to_residue(round_scaled(x, deg), n), deg};
}

double decode_scalar(const EncodedScalar& e, const BigInt& n) {
  if (sgn(e.value) < 0 || e.value >= n) throw std::out_of_range("decode: residue outside [0, N)");
  // values in the upper half are negative
  const BigInt v = e.value * 2 >= n ? BigInt(e.value - n) : e.value;
  return v.get_d() / static_cast<double>(e.deg);
}

EncodedGradient encode_vector(std::span<const double> xs, std::uint64_t deg, const BigInt& n) {
  EncodedGradient g;
  g.deg = deg;
  g.values.reserve(xs.size());
  for (double x : xs) g.values.push_back(encode_scalar(x, deg, n).value);
  return g;
}

std::vector<double> decode_vector(const EncodedGradient& g, const BigInt& n) {
  std::vector<double> out;
  out.reserve(g.values.size());
  for (const auto& v : g.values) out.push_back(decode_scalar(EncodedScalar{v, g.deg}, n));
  return out;
}

std::vector<double> decode_vector(std::span<const EncodedScalar> entries, const BigInt& n) {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.deg != entries.front().deg) throw std::invalid_argument("decode_vector: mixed deg values");
    out.push_back(decode_scalar(e, n));
  }
  return out;
}

std::vector<std::int64_t> to_fixed(std::span<const double> xs, std::uint64_t deg) {
  std::vector<std::int64_t> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(to_fixed(x, deg));
  return out;
}

std::vector<double> from_fixed(std::span<const std::int64_t> vs, std::uint64_t deg) {
  std::vector<double> out;
  out.reserve(vs.size());
  for (auto v : vs) out.push_back(from_fixed(v, deg));
  return out;
}

void clip(std::span<double> xs, double bound) {
  for (double& x : xs) x = std::clamp(x, -bound, bound);
}

void check_distance_headroom(std::size_t dimension, double bound, std::uint64_t deg,
                             std::size_t users, const BigInt& n) {
  // worst case per coordinate difference is 2 * bound * deg; the distance sums
  // of Multi-Krum add up (users - 1) such distances
  const BigInt span_per_coordinate = BigInt(std::ceil(2.0 * bound * static_cast<double>(deg)));
  const BigInt worst = BigInt(static_cast<unsigned long>(dimension)) * span_per_coordinate *
                       span_per_coordinate * BigInt(static_cast<unsigned long>(std::max<std::size_t>(users, 2) - 1));
  if (worst * 2 >= n)
    throw HeadroomError("distance accumulation would exceed N/2 (dimension " + std::to_string(dimension) +
                        ", bound " + std::to_string(bound) + ", deg " + std::to_string(deg) + ")");
}

}  // namespace profl::encoding
