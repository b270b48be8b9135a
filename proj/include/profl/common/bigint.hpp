#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace profl {

using BigInt = mpz_class;

/// Number of bytes needed to hold any value in [0, bound).
std::size_t byte_width(const BigInt& bound);

/// Fixed-width big-endian encoding; throws std::length_error if `value` does
/// not fit in `width` bytes or is negative.
void put_fixed(std::vector<std::uint8_t>& out, const BigInt& value, std::size_t width);
BigInt get_fixed(std::span<const std::uint8_t> in);

/// Minimal big-endian magnitude bytes (empty for zero).
std::vector<std::uint8_t> to_bytes(const BigInt& value);

std::int64_t to_int64(const BigInt& value);
BigInt from_int64(std::int64_t value);

/// Non-negative remainder of `value` modulo `modulus`.
BigInt mod(const BigInt& value, const BigInt& modulus);

}  // namespace profl
