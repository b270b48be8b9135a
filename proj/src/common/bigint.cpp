#include "profl/common/bigint.hpp"

#include <limits>
#include <stdexcept>

namespace profl {

std::size_t byte_width(const BigInt& bound) {
  if (bound <= 1) return 1;
  BigInt max_value = bound - 1;
  return (mpz_sizeinbase(max_value.get_mpz_t(), 2) + 7) / 8;
}

std::vector<std::uint8_t> to_bytes(const BigInt& value) {
  if (sgn(value) < 0) throw std::domain_error("to_bytes: negative value");
  if (sgn(value) == 0) return {};
  std::size_t count = 0;
  std::vector<std::uint8_t> bytes((mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8);
  mpz_export(bytes.data(), &count, 1, 1, 1, 0, value.get_mpz_t());
  bytes.resize(count);
  return bytes;
}

void put_fixed(std::vector<std::uint8_t>& out, const BigInt& value, std::size_t width) {
  auto bytes = to_bytes(value);
  if (bytes.size() > width) throw std::length_error("put_fixed: value wider than field");
  out.insert(out.end(), width - bytes.size(), 0);
  out.insert(out.end(), bytes.begin(), bytes.end());
}

BigInt get_fixed(std::span<const std::uint8_t> in) {
  BigInt value;
  if (!in.empty()) mpz_import(value.get_mpz_t(), in.size(), 1, 1, 1, 0, in.data());
  return value;
}

std::int64_t to_int64(const BigInt& value) {
  if (!mpz_fits_slong_p(value.get_mpz_t())) throw std::overflow_error("to_int64: value out of range");
  static_assert(sizeof(long) == sizeof(std::int64_t));
  return value.get_si();
}

BigInt from_int64(std::int64_t value) {
  return BigInt(static_cast<long>(value));
}

BigInt mod(const BigInt& value, const BigInt& modulus) {
  BigInt r;
  mpz_mod(r.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

}  // namespace profl
