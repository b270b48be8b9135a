#pragma once

// Wire encodings for keys and ciphertexts. See docs/wire-format.md.

#include <cstdint>
#include <span>
#include <vector>

#include "profl/ahe/paillier.hpp"

namespace profl::ahe {

using Bytes = std::vector<std::uint8_t>;

Bytes serialize(const PublicKey& pk);
Bytes serialize(const SecretKey& sk);
Bytes serialize(const SecretKeyShare& share);

PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes);
SecretKey deserialize_secret_key(std::span<const std::uint8_t> bytes);
SecretKeyShare deserialize_share(std::span<const std::uint8_t> bytes);

/// Appends the fixed-width (ciphertext_bytes) big-endian value.
void put_ciphertext(Bytes& out, const PublicKey& pk, const Ciphertext& c);
void put_partial(Bytes& out, const PublicKey& pk, const PartialCiphertext& p);
/// Appends a Z_N element at plaintext_bytes width.
void put_plaintext(Bytes& out, const PublicKey& pk, const BigInt& m);

/// Sequential reader over a payload; throws std::out_of_range on truncation.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8();
  std::uint32_t u32();
  BigInt length_prefixed();
  BigInt fixed(std::size_t width);
  Ciphertext ciphertext(const PublicKey& pk);
  PartialCiphertext partial(const PublicKey& pk);
  BigInt plaintext(const PublicKey& pk);

  bool done() const { return offset_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - offset_; }

 private:
  std::span<const std::uint8_t> take(std::size_t count);

  std::span<const std::uint8_t> bytes_;
  std::size_t offset_ = 0;
};

void put_u8(Bytes& out, std::uint8_t v);
void put_u32(Bytes& out, std::uint32_t v);
void put_length_prefixed(Bytes& out, const BigInt& v);

}  // namespace profl::ahe
