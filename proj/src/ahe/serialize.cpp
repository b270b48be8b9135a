#include "profl/ahe/serialize.hpp"

#include <stdexcept>

namespace profl::ahe {

void put_u8(Bytes& out, std::uint8_t v) { out.push_back(v); }

void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_length_prefixed(Bytes& out, const BigInt& v) {
  auto bytes = to_bytes(v);
  put_u32(out, static_cast<std::uint32_t>(bytes.size()));
  out.insert(out.end(), bytes.begin(), bytes.end());
}

Bytes serialize(const PublicKey& pk) {
  Bytes out;
  put_u32(out, pk.id.value);
  put_length_prefixed(out, pk.n);
  return out;
}

Bytes serialize(const SecretKey& sk) {
  Bytes out;
  put_u32(out, sk.id.value);
  put_length_prefixed(out, sk.lambda);
  put_length_prefixed(out, sk.mu);
  put_length_prefixed(out, sk.n);
  return out;
}

Bytes serialize(const SecretKeyShare& share) {
  Bytes out;
  put_u32(out, share.id.value);
  put_u8(out, static_cast<std::uint8_t>(share.index));
  put_length_prefixed(out, share.value);
  put_length_prefixed(out, share.n);
  return out;
}

PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  PublicKey pk;
  pk.id = KeyId{in.u32()};
  pk.n = in.length_prefixed();
  pk.n_squared = pk.n * pk.n;
  if (!in.done()) throw std::invalid_argument("public key: trailing bytes");
  return pk;
}

SecretKey deserialize_secret_key(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  SecretKey sk;
  sk.id = KeyId{in.u32()};
  sk.lambda = in.length_prefixed();
  sk.mu = in.length_prefixed();
  sk.n = in.length_prefixed();
  sk.n_squared = sk.n * sk.n;
  if (!in.done()) throw std::invalid_argument("secret key: trailing bytes");
  return sk;
}

SecretKeyShare deserialize_share(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  SecretKeyShare share;
  share.id = KeyId{in.u32()};
  share.index = in.u8();
  if (share.index != 1 && share.index != 2) throw std::invalid_argument("share: bad index");
  share.value = in.length_prefixed();
  share.n = in.length_prefixed();
  share.n_squared = share.n * share.n;
  if (!in.done()) throw std::invalid_argument("share: trailing bytes");
  return share;
}

void put_ciphertext(Bytes& out, const PublicKey& pk, const Ciphertext& c) {
  if (c.id != pk.id) throw KeyMismatch("put_ciphertext: key id mismatch");
  put_fixed(out, c.value, pk.ciphertext_bytes());
}

void put_partial(Bytes& out, const PublicKey& pk, const PartialCiphertext& p) {
  if (p.id != pk.id) throw KeyMismatch("put_partial: key id mismatch");
  put_fixed(out, p.value, pk.ciphertext_bytes());
}

void put_plaintext(Bytes& out, const PublicKey& pk, const BigInt& m) {
  put_fixed(out, m, pk.plaintext_bytes());
}

std::span<const std::uint8_t> Reader::take(std::size_t count) {
  if (count > remaining()) throw std::out_of_range("payload truncated");
  auto part = bytes_.subspan(offset_, count);
  offset_ += count;
  return part;
}

std::uint8_t Reader::u8() { return take(1)[0]; }

std::uint32_t Reader::u32() {
  std::uint32_t v = 0;
  for (auto b : take(4)) v = (v << 8) | b;
  return v;
}

BigInt Reader::length_prefixed() { return get_fixed(take(u32())); }
BigInt Reader::fixed(std::size_t width) { return get_fixed(take(width)); }

Ciphertext Reader::ciphertext(const PublicKey& pk) {
  return Ciphertext{fixed(pk.ciphertext_bytes()), pk.id};
}

PartialCiphertext Reader::partial(const PublicKey& pk) {
  return PartialCiphertext{fixed(pk.ciphertext_bytes()), pk.id};
}

BigInt Reader::plaintext(const PublicKey& pk) { return fixed(pk.plaintext_bytes()); }

}  // namespace profl::ahe
