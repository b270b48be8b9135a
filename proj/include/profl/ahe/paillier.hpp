#pragma once

// Two-trapdoor additively homomorphic encryption (Paillier with g = N + 1).
//
// The gradient-decryption key is split into two additive exponent shares
// s1 + s2 = delta (mod lambda*N), where delta = 0 (mod lambda) and
// delta = 1 (mod N). Raising a ciphertext to delta strips the randomness and
// leaves (1+N)^m, so decryption needs one exponentiation from each server.

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "profl/common/bigint.hpp"
#include "profl/common/random.hpp"

namespace profl::ahe {

/// Opaque label that ties ciphertexts to the key pair that produced them.
struct KeyId {
  std::uint32_t value = 0;
  friend bool operator==(KeyId, KeyId) = default;
};

class KeyMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PublicKey {
  BigInt n;
  BigInt n_squared;
  KeyId id;

  BigInt generator() const { return n + 1; }
  unsigned modulus_bits() const;
  /// Serialized width of one ciphertext (an element of Z_{N^2}).
  std::size_t ciphertext_bytes() const { return byte_width(n_squared); }
  /// Serialized width of one plaintext (an element of Z_N).
  std::size_t plaintext_bytes() const { return byte_width(n); }
};

struct SecretKey {
  BigInt lambda;  // lcm(p-1, q-1)
  BigInt mu;      // lambda^-1 mod N
  BigInt n;
  BigInt n_squared;
  KeyId id;
};

struct SecretKeyShare {
  int index = 0;  // 1 or 2
  BigInt value;
  BigInt n;
  BigInt n_squared;
  KeyId id;
};

struct Ciphertext {
  BigInt value;
  KeyId id;
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// Output of the first decryption stage; only part_dec2 accepts it.
struct PartialCiphertext {
  BigInt value;
  KeyId id;
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

struct KeyGenOptions {
  unsigned modulus_bits = 1024;
  /// Required for modulus_bits below 1024. Never below 256.
  bool insecure_test_mode = false;
  KeyId id{};
};

inline constexpr unsigned kMinTestModulusBits = 256;
inline constexpr unsigned kMinModulusBits = 1024;
inline constexpr int kMillerRabinRounds = 64;

KeyPair keygen(const KeyGenOptions& options, Rng& rng);

/// Splits sk into (share1, share2) with share1 uniform in [1, lambda*N).
std::pair<SecretKeyShare, SecretKeyShare> key_split(const SecretKey& sk, Rng& rng);

/// The CRT value delta: 0 mod lambda, 1 mod N, reduced mod lambda*N.
BigInt split_target(const SecretKey& sk);

/// Public parameters recoverable from a share (N and the key id).
PublicKey public_view(const SecretKeyShare& share);
PublicKey public_view(const SecretKey& sk);

Ciphertext encrypt(const PublicKey& pk, const BigInt& m, Rng& rng);
BigInt full_decrypt(const SecretKey& sk, const Ciphertext& c);

PartialCiphertext part_dec1(const SecretKeyShare& share1, const Ciphertext& c);
/// Caller guarantees `p` was produced from `c`; a mismatched pair decrypts to
/// an unrelated value.
BigInt part_dec2(const SecretKeyShare& share2, const Ciphertext& c, const PartialCiphertext& p);

Ciphertext hom_add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b);
Ciphertext hom_scale(const PublicKey& pk, const Ciphertext& c, const BigInt& a);

/// Probabilistic primality test with `rounds` random Miller-Rabin bases.
bool is_probable_prime(const BigInt& candidate, int rounds, Rng& rng);
BigInt random_prime(unsigned bits, Rng& rng);

}  // namespace profl::ahe
