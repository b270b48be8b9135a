#include "profl/ahe/paillier.hpp"

#include <array>
#include <string>

namespace profl::ahe {
namespace {

BigInt powm(const BigInt& base, const BigInt& exp, const BigInt& modulus) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

BigInt invert(const BigInt& a, const BigInt& modulus) {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0)
    throw std::domain_error("value is not invertible");
  return r;
}

// L(u) = (u - 1) / N
BigInt l_function(const BigInt& u, const BigInt& n) {
  BigInt r = u - 1;
  mpz_fdiv_q(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
  return r;
}

void require_same_key(KeyId expected, KeyId actual, const char* what) {
  if (expected != actual)
    throw KeyMismatch(std::string(what) + ": key id " + std::to_string(actual.value) +
                      " does not match " + std::to_string(expected.value));
}

void require_group_element(const BigInt& value, const BigInt& n, const BigInt& n_squared) {
  if (sgn(value) <= 0 || value >= n_squared)
    throw std::domain_error("ciphertext value outside [1, N^2)");
  if (gcd(value, n) != 1) throw std::domain_error("ciphertext value not coprime to N");
}

constexpr std::array<unsigned, 54> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,
    67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

}  // namespace

unsigned PublicKey::modulus_bits() const {
  return static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2));
}

bool is_probable_prime(const BigInt& candidate, int rounds, Rng& rng) {
  if (candidate < 2) return false;
  for (unsigned p : kSmallPrimes) {
    if (candidate == p) return true;
    if (mpz_divisible_ui_p(candidate.get_mpz_t(), p)) return false;
  }
  // candidate - 1 = d * 2^s with d odd
  const BigInt minus_one = candidate - 1;
  BigInt d = minus_one;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  const BigInt base_range = candidate - 3;  // bases drawn from [2, candidate - 2]
  for (int round = 0; round < rounds; ++round) {
    BigInt a = rng.below(base_range) + 2;
    BigInt x = powm(a, d, candidate);
    if (x == 1 || x == minus_one) continue;
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      x = x * x % candidate;
      if (x == minus_one) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

BigInt random_prime(unsigned bits, Rng& rng) {
  if (bits < 16) throw std::invalid_argument("random_prime: too few bits");
  for (;;) {
    BigInt candidate = rng.random_bits(bits);
    // top two bits set so that a product of two such primes has exactly 2*bits bits
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (is_probable_prime(candidate, kMillerRabinRounds, rng)) return candidate;
  }
}

KeyPair keygen(const KeyGenOptions& options, Rng& rng) {
  const unsigned bits = options.modulus_bits;
  if (bits < kMinTestModulusBits)
    throw std::invalid_argument("keygen: modulus below " + std::to_string(kMinTestModulusBits) +
                                " bits is rejected");
  if (bits % 2 != 0) throw std::invalid_argument("keygen: modulus bit length must be even");
  if (bits < kMinModulusBits && !options.insecure_test_mode)
    throw std::invalid_argument("keygen: modulus below " + std::to_string(kMinModulusBits) +
                                " bits requires insecure_test_mode");

  for (;;) {
    const BigInt p = random_prime(bits / 2, rng);
    const BigInt q = random_prime(bits / 2, rng);
    if (p == q) continue;
    const BigInt n = p * q;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) != bits) continue;
    const BigInt lambda = lcm(BigInt(p - 1), BigInt(q - 1));
    if (gcd(lambda, n) != 1) continue;

    KeyPair keys;
    keys.pk.n = n;
    keys.pk.n_squared = n * n;
    keys.pk.id = options.id;
    keys.sk.lambda = lambda;
    // with g = N + 1, L(g^lambda mod N^2) = lambda mod N
    keys.sk.mu = invert(lambda % n, n);
    keys.sk.n = n;
    keys.sk.n_squared = keys.pk.n_squared;
    keys.sk.id = options.id;
    return keys;
  }
}

BigInt split_target(const SecretKey& sk) {
  // delta = lambda * (lambda^-1 mod N): 0 mod lambda and 1 mod N
  const BigInt modulus = sk.lambda * sk.n;
  return mod(sk.lambda * invert(sk.lambda % sk.n, sk.n), modulus);
}

std::pair<SecretKeyShare, SecretKeyShare> key_split(const SecretKey& sk, Rng& rng) {
  if (sgn(sk.lambda) <= 0 || sgn(sk.n) <= 0) throw std::invalid_argument("key_split: invalid key");
  const BigInt modulus = sk.lambda * sk.n;
  const BigInt delta = split_target(sk);
  SecretKeyShare first{1, rng.nonzero_below(modulus), sk.n, sk.n_squared, sk.id};
  SecretKeyShare second{2, mod(delta - first.value, modulus), sk.n, sk.n_squared, sk.id};
  return {std::move(first), std::move(second)};
}

PublicKey public_view(const SecretKeyShare& share) {
  return PublicKey{share.n, share.n_squared, share.id};
}

PublicKey public_view(const SecretKey& sk) { return PublicKey{sk.n, sk.n_squared, sk.id}; }

Ciphertext encrypt(const PublicKey& pk, const BigInt& m, Rng& rng) {
  if (sgn(m) < 0 || m >= pk.n) throw std::out_of_range("encrypt: plaintext outside [0, N)");
  BigInt r;
  do {
    r = rng.nonzero_below(pk.n);
  } while (gcd(r, pk.n) != 1);
  // (1 + N)^m = 1 + m*N (mod N^2)
  BigInt gm = (1 + m * pk.n) % pk.n_squared;
  return Ciphertext{gm * powm(r, pk.n, pk.n_squared) % pk.n_squared, pk.id};
}

BigInt full_decrypt(const SecretKey& sk, const Ciphertext& c) {
  require_same_key(sk.id, c.id, "full_decrypt");
  require_group_element(c.value, sk.n, sk.n_squared);
  return l_function(powm(c.value, sk.lambda, sk.n_squared), sk.n) * sk.mu % sk.n;
}

PartialCiphertext part_dec1(const SecretKeyShare& share1, const Ciphertext& c) {
  if (share1.index != 1) throw std::invalid_argument("part_dec1: requires share index 1");
  require_same_key(share1.id, c.id, "part_dec1");
  require_group_element(c.value, share1.n, share1.n_squared);
  return PartialCiphertext{powm(c.value, share1.value, share1.n_squared), c.id};
}

BigInt part_dec2(const SecretKeyShare& share2, const Ciphertext& c, const PartialCiphertext& p) {
  if (share2.index != 2) throw std::invalid_argument("part_dec2: requires share index 2");
  require_same_key(share2.id, c.id, "part_dec2");
  require_same_key(share2.id, p.id, "part_dec2");
  require_group_element(c.value, share2.n, share2.n_squared);
  const BigInt combined = powm(c.value, share2.value, share2.n_squared) * p.value % share2.n_squared;
  return mod(l_function(combined, share2.n), share2.n);
}

Ciphertext hom_add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  require_same_key(pk.id, a.id, "hom_add");
  require_same_key(pk.id, b.id, "hom_add");
  return Ciphertext{a.value * b.value % pk.n_squared, pk.id};
}

Ciphertext hom_scale(const PublicKey& pk, const Ciphertext& c, const BigInt& a) {
  require_same_key(pk.id, c.id, "hom_scale");
  if (sgn(a) < 0 || a >= pk.n) throw std::out_of_range("hom_scale: scalar outside [0, N)");
  return Ciphertext{powm(c.value, a, pk.n_squared), pk.id};
}

}  // namespace profl::ahe
