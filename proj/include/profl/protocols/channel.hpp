#pragma once

#include <vector>

#include "profl/ahe/paillier.hpp"
#include "profl/common/random.hpp"
#include "profl/transport/fabric.hpp"

namespace profl::protocols {

using EncryptedVector = std::vector<ahe::Ciphertext>;

/// What S1 holds: the gradient public key, its decryption share and its own
/// randomness (blinding values, pivots).
struct Server1 {
  const ahe::PublicKey& pk;
  const ahe::SecretKeyShare& share;
  Rng& rng;
};

struct Server2 {
  const ahe::SecretKeyShare& share;
};

/// The two servers and the fabric they talk over. Both roles run in the
/// calling thread; every value crossing between them goes through `fabric`.
struct Channel {
  transport::Fabric& fabric;
  Server1 s1;
  Server2 s2;
};

}  // namespace profl::protocols
