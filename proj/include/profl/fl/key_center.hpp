#pragma once

#include <vector>

#include "profl/ahe/paillier.hpp"
#include "profl/common/random.hpp"
#include "profl/transport/fabric.hpp"

namespace profl::fl {

inline constexpr ahe::KeyId kModelKey{1};
inline constexpr ahe::KeyId kGradientKey{2};

struct Server1Keys {
  ahe::PublicKey pk_m;
  ahe::PublicKey pk_g;
  ahe::SecretKeyShare share;
};

struct Server2Keys {
  ahe::SecretKeyShare share;
};

struct UserKeys {
  ahe::PublicKey pk_g;
  ahe::SecretKey sk_m;
};

/// Key material as each party holds it after parsing its own message.
struct DistributedKeys {
  Server1Keys s1;
  Server2Keys s2;
  std::vector<UserKeys> users;
};

/// Generates (pk_m, sk_m) and (pk_g, sk_g), splits sk_g, and delivers one
/// KeyDistribution message to each of S1, S2 and the users. sk_g itself
/// never leaves the key center.
DistributedKeys key_center_init(transport::Fabric& fabric, unsigned modulus_bits, bool insecure_test_mode, Rng& rng);

}  // namespace profl::fl
