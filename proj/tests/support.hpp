#pragma once

#include <cstdint>
#include <vector>

#include "profl/ahe/paillier.hpp"
#include "profl/encoding/fixed_point.hpp"
#include "profl/protocols/channel.hpp"
#include "profl/transport/fabric.hpp"

namespace profl::testing {

/// Gradient key pair, its two shares and a fabric wired into a Channel.
struct TwoServers {
  explicit TwoServers(std::uint64_t seed = 101, std::uint32_t users = 2, bool transcript = false)
      : rng(seed),
        keys(ahe::keygen(ahe::KeyGenOptions{256, true, ahe::KeyId{2}}, rng)),
        shares(ahe::key_split(keys.sk, rng)),
        s1_rng(rng.derive(1)),
        fabric(users, transcript) {}

  protocols::Channel channel() {
    return protocols::Channel{fabric, protocols::Server1{keys.pk, shares.first, s1_rng},
                              protocols::Server2{shares.second}};
  }

  protocols::EncryptedVector encrypt(const std::vector<std::int64_t>& values) {
    protocols::EncryptedVector out;
    for (auto v : values) out.push_back(ahe::encrypt(keys.pk, encoding::to_residue(v, keys.pk.n), rng));
    return out;
  }

  std::int64_t decrypt_signed(const ahe::Ciphertext& c) const {
    return to_int64(encoding::signed_value(ahe::full_decrypt(keys.sk, c), keys.pk.n));
  }

  Rng rng;
  ahe::KeyPair keys;
  std::pair<ahe::SecretKeyShare, ahe::SecretKeyShare> shares;
  Rng s1_rng;
  transport::Fabric fabric;
};

inline std::vector<std::int64_t> random_fixed(Rng& rng, std::size_t m, std::int64_t bound) {
  std::vector<std::int64_t> v(m);
  for (auto& x : v) x = static_cast<std::int64_t>(rng.index_below(static_cast<std::size_t>(2 * bound + 1))) - bound;
  return v;
}

inline std::int64_t squared_distance(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::int64_t d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
  return d;
}

}  // namespace profl::testing
