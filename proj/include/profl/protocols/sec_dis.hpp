#pragma once

// Blinded encrypted squared Euclidean distance between two encrypted
// gradients.
//
// S1 blinds each gradient once per session with a fresh nonzero vector r_i,
// partially decrypts it and ships ([[g_i + r_i]], [g_i + r_i]_sk1) to S2.
// For a pair (x, y) S2 returns dis' = sum_k ((g_x+r_x) - (g_y+r_y))^2 mod N;
// S1 removes the blinding homomorphically with
//   [[t]] = [[g_x]]^{-2r_x} [[-r_x^2]] [[g_x]]^{2r_y} [[g_y]]^{2r_x}
//           [[2 r_x r_y]] [[g_y]]^{-2r_y} [[-r_y^2]]
// accumulated over coordinates, and obtains [[d]] = [[dis']] * prod_k [[t_k]].
// The per-user factors are computed once per session and reused by every
// pair that involves that user.

#include <cstddef>
#include <span>
#include <vector>

#include "profl/protocols/channel.hpp"

namespace profl::protocols {

struct EncryptedDistance {
  ahe::Ciphertext value;
};

class SecDisSession {
 public:
  /// Blinds and uploads every gradient to S2. All gradients must share one
  /// dimension and the channel's key.
  SecDisSession(Channel channel, std::span<const EncryptedVector> gradients);

  /// Runs the S2 reply and S1 unblinding for one unordered pair i != j.
  EncryptedDistance distance(std::size_t i, std::size_t j);

  std::size_t size() const { return gradients_.size(); }
  std::size_t dimension() const { return dimension_; }
  std::size_t evaluations() const { return evaluations_; }

  /// S1-private blinding vector of gradient i (exposed for transcript audits).
  const std::vector<BigInt>& blinding(std::size_t i) const { return s1_state_.blinding.at(i); }

 private:
  struct Server1State {
    std::vector<std::vector<BigInt>> blinding;  // r_i, nonzero entries
    // prod_k [[g_i[k]]]^{-2 r_i[k]} * [[-sum_k r_i[k]^2]]
    std::vector<ahe::Ciphertext> self_terms;
  };
  struct Server2State {
    std::vector<std::vector<BigInt>> blinded;  // g_i + r_i mod N, as seen by S2
  };

  void server2_ingest();
  BigInt server2_pair_sum(std::size_t i, std::size_t j) const;

  Channel channel_;
  std::span<const EncryptedVector> gradients_;
  std::size_t dimension_ = 0;
  std::size_t evaluations_ = 0;
  Server1State s1_state_;
  Server2State s2_state_;
};

/// Single-pair protocol run.
EncryptedDistance sec_dis(Channel channel, const EncryptedVector& gx, const EncryptedVector& gy);

}  // namespace profl::protocols
