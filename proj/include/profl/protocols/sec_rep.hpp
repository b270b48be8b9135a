#pragma once

// Per-dimension representative: S1 blinds every survivor's coordinate with one
// shared nonzero r, S2 decrypts the blinded values, applies 3-sigma rejection
// and returns the lower median, S1 subtracts r.
//
// S2 works on differences to the first blinded value, reduced to the signed
// range, which equal the differences of the plaintexts whenever the spread is
// below N/2. Rejection and median are shift invariant, so wrap-around of the
// blinded values modulo N does not affect the outcome. Note that the shared r
// reveals pairwise coordinate differences to S2.

#include <cstddef>
#include <span>
#include <vector>

#include "profl/protocols/channel.hpp"

namespace profl::protocols {

struct Representative {
  BigInt median;  // residue mod N of the selected plaintext value
  std::size_t rejected = 0;
};

Representative sec_rep(Channel channel, std::span<const ahe::Ciphertext> values);

/// sec_rep over every dimension of the given gradients.
std::vector<Representative> sec_rep_all(Channel channel, std::span<const EncryptedVector* const> gradients);

}  // namespace profl::protocols
