#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "profl/protocols/channel.hpp"

namespace profl::protocols {

struct Selection {
  std::vector<std::size_t> selected;  // ascending indices of the k smallest sums
  std::vector<BigInt> sums;           // jointly decrypted sums, visible to both servers
};

/// Joint two-stage decryption of the distance sums followed by randomized
/// selection of the k smallest at S1 (ties to the lower index).
Selection sec_sel(Channel channel, std::span<const ahe::Ciphertext> sums, std::size_t k);

}  // namespace profl::protocols
