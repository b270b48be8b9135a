#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "profl/common/random.hpp"
#include "profl/fl/dataset.hpp"
#include "profl/fl/model.hpp"

namespace profl::fl {

enum class Behavior { Benign, Untargeted, Targeted };

struct TrainOptions {
  std::size_t batch = 256;
  double momentum = 0.5;
  std::uint32_t local_batches = 1;  // E mini-batches summed per round
};

struct LabelFlip {
  int source = 0;
  int target = 6;
};

struct UserState {
  UserState(std::uint32_t id, Behavior behavior, bool stealth, Dataset shard, Rng rng);

  std::uint32_t id;
  Behavior behavior;
  bool stealth;
  Dataset shard;
  Vector momentum;  // empty until the first round
  Rng rng;

  /// Next mini-batch of shard rows; reshuffles after each pass.
  std::vector<std::size_t> next_batch(std::size_t batch);

 private:
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

/// Sum over `local_batches` mini-batches of the momentum-smoothed
/// cross-entropy gradient. With `flip`, source labels train as target.
Vector local_train(UserState& user, const Vector& params, ModelShape shape, const TrainOptions& options,
                   std::optional<LabelFlip> flip = std::nullopt);

}  // namespace profl::fl
