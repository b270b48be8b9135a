#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "profl/common/random.hpp"
#include "profl/fl/model.hpp"
#include "profl/fl/user.hpp"

namespace profl::fl {

/// Gradient ascent: returns -beta * g.
Vector apply_untargeted(const Vector& g, double beta);

/// Gradient on the user's shard with source labels relabelled as target.
Vector apply_targeted(UserState& user, const Vector& params, ModelShape shape, const TrainOptions& options,
                      LabelFlip flip);

/// What the attacker knows about this round's benign gradients.
struct BenignStats {
  Vector mean;
  Vector sigma;             // per-coordinate population standard deviation
  double max_distance = 0;  // largest pairwise Euclidean distance
};

BenignStats benign_stats(std::span<const Vector> benign);

struct StealthParams {
  std::size_t p = 10;   // spiked coordinates
  double budget = 0.99; // target distance to the benign mean, as a fraction of max_distance
};

struct StealthResult {
  Vector gradient;
  std::vector<std::size_t> spiked;  // ascending
  bool feasible = true;             // false when the base alone uses up the budget
};

/// Spikes `p` random coordinates of `g` away from the benign mean, as far as
/// the distance budget allows. The other coordinates are left alone. When
/// the rest of `g` is already outside the budget the spiked coordinates are
/// set to the benign mean and `feasible` is false. Values are clipped to
/// +-clip_bound. Whenever `feasible` holds the output is strictly closer to
/// the benign mean than max_distance.
StealthResult apply_stealth(const Vector& g, const BenignStats& stats, const StealthParams& params, Rng& rng,
                            double clip_bound = std::numeric_limits<double>::infinity());

}  // namespace profl::fl
