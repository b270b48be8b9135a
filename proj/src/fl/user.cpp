#include "profl/fl/user.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace profl::fl {

UserState::UserState(std::uint32_t id_, Behavior behavior_, bool stealth_, Dataset shard_, Rng rng_)
    : id(id_), behavior(behavior_), stealth(stealth_), shard(std::move(shard_)), rng(rng_) {
  if (shard.size() == 0) throw std::invalid_argument("user: empty shard");
  order_.resize(shard.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::shuffle(order_.begin(), order_.end(), rng);
}

std::vector<std::size_t> UserState::next_batch(std::size_t batch) {
  batch = std::min(batch, order_.size());
  if (cursor_ + batch > order_.size()) {
    std::shuffle(order_.begin(), order_.end(), rng);
    cursor_ = 0;
  }
  std::vector<std::size_t> out(order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                               order_.begin() + static_cast<std::ptrdiff_t>(cursor_ + batch));
  cursor_ += batch;
  return out;
}

Vector local_train(UserState& user, const Vector& params, ModelShape shape, const TrainOptions& options,
                   std::optional<LabelFlip> flip) {
  if (options.batch == 0 || options.local_batches == 0) throw std::invalid_argument("local_train: empty schedule");
  if (user.momentum.size() == 0) user.momentum = Vector::Zero(params.size());

  Vector total = Vector::Zero(params.size());
  for (std::uint32_t e = 0; e < options.local_batches; ++e) {
    const auto rows = user.next_batch(options.batch);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), user.shard.features.cols());
    std::vector<int> labels(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      x.row(static_cast<Eigen::Index>(r)) = user.shard.features.row(static_cast<Eigen::Index>(rows[r]));
      labels[r] = user.shard.labels[rows[r]];
      if (flip && labels[r] == flip->source) labels[r] = flip->target;
    }
    user.momentum = options.momentum * user.momentum + gradient(params, shape, x, labels);
    total += user.momentum;
  }
  return total;
}

}  // namespace profl::fl
