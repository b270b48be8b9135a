#include "profl/fl/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace profl::fl {

Vector apply_untargeted(const Vector& g, double beta) { return -beta * g; }

Vector apply_targeted(UserState& user, const Vector& params, ModelShape shape, const TrainOptions& options,
                      LabelFlip flip) {
  if (flip.source == flip.target) throw std::invalid_argument("apply_targeted: source equals target");
  return local_train(user, params, shape, options, flip);
}

BenignStats benign_stats(std::span<const Vector> benign) {
  if (benign.empty()) throw std::invalid_argument("benign_stats: no benign gradients");
  const Eigen::Index m = benign.front().size();
  BenignStats out;
  out.mean = Vector::Zero(m);
  for (const auto& g : benign) {
    if (g.size() != m) throw std::invalid_argument("benign_stats: dimension mismatch");
    out.mean += g;
  }
  out.mean /= static_cast<double>(benign.size());

  out.sigma = Vector::Zero(m);
  for (const auto& g : benign) out.sigma.array() += (g - out.mean).array().square();
  out.sigma = (out.sigma / static_cast<double>(benign.size())).cwiseSqrt();

  for (std::size_t i = 0; i < benign.size(); ++i)
    for (std::size_t j = i + 1; j < benign.size(); ++j)
      out.max_distance = std::max(out.max_distance, (benign[i] - benign[j]).norm());
  return out;
}

StealthResult apply_stealth(const Vector& g, const BenignStats& stats, const StealthParams& params, Rng& rng,
                            double clip_bound) {
  const auto m = static_cast<std::size_t>(g.size());
  if (static_cast<std::size_t>(stats.mean.size()) != m) throw std::invalid_argument("apply_stealth: dimension");
  if (params.p > m) throw std::invalid_argument("apply_stealth: more spikes than coordinates");
  if (!(params.budget > 0 && params.budget < 1)) throw std::invalid_argument("apply_stealth: budget outside (0, 1)");

  StealthResult out{g, {}, true};
  std::vector<std::size_t> all(m);
  std::iota(all.begin(), all.end(), 0);
  std::sample(all.begin(), all.end(), std::back_inserter(out.spiked), params.p, rng);

  const Vector offset = g - stats.mean;
  double base = offset.squaredNorm();
  for (auto k : out.spiked) base -= offset[static_cast<Eigen::Index>(k)] * offset[static_cast<Eigen::Index>(k)];
  const double target = std::pow(params.budget * stats.max_distance, 2);

  const double room = target - base;
  out.feasible = room > 0;
  const double delta = out.feasible && params.p > 0 ? std::sqrt(room / static_cast<double>(params.p)) : 0.0;
  for (auto k : out.spiked) {
    const auto e = static_cast<Eigen::Index>(k);
    const double sign = offset[e] < 0 ? -1.0 : 1.0;
    out.gradient[e] = std::clamp(stats.mean[e] + sign * delta, -clip_bound, clip_bound);
  }
  out.gradient = out.gradient.cwiseMax(-clip_bound).cwiseMin(clip_bound);

  if (out.feasible && !((out.gradient - stats.mean).norm() < stats.max_distance))
    throw std::logic_error("apply_stealth: output left the benign distance envelope");
  return out;
}

}  // namespace profl::fl
