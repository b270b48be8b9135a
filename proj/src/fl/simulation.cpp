#include "profl/fl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "profl/ahe/serialize.hpp"
#include "profl/encoding/fixed_point.hpp"

namespace profl::fl {
namespace {

using transport::Message;
using transport::PartyId;
using transport::Phase;

// Stream ids for Rng::derive.
enum Stream : std::uint64_t { kShards = 1, kRoles, kUsers, kUploads, kKeys, kServer };

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector from_std(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

}  // namespace

void validate(const SimulationConfig& c) {
  if (c.users < 2) throw std::invalid_argument("config: the defense needs at least two users");
  if (!(c.attack.ratio >= 0 && c.attack.ratio <= 0.5)) throw std::invalid_argument("config: attack ratio outside [0, 0.5]");
  if (c.attack.flip.source == c.attack.flip.target) throw std::invalid_argument("config: source equals target class");
  if (c.attack.type == AttackType::None && (c.attack.ratio > 0 || c.attack.stealth))
    throw std::invalid_argument("config: attack ratio or stealth set without an attack type");
  if (!(c.lr > 0) || !std::isfinite(c.lr)) throw std::invalid_argument("config: lr must be positive");
  if (c.train.batch == 0 || c.train.local_batches == 0) throw std::invalid_argument("config: empty training schedule");
  if (c.deg == 0) throw std::invalid_argument("config: deg must be positive");
  if (!(c.clip > 0)) throw std::invalid_argument("config: clip bound must be positive");
  if (c.mode == CryptoMode::Encrypted && c.aggregator != Aggregator::Profl)
    throw std::invalid_argument("config: only the PROFL aggregator runs in encrypted mode");
}

Simulation::Simulation(SimulationConfig config, const Dataset& train, const Dataset& test)
    : config_(config),
      train_(train),
      test_(test),
      model_(zero_model(ModelShape{train.dimension(), train.num_classes}, config.lr)),
      server_rng_(Rng(config.seed).derive(kServer)) {
  validate(config_);
  if (test_.dimension() != train_.dimension()) throw std::invalid_argument("simulation: train/test width differs");
  const Rng root(config_.seed);
  const std::uint32_t n = config_.users;

  std::vector<std::size_t> rows(train_.size());
  std::iota(rows.begin(), rows.end(), 0);
  Rng shard_rng = root.derive(kShards);
  std::shuffle(rows.begin(), rows.end(), shard_rng);
  const std::size_t per_user = train_.size() / n;
  if (per_user == 0) throw std::invalid_argument("simulation: fewer samples than users");

  std::vector<std::uint32_t> roles(n);
  std::iota(roles.begin(), roles.end(), 0);
  Rng role_rng = root.derive(kRoles);
  std::shuffle(roles.begin(), roles.end(), role_rng);
  const auto attackers = static_cast<std::uint32_t>(std::floor(config_.attack.ratio * n + 1e-9));
  malicious_.assign(n, false);
  for (std::uint32_t i = 0; i < attackers; ++i) malicious_[roles[i]] = true;

  const Behavior attack_behavior =
      config_.attack.type == AttackType::Targeted ? Behavior::Targeted : Behavior::Untargeted;
  for (std::uint32_t u = 0; u < n; ++u) {
    const std::vector<std::size_t> mine(rows.begin() + static_cast<std::ptrdiff_t>(u * per_user),
                                        rows.begin() + static_cast<std::ptrdiff_t>((u + 1) * per_user));
    users_.emplace_back(u, malicious_[u] ? attack_behavior : Behavior::Benign, malicious_[u] && config_.attack.stealth,
                        subset(train_, mine), root.derive(kUsers).derive(u));
    upload_rngs_.push_back(root.derive(kUploads).derive(u));
  }

  fabric_ = std::make_unique<transport::Fabric>(n);
  if (config_.mode == CryptoMode::Encrypted) {
    Rng key_rng = root.derive(kKeys);
    keys_ = key_center_init(*fabric_, config_.modulus_bits, config_.insecure_test_mode, key_rng);
    encoding::check_distance_headroom(model_.shape.parameters(), config_.clip, config_.deg, n, keys_->s1.pk_g.n);
  }
}

Vector Simulation::broadcast() {
  const auto fixed = encoding::to_fixed(to_std(model_.weights), config_.deg);
  if (config_.mode == CryptoMode::Plain) return from_std(encoding::from_fixed(fixed, config_.deg));

  const auto& pk_m = keys_->s1.pk_m;
  ahe::Bytes payload;
  for (auto v : fixed) ahe::put_ciphertext(payload, pk_m, ahe::encrypt(pk_m, encoding::to_residue(v, pk_m.n), server_rng_));
  for (std::uint32_t u = 0; u < config_.users; ++u)
    fabric_->send(Message{PartyId::server1(), PartyId::user(u), Phase::ModelBroadcast, payload});

  // every user decrypts its own copy; all copies are equal, user 0's is used
  Vector params;
  for (std::uint32_t u = 0; u < config_.users; ++u) {
    const auto msg = fabric_->recv(PartyId::user(u));
    const auto& keys = keys_->users[u];
    const auto pk_m_view = ahe::public_view(keys.sk_m);
    ahe::Reader in(msg.payload);
    std::vector<std::int64_t> received;
    received.reserve(fixed.size());
    while (!in.done()) {
      const auto c = in.ciphertext(pk_m_view);
      received.push_back(to_int64(encoding::signed_value(ahe::full_decrypt(keys.sk_m, c), keys.sk_m.n)));
    }
    if (u == 0) params = from_std(encoding::from_fixed(received, config_.deg));
  }
  return params;
}

std::vector<Vector> Simulation::user_gradients(const Vector& params) {
  const auto shape = model_.shape;
  std::vector<Vector> grads(users_.size());
  std::vector<Vector> benign;
  auto clip = [&](Vector g) { return Vector(g.cwiseMax(-config_.clip).cwiseMin(config_.clip)); };

  for (auto& user : users_) {
    if (user.behavior != Behavior::Benign) continue;
    grads[user.id] = clip(local_train(user, params, shape, config_.train));
    benign.push_back(grads[user.id]);
  }
  std::optional<BenignStats> stats;
  for (auto& user : users_) {
    if (user.behavior == Behavior::Benign) continue;
    Vector g = user.behavior == Behavior::Targeted
                   ? apply_targeted(user, params, shape, config_.train, config_.attack.flip)
                   : apply_untargeted(local_train(user, params, shape, config_.train), config_.attack.beta);
    g = clip(std::move(g));
    if (user.stealth) {
      if (!stats) stats = benign_stats(benign);
      g = apply_stealth(g, *stats, config_.attack.stealth_params, user.rng, config_.clip).gradient;
    }
    grads[user.id] = std::move(g);
  }
  return grads;
}

defense::FixedVector Simulation::aggregate(const std::vector<defense::FixedVector>& fixed) {
  if (config_.aggregator == Aggregator::FedAvg) {
    last_result_ = defense::AggregationResult{};
    return defense::fedavg(fixed);
  }
  if (config_.mode == CryptoMode::Plain) {
    const auto rule = config_.aggregator == Aggregator::Profl ? defense::RepresentativeRule::PautaMedian
                                                              : defense::RepresentativeRule::SurvivorMean;
    last_result_ = defense::plaintext_oracle_aggregate(fixed, server_rng_, rule);
    return last_result_.aggregate;
  }

  const auto& pk_g = keys_->users.front().pk_g;
  for (std::uint32_t u = 0; u < config_.users; ++u) {
    ahe::Bytes payload;
    for (auto v : fixed[u])
      ahe::put_ciphertext(payload, pk_g, ahe::encrypt(pk_g, encoding::to_residue(v, pk_g.n), upload_rngs_[u]));
    fabric_->send(Message{PartyId::user(u), PartyId::server1(), Phase::Upload, std::move(payload)});
  }
  std::vector<protocols::EncryptedVector> uploads(config_.users);
  for (std::uint32_t u = 0; u < config_.users; ++u) {
    const auto msg = fabric_->recv_from(PartyId::server1(), PartyId::user(u));
    ahe::Reader in(msg.payload);
    while (!in.done()) uploads[u].push_back(in.ciphertext(keys_->s1.pk_g));
  }
  protocols::Channel channel{*fabric_, protocols::Server1{keys_->s1.pk_g, keys_->s1.share, server_rng_},
                             protocols::Server2{keys_->s2.share}};
  last_result_ = defense::aggregate(channel, uploads);
  return last_result_.aggregate;
}

RoundMetrics Simulation::run_round() {
  const std::uint32_t round = model_.round;
  fabric_->begin_round(round);
  const Vector params = broadcast();

  const auto grads = user_gradients(params);
  std::vector<defense::FixedVector> fixed;
  fixed.reserve(grads.size());
  for (const auto& g : grads) fixed.push_back(encoding::to_fixed(to_std(g), config_.deg));

  last_aggregate_ = aggregate(fixed);
  const Vector step = from_std(encoding::from_fixed(last_aggregate_, config_.deg));
  model_.weights -= model_.lr * step;
  ++model_.round;
  fabric_->require_idle();

  RoundMetrics out;
  out.round = round;
  out.acc = accuracy(model_.weights, model_.shape, test_);
  out.acc_source = class_accuracy(model_.weights, model_.shape, test_, config_.attack.flip.source);
  out.bytes = fabric_->ledger().round_bytes(round);
  for (auto s : last_result_.survivors) out.malicious_survivors += malicious_[s];
  out.rejections = std::accumulate(last_result_.rejections.begin(), last_result_.rejections.end(), std::uint64_t{0});
  return out;
}

}  // namespace profl::fl
