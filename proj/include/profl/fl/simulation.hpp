#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "profl/defense/aggregate.hpp"
#include "profl/fl/attacks.hpp"
#include "profl/fl/dataset.hpp"
#include "profl/fl/key_center.hpp"
#include "profl/fl/model.hpp"
#include "profl/fl/user.hpp"
#include "profl/transport/fabric.hpp"

namespace profl::fl {

enum class AttackType { None, Untargeted, Targeted };
enum class CryptoMode { Encrypted, Plain };
enum class Aggregator { Profl, FedAvg, MultiKrumOnly };

struct AttackConfig {
  AttackType type = AttackType::None;
  double ratio = 0.0;  // fraction of users that are malicious, at most 0.5
  bool stealth = false;
  StealthParams stealth_params;
  double beta = 5.0;
  LabelFlip flip;
};

struct SimulationConfig {
  std::uint32_t users = 10;
  AttackConfig attack;
  TrainOptions train;
  double lr = 0.05;
  CryptoMode mode = CryptoMode::Plain;
  Aggregator aggregator = Aggregator::Profl;
  unsigned modulus_bits = 1024;
  bool insecure_test_mode = false;
  std::uint64_t deg = 1'000'000;
  double clip = 10.0;
  std::uint64_t seed = 1;
};

/// Throws std::invalid_argument on an inconsistent configuration.
void validate(const SimulationConfig& config);

struct RoundMetrics {
  std::uint32_t round = 0;
  double acc = 0;
  double acc_source = 0;
  std::uint64_t bytes = 0;  // payload bytes on the fabric this round
  std::uint32_t malicious_survivors = 0;
  std::uint64_t rejections = 0;
};

/// One federated training run. `train` and `test` must outlive it.
class Simulation {
 public:
  Simulation(SimulationConfig config, const Dataset& train, const Dataset& test);

  RoundMetrics run_round();

  const GlobalModel& model() const { return model_; }
  const SimulationConfig& config() const { return config_; }
  const std::vector<bool>& malicious() const { return malicious_; }
  const transport::Fabric& fabric() const { return *fabric_; }
  const std::optional<DistributedKeys>& keys() const { return keys_; }
  /// Encoded aggregate applied in the last round.
  const defense::FixedVector& last_aggregate() const { return last_aggregate_; }
  const defense::AggregationResult& last_result() const { return last_result_; }

 private:
  Vector broadcast();
  std::vector<Vector> user_gradients(const Vector& params);
  defense::FixedVector aggregate(const std::vector<defense::FixedVector>& fixed);

  SimulationConfig config_;
  const Dataset& train_;
  const Dataset& test_;
  GlobalModel model_;
  std::vector<UserState> users_;
  std::vector<bool> malicious_;
  std::vector<Rng> upload_rngs_;
  std::unique_ptr<transport::Fabric> fabric_;
  std::optional<DistributedKeys> keys_;
  Rng server_rng_;
  defense::FixedVector last_aggregate_;
  defense::AggregationResult last_result_;
};

}  // namespace profl::fl
