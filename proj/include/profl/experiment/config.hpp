#pragma once

// Flat `key = value` experiment configuration. Lines starting with '#' are
// comments. Unknown keys are errors. See docs/config.md for the schema.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "profl/fl/simulation.hpp"

namespace profl::experiment {

enum class DatasetKind { Mnist, Fashion, Synthetic };

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  DatasetKind dataset = DatasetKind::Mnist;
  std::filesystem::path data_dir = "data";
  std::uint32_t users = 20;
  std::uint32_t ratio_percent = 0;
  fl::AttackType attack = fl::AttackType::None;
  bool stealth = false;
  std::size_t stealth_p = 10;
  double stealth_budget = 0.99;
  double beta = 5.0;
  int source = 0;
  int target = 6;
  std::uint32_t rounds = 500;
  fl::CryptoMode mode = fl::CryptoMode::Plain;
  unsigned modulus_bits = 1024;
  bool insecure_test_mode = false;
  std::uint64_t deg = 1'000'000;
  double clip = 10.0;
  double lr = 0.05;
  std::size_t batch = 256;
  double momentum = 0.5;
  std::uint32_t local_batches = 1;
  std::uint64_t seed = 1;
  std::uint32_t repetitions = 3;
  bool baseline = true;  // paired FedAvg run
  // synthetic task shape
  std::size_t synthetic_dim = 9;
  int synthetic_classes = 10;
  std::size_t synthetic_train = 2000;
  std::size_t synthetic_test = 500;
  std::filesystem::path out = "results";
};

/// Throws ConfigError on the first invalid field.
void validate(const ExperimentConfig& config);

/// Applies `key = value` lines on top of `base`.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Sets one field from its textual form.
void set_field(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Every field, one per line, in a form parse_config reads back.
void write_config(std::ostream& out, const ExperimentConfig& config);

/// The simulation settings for one run of this experiment.
fl::SimulationConfig simulation_config(const ExperimentConfig& config, fl::Aggregator aggregator,
                                       fl::CryptoMode mode, std::uint64_t seed);

std::string to_string(DatasetKind kind);
std::string to_string(fl::AttackType type);
std::string to_string(fl::CryptoMode mode);

}  // namespace profl::experiment
