#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "profl/experiment/config.hpp"
#include "profl/fl/dataset.hpp"
#include "profl/transport/fabric.hpp"

namespace profl::experiment {

struct RoundRecord {
  std::uint32_t repetition = 0;
  fl::RoundMetrics profl;
  std::optional<fl::RoundMetrics> baseline;  // FedAvg, same seed, shards and attacks

  std::optional<double> ai() const;
  std::optional<double> ai_source() const;
};

/// Final-round values averaged over repetitions.
struct Summary {
  double acc = 0;
  double acc_source = 0;
  std::optional<double> acc_baseline;
  std::optional<double> acc_source_baseline;
  std::optional<double> ai;
  std::optional<double> ai_source;
  double bytes_per_round = 0;
};

struct ExperimentResult {
  std::vector<RoundRecord> rounds;
  Summary summary;
  transport::CommLedger ledger;  // first repetition's PROFL run
  std::vector<std::filesystem::path> files;
};

fl::TrainTest load_datasets(const ExperimentConfig& config);

/// Called after each round of each run.
using Progress = std::function<void(std::uint32_t repetition, const RoundRecord&)>;

/// Runs every repetition (PROFL, then the paired baseline) and, when
/// `config.out` is non-empty, writes config.txt, metrics.csv, ledger.csv,
/// summary.csv and the trajectory plots there.
ExperimentResult run_experiment(const ExperimentConfig& config, const Progress& progress = {});

Summary summarize(const std::vector<RoundRecord>& rounds);

void write_metrics_csv(std::ostream& out, const std::vector<RoundRecord>& rounds);
void write_summary_csv(std::ostream& out, const ExperimentConfig& config, const Summary& summary);

/// accuracy.svg and source_accuracy.svg with one curve per aggregator,
/// averaged over repetitions. Throws std::invalid_argument on empty input.
std::vector<std::filesystem::path> emit_plots(const std::vector<RoundRecord>& rounds,
                                              const std::filesystem::path& dir);

}  // namespace profl::experiment
