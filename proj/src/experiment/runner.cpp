#include "profl/experiment/runner.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include "profl/experiment/plot.hpp"
#include "profl/fl/simulation.hpp"

namespace profl::experiment {
namespace {

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string optional6(const std::optional<double>& v) { return v ? fixed6(*v) : std::string{}; }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

std::optional<double> RoundRecord::ai() const {
  if (!baseline) return std::nullopt;
  return profl.acc - baseline->acc;
}

std::optional<double> RoundRecord::ai_source() const {
  if (!baseline) return std::nullopt;
  return profl.acc_source - baseline->acc_source;
}

fl::TrainTest load_datasets(const ExperimentConfig& config) {
  switch (config.dataset) {
    case DatasetKind::Mnist: return fl::load_mnist_layout(config.data_dir / "mnist");
    case DatasetKind::Fashion: return fl::load_mnist_layout(config.data_dir / "fashion");
    case DatasetKind::Synthetic: break;
  }
  Rng rng(config.seed);
  const auto all = fl::make_blobs(fl::BlobOptions{config.synthetic_train + config.synthetic_test, config.synthetic_dim,
                                                  config.synthetic_classes, 0.6},
                                  rng);
  std::vector<std::size_t> train(config.synthetic_train), test(config.synthetic_test);
  for (std::size_t i = 0; i < train.size(); ++i) train[i] = i;
  for (std::size_t i = 0; i < test.size(); ++i) test[i] = train.size() + i;
  return fl::TrainTest{fl::subset(all, train), fl::subset(all, test)};
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Progress& progress) {
  validate(config);
  const auto data = load_datasets(config);

  ExperimentResult result;
  for (std::uint32_t rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t seed = mix_seed(config.seed, rep);
    fl::Simulation profl(simulation_config(config, fl::Aggregator::Profl, config.mode, seed), data.train, data.test);
    std::optional<fl::Simulation> baseline;
    if (config.baseline)
      baseline.emplace(simulation_config(config, fl::Aggregator::FedAvg, fl::CryptoMode::Plain, seed), data.train,
                       data.test);
    for (std::uint32_t r = 0; r < config.rounds; ++r) {
      RoundRecord record{rep, profl.run_round(), std::nullopt};
      if (baseline) record.baseline = baseline->run_round();
      if (progress) progress(rep, record);
      result.rounds.push_back(record);
    }
    if (rep == 0) result.ledger = profl.fabric().ledger();
  }
  result.summary = summarize(result.rounds);

  if (!config.out.empty()) {
    std::filesystem::create_directories(config.out);
    const auto write = [&](const char* name, auto&& body) {
      const auto path = config.out / name;
      auto out = open_output(path);
      body(out);
      result.files.push_back(path);
    };
    write("config.txt", [&](std::ostream& out) { write_config(out, config); });
    write("metrics.csv", [&](std::ostream& out) { write_metrics_csv(out, result.rounds); });
    write("ledger.csv", [&](std::ostream& out) { result.ledger.write_csv(out); });
    write("summary.csv", [&](std::ostream& out) { write_summary_csv(out, config, result.summary); });
    for (auto& p : emit_plots(result.rounds, config.out)) result.files.push_back(std::move(p));
  }
  return result;
}

Summary summarize(const std::vector<RoundRecord>& rounds) {
  Summary s;
  std::map<std::uint32_t, const RoundRecord*> last;
  for (const auto& r : rounds) last[r.repetition] = &r;
  if (last.empty()) return s;

  const double count = static_cast<double>(last.size());
  bool paired = true;
  double acc_b = 0, src_b = 0;
  for (const auto& [rep, r] : last) {
    s.acc += r->profl.acc / count;
    s.acc_source += r->profl.acc_source / count;
    paired = paired && r->baseline.has_value();
    if (r->baseline) {
      acc_b += r->baseline->acc / count;
      src_b += r->baseline->acc_source / count;
    }
  }
  if (paired) {
    s.acc_baseline = acc_b;
    s.acc_source_baseline = src_b;
    s.ai = s.acc - acc_b;
    s.ai_source = s.acc_source - src_b;
  }
  double bytes = 0;
  for (const auto& r : rounds) bytes += static_cast<double>(r.profl.bytes);
  s.bytes_per_round = bytes / static_cast<double>(rounds.size());
  return s;
}

void write_metrics_csv(std::ostream& out, const std::vector<RoundRecord>& rounds) {
  out << "repetition,round,acc,acc_source,acc_baseline,acc_source_baseline,ai,ai_source,bytes,"
         "malicious_survivors,rejections\n";
  for (const auto& r : rounds) {
    out << r.repetition << ',' << r.profl.round << ',' << fixed6(r.profl.acc) << ',' << fixed6(r.profl.acc_source)
        << ',' << (r.baseline ? fixed6(r.baseline->acc) : "") << ','
        << (r.baseline ? fixed6(r.baseline->acc_source) : "") << ',' << optional6(r.ai()) << ','
        << optional6(r.ai_source()) << ',' << r.profl.bytes << ',' << r.profl.malicious_survivors << ','
        << r.profl.rejections << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ExperimentConfig& c, const Summary& s) {
  out << "dataset,attack,stealth,ratio,users,rounds,repetitions,mode,acc,acc_baseline,ai,acc_source,"
         "acc_source_baseline,ai_source,bytes_per_round\n";
  out << to_string(c.dataset) << ',' << to_string(c.attack) << ',' << (c.stealth ? "yes" : "no") << ','
      << c.ratio_percent << ',' << c.users << ',' << c.rounds << ',' << c.repetitions << ',' << to_string(c.mode)
      << ',' << fixed6(s.acc) << ',' << optional6(s.acc_baseline) << ',' << optional6(s.ai) << ','
      << fixed6(s.acc_source) << ',' << optional6(s.acc_source_baseline) << ',' << optional6(s.ai_source) << ','
      << fixed6(s.bytes_per_round) << '\n';
}

std::vector<std::filesystem::path> emit_plots(const std::vector<RoundRecord>& rounds,
                                              const std::filesystem::path& dir) {
  if (rounds.empty()) throw std::invalid_argument("emit_plots: no rounds to plot");

  // mean over repetitions, per round
  std::map<std::uint32_t, std::array<double, 5>> acc;  // acc, src, acc*, src*, count
  bool paired = true;
  for (const auto& r : rounds) {
    auto& a = acc[r.profl.round];
    a[0] += r.profl.acc;
    a[1] += r.profl.acc_source;
    if (r.baseline) {
      a[2] += r.baseline->acc;
      a[3] += r.baseline->acc_source;
    }
    a[4] += 1;
    paired = paired && r.baseline.has_value();
  }

  std::vector<std::filesystem::path> files;
  const auto chart = [&](const char* file, const char* title, const char* y_label, int column) {
    std::vector<Series> series{{"PROFL", {}, {}}};
    if (paired) series.push_back({"FedAvg", {}, {}});
    for (const auto& [round, a] : acc) {
      for (std::size_t s = 0; s < series.size(); ++s) {
        series[s].x.push_back(round + 1.0);
        series[s].y.push_back(a[static_cast<std::size_t>(column) + 2 * s] / a[4]);
      }
    }
    const auto path = dir / file;
    auto out = open_output(path);
    write_line_chart(out, title, "round", y_label, series);
    files.push_back(path);
  };
  chart("accuracy.svg", "Test accuracy", "accuracy", 0);
  chart("source_accuracy.svg", "Source-class accuracy", "accuracy", 1);
  return files;
}

}  // namespace profl::experiment
