// Experiment driver: paired PROFL / FedAvg runs with metrics, ledger and plots.

#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "profl/experiment/runner.hpp"

using namespace profl;
using namespace profl::experiment;

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving robust federated learning experiments"};

  std::string config_path;
  std::map<std::string, std::string> flags;
  bool stealth = false;
  std::vector<std::string> overrides;
  bool quiet = false;

  app.add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);
  const auto flag = [&](const char* name, const char* key, const char* help) {
    return app.add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  flag("--dataset", "dataset", "mnist | fashion | synthetic")->check(CLI::IsMember({"mnist", "fashion", "synthetic"}));
  flag("--attack", "attack", "none | targeted | untargeted")->check(CLI::IsMember({"none", "targeted", "untargeted"}));
  app.add_flag("--stealth", stealth, "add stealth spikes to malicious gradients");
  flag("--ratio", "ratio", "attack ratio in percent: 0, 30 or 50");
  flag("--users", "users", "number of users");
  flag("--rounds", "rounds", "training rounds");
  flag("--mode", "mode", "encrypted | plain")->check(CLI::IsMember({"encrypted", "plain"}));
  flag("--seed", "seed", "experiment seed");
  flag("--out", "out", "output directory");
  flag("--data-dir", "data_dir", "directory holding mnist/ and fashion/");
  flag("--repetitions", "repetitions", "independent repetitions");
  app.add_option("--set", overrides, "extra key=value overrides, applied last");
  app.add_flag("-q,--quiet", quiet, "no progress output");
  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config;
    config.data_dir = PROFL_DATA_DIR;
    if (!config_path.empty()) config = load_config(config_path, config);
    for (const auto& [key, value] : flags) set_field(config, key, value);
    if (stealth) config.stealth = true;
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      set_field(config, kv.substr(0, eq), kv.substr(eq + 1));
    }

    const std::uint32_t every = std::max<std::uint32_t>(1, config.rounds / 10);
    const auto progress = [&](std::uint32_t rep, const RoundRecord& r) {
      if (quiet || (r.profl.round + 1) % every != 0) return;
      std::fprintf(stderr, "rep %u round %u  acc %.4f  acc_source %.4f", rep, r.profl.round + 1, r.profl.acc,
                   r.profl.acc_source);
      if (r.baseline) std::fprintf(stderr, "  | fedavg acc %.4f  acc_source %.4f", r.baseline->acc, r.baseline->acc_source);
      std::fprintf(stderr, "\n");
    };
    const auto result = run_experiment(config, progress);
    write_summary_csv(std::cout, config, result.summary);
    for (const auto& f : result.files) std::fprintf(stderr, "wrote %s\n", f.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
