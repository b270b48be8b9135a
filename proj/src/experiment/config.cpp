#include "profl/experiment/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

namespace profl::experiment {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ConfigError("config: bad value for " + key + ": '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("config: bad boolean for " + key + ": '" + value + "'");
}

template <class Enum>
Enum parse_enum(const std::string& key, const std::string& value, const std::map<std::string, Enum>& names) {
  const auto it = names.find(value);
  if (it == names.end()) throw ConfigError("config: bad value for " + key + ": '" + value + "'");
  return it->second;
}

const std::map<std::string, DatasetKind> kDatasets{
    {"mnist", DatasetKind::Mnist}, {"fashion", DatasetKind::Fashion}, {"synthetic", DatasetKind::Synthetic}};
const std::map<std::string, fl::AttackType> kAttacks{
    {"none", fl::AttackType::None}, {"targeted", fl::AttackType::Targeted}, {"untargeted", fl::AttackType::Untargeted}};
const std::map<std::string, fl::CryptoMode> kModes{{"encrypted", fl::CryptoMode::Encrypted},
                                                   {"plain", fl::CryptoMode::Plain}};

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

template <class T, class Field>
Setter number(Field field) {
  return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
    c.*field = parse_number<T>(k, v);
  };
}

const std::map<std::string, Setter>& setters() {
  using C = ExperimentConfig;
  static const std::map<std::string, Setter> table{
      {"dataset", [](C& c, const auto& k, const auto& v) { c.dataset = parse_enum(k, v, kDatasets); }},
      {"data_dir", [](C& c, const auto&, const auto& v) { c.data_dir = v; }},
      {"users", number<std::uint32_t>(&C::users)},
      {"ratio", number<std::uint32_t>(&C::ratio_percent)},
      {"attack", [](C& c, const auto& k, const auto& v) { c.attack = parse_enum(k, v, kAttacks); }},
      {"stealth", [](C& c, const auto& k, const auto& v) { c.stealth = parse_bool(k, v); }},
      {"stealth_p", number<std::size_t>(&C::stealth_p)},
      {"stealth_budget", number<double>(&C::stealth_budget)},
      {"beta", number<double>(&C::beta)},
      {"source", number<int>(&C::source)},
      {"target", number<int>(&C::target)},
      {"rounds", number<std::uint32_t>(&C::rounds)},
      {"mode", [](C& c, const auto& k, const auto& v) { c.mode = parse_enum(k, v, kModes); }},
      {"modulus_bits", number<unsigned>(&C::modulus_bits)},
      {"insecure_test_mode", [](C& c, const auto& k, const auto& v) { c.insecure_test_mode = parse_bool(k, v); }},
      {"deg", number<std::uint64_t>(&C::deg)},
      {"clip", number<double>(&C::clip)},
      {"lr", number<double>(&C::lr)},
      {"batch", number<std::size_t>(&C::batch)},
      {"momentum", number<double>(&C::momentum)},
      {"local_batches", number<std::uint32_t>(&C::local_batches)},
      {"seed", number<std::uint64_t>(&C::seed)},
      {"repetitions", number<std::uint32_t>(&C::repetitions)},
      {"baseline", [](C& c, const auto& k, const auto& v) { c.baseline = parse_bool(k, v); }},
      {"synthetic_dim", number<std::size_t>(&C::synthetic_dim)},
      {"synthetic_classes", number<int>(&C::synthetic_classes)},
      {"synthetic_train", number<std::size_t>(&C::synthetic_train)},
      {"synthetic_test", number<std::size_t>(&C::synthetic_test)},
      {"out", [](C& c, const auto&, const auto& v) { c.out = v; }},
  };
  return table;
}

template <class Enum>
std::string name_of(Enum value, const std::map<std::string, Enum>& names) {
  for (const auto& [name, v] : names)
    if (v == value) return name;
  return "?";
}

}  // namespace

std::string to_string(DatasetKind kind) { return name_of(kind, kDatasets); }
std::string to_string(fl::AttackType type) { return name_of(type, kAttacks); }
std::string to_string(fl::CryptoMode mode) { return name_of(mode, kModes); }

void set_field(ExperimentConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("config: unknown key '" + key + "'");
  it->second(config, key, value);
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    set_field(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in, std::move(base));
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  const auto flag = [](bool b) { return b ? "true" : "false"; };
  const auto real = [](double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
  };
  out << "dataset = " << to_string(c.dataset) << '\n'
      << "data_dir = " << c.data_dir.string() << '\n'
      << "users = " << c.users << '\n'
      << "ratio = " << c.ratio_percent << '\n'
      << "attack = " << to_string(c.attack) << '\n'
      << "stealth = " << flag(c.stealth) << '\n'
      << "stealth_p = " << c.stealth_p << '\n'
      << "stealth_budget = " << real(c.stealth_budget) << '\n'
      << "beta = " << real(c.beta) << '\n'
      << "source = " << c.source << '\n'
      << "target = " << c.target << '\n'
      << "rounds = " << c.rounds << '\n'
      << "mode = " << to_string(c.mode) << '\n'
      << "modulus_bits = " << c.modulus_bits << '\n'
      << "insecure_test_mode = " << flag(c.insecure_test_mode) << '\n'
      << "deg = " << c.deg << '\n'
      << "clip = " << real(c.clip) << '\n'
      << "lr = " << real(c.lr) << '\n'
      << "batch = " << c.batch << '\n'
      << "momentum = " << real(c.momentum) << '\n'
      << "local_batches = " << c.local_batches << '\n'
      << "seed = " << c.seed << '\n'
      << "repetitions = " << c.repetitions << '\n'
      << "baseline = " << flag(c.baseline) << '\n'
      << "synthetic_dim = " << c.synthetic_dim << '\n'
      << "synthetic_classes = " << c.synthetic_classes << '\n'
      << "synthetic_train = " << c.synthetic_train << '\n'
      << "synthetic_test = " << c.synthetic_test << '\n'
      << "out = " << c.out.string() << '\n';
}

void validate(const ExperimentConfig& c) {
  if (c.ratio_percent != 0 && c.ratio_percent != 30 && c.ratio_percent != 50)
    throw ConfigError("config: ratio must be 0, 30 or 50");
  if (c.attack == fl::AttackType::None && c.ratio_percent != 0) throw ConfigError("config: ratio set without an attack");
  if (c.attack != fl::AttackType::None && c.ratio_percent == 0) throw ConfigError("config: attack set with ratio 0");
  if (c.stealth && c.attack == fl::AttackType::None) throw ConfigError("config: stealth needs an attack");
  if (c.rounds == 0) throw ConfigError("config: rounds must be positive");
  if (c.repetitions == 0) throw ConfigError("config: repetitions must be positive");
  if (!(c.stealth_budget > 0 && c.stealth_budget < 1)) throw ConfigError("config: stealth_budget outside (0, 1)");
  if (c.beta < 0) throw ConfigError("config: beta must be non-negative");
  if (!(c.momentum >= 0 && c.momentum < 1)) throw ConfigError("config: momentum outside [0, 1)");
  if (c.dataset == DatasetKind::Synthetic && (c.synthetic_dim == 0 || c.synthetic_classes < 2 ||
                                              c.synthetic_train == 0 || c.synthetic_test == 0))
    throw ConfigError("config: degenerate synthetic task");
  const int classes = c.dataset == DatasetKind::Synthetic ? c.synthetic_classes : 10;
  if (c.source < 0 || c.source >= classes || c.target < 0 || c.target >= classes)
    throw ConfigError("config: source/target outside the label range");
  if (c.mode == fl::CryptoMode::Encrypted && c.modulus_bits < ahe::kMinModulusBits && !c.insecure_test_mode)
    throw ConfigError("config: modulus below 1024 bits needs insecure_test_mode");
  try {
    fl::validate(simulation_config(c, fl::Aggregator::Profl, c.mode, c.seed));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

fl::SimulationConfig simulation_config(const ExperimentConfig& c, fl::Aggregator aggregator, fl::CryptoMode mode,
                                       std::uint64_t seed) {
  fl::SimulationConfig s;
  s.users = c.users;
  s.attack.type = c.attack;
  s.attack.ratio = c.ratio_percent / 100.0;
  s.attack.stealth = c.stealth;
  s.attack.stealth_params = fl::StealthParams{c.stealth_p, c.stealth_budget};
  s.attack.beta = c.beta;
  s.attack.flip = fl::LabelFlip{c.source, c.target};
  s.train = fl::TrainOptions{c.batch, c.momentum, c.local_batches};
  s.lr = c.lr;
  s.mode = mode;
  s.aggregator = aggregator;
  s.modulus_bits = c.modulus_bits;
  s.insecure_test_mode = c.insecure_test_mode;
  s.deg = c.deg;
  s.clip = c.clip;
  s.seed = seed;
  return s;
}

}  // namespace profl::experiment
