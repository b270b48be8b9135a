#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "profl/experiment/plot.hpp"
#include "profl/experiment/runner.hpp"

using namespace profl;
using namespace profl::experiment;

namespace {

ExperimentConfig small_synthetic() {
  ExperimentConfig c;
  c.dataset = DatasetKind::Synthetic;
  c.synthetic_dim = 3;
  c.synthetic_classes = 5;
  c.target = 4;
  c.synthetic_train = 600;
  c.synthetic_test = 200;
  c.users = 5;
  c.rounds = 15;
  c.batch = 32;
  c.repetitions = 2;
  c.out.clear();
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("config text round trip") {
  ExperimentConfig c = small_synthetic();
  c.attack = fl::AttackType::Targeted;
  c.ratio_percent = 30;
  c.stealth = true;
  c.lr = 0.125;
  c.seed = 99;
  std::stringstream text;
  write_config(text, c);
  const auto back = parse_config(text);
  std::stringstream again;
  write_config(again, back);
  CHECK(again.str() == text.str());
  CHECK(back.lr == 0.125);
  CHECK(back.attack == fl::AttackType::Targeted);
}

TEST_CASE("config parsing errors") {
  std::istringstream comments("# a comment\n\nusers = 7\n");
  CHECK(parse_config(comments).users == 7);
  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  std::istringstream missing_eq("users 7\n");
  CHECK_THROWS_AS(parse_config(missing_eq), ConfigError);
  std::istringstream bad_number("users = seven\n");
  CHECK_THROWS_AS(parse_config(bad_number), ConfigError);
  std::istringstream bad_enum("mode = quantum\n");
  CHECK_THROWS_AS(parse_config(bad_enum), ConfigError);
}

TEST_CASE("config validation") {
  auto c = small_synthetic();
  CHECK_NOTHROW(validate(c));
  auto bad = c;
  bad.ratio_percent = 40;
  bad.attack = fl::AttackType::Untargeted;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.ratio_percent = 30;
  CHECK_THROWS_AS(validate(bad), ConfigError);  // ratio without attack
  bad = c;
  bad.users = 1;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.source = 7;  // five synthetic classes
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = c;
  bad.mode = fl::CryptoMode::Encrypted;
  bad.modulus_bits = 256;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad.insecure_test_mode = true;
  CHECK_NOTHROW(validate(bad));
}

TEST_CASE("missing dataset files are reported") {
  auto c = small_synthetic();
  c.dataset = DatasetKind::Fashion;
  c.data_dir = std::filesystem::temp_directory_path() / "profl_no_such_dir";
  CHECK_THROWS_AS(run_experiment(c), fl::DatasetError);
}

TEST_CASE("identical config and seed give identical metrics") {
  const auto dir = std::filesystem::temp_directory_path() / "profl_repro";
  std::filesystem::remove_all(dir);
  auto c = small_synthetic();
  c.attack = fl::AttackType::Untargeted;
  c.ratio_percent = 30;
  c.stealth = true;
  c.out = dir / "a";
  const auto first = run_experiment(c);
  c.out = dir / "b";
  run_experiment(c);
  CHECK(slurp(dir / "a" / "metrics.csv") == slurp(dir / "b" / "metrics.csv"));
  CHECK(slurp(dir / "a" / "summary.csv") == slurp(dir / "b" / "summary.csv"));
  CHECK(first.files.size() == 6);
  CHECK(first.rounds.size() == 2 * 15);

  // the saved config reproduces the run
  auto reloaded = load_config(dir / "a" / "config.txt");
  reloaded.out = dir / "c";
  run_experiment(reloaded);
  CHECK(slurp(dir / "a" / "metrics.csv") == slurp(dir / "c" / "metrics.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("without attackers the defense tracks plain averaging") {
  auto c = small_synthetic();
  c.rounds = 40;
  c.lr = 0.1;
  const auto result = run_experiment(c);
  REQUIRE(result.summary.ai);
  CHECK(std::abs(*result.summary.ai) < 0.05);
  CHECK(result.summary.acc > 0.8);
}

TEST_CASE("summary averages the final rounds") {
  std::vector<RoundRecord> rounds;
  for (std::uint32_t rep = 0; rep < 2; ++rep) {
    for (std::uint32_t r = 0; r < 3; ++r) {
      RoundRecord rec;
      rec.repetition = rep;
      rec.profl.round = r;
      rec.profl.acc = 0.5 + 0.1 * r + 0.1 * rep;
      rec.profl.acc_source = 0.9;
      rec.profl.bytes = 100;
      rec.baseline = fl::RoundMetrics{r, 0.4, 0.2, 0, 0, 0};
      rounds.push_back(rec);
    }
  }
  const auto s = summarize(rounds);
  CHECK(s.acc == doctest::Approx(0.75));
  CHECK(*s.ai == doctest::Approx(0.35));
  CHECK(*s.ai_source == doctest::Approx(0.7));
  CHECK(s.bytes_per_round == 100);

  rounds.back().baseline.reset();
  CHECK_FALSE(summarize(rounds).ai.has_value());
}

TEST_CASE("plots") {
  const auto dir = std::filesystem::temp_directory_path() / "profl_plots";
  std::filesystem::create_directories(dir);
  CHECK_THROWS_AS(emit_plots({}, dir), std::invalid_argument);

  RoundRecord one;
  one.profl.acc = 0.5;
  auto files = emit_plots({one}, dir);
  REQUIRE(files.size() == 2);
  auto svg = slurp(files[0]);
  CHECK(count(svg, "<circle") == 1);
  CHECK(count(svg, "<polyline") == 0);

  std::vector<RoundRecord> paired;
  for (std::uint32_t r = 0; r < 4; ++r) {
    RoundRecord rec;
    rec.profl.round = r;
    rec.profl.acc = 0.2 * r;
    rec.baseline = fl::RoundMetrics{r, 0.1 * r, 0, 0, 0, 0};
    paired.push_back(rec);
  }
  files = emit_plots(paired, dir);
  svg = slurp(files[0]);
  CHECK(count(svg, "<polyline") == 2);
  CHECK(svg.find("FedAvg") != std::string::npos);
  CHECK(slurp(emit_plots(paired, dir)[0]) == svg);
  std::filesystem::remove_all(dir);

  std::ostringstream out;
  const std::vector<Series> empty{{"x", {}, {}}};
  CHECK_THROWS_AS(write_line_chart(out, "t", "x", "y", empty), std::invalid_argument);
}

TEST_CASE("encrypted run records traffic per round") {
  auto c = small_synthetic();
  c.mode = fl::CryptoMode::Encrypted;
  c.modulus_bits = 256;
  c.insecure_test_mode = true;
  c.rounds = 2;
  c.repetitions = 1;
  c.baseline = false;
  const auto result = run_experiment(c);
  CHECK(result.rounds.size() == 2);
  CHECK_FALSE(result.rounds[0].baseline.has_value());
  CHECK(result.rounds[0].profl.bytes > 0);
  CHECK(result.ledger.phase_messages(transport::Phase::SecDis, 1) == 5 + 10);
  CHECK_FALSE(result.summary.ai.has_value());
}
