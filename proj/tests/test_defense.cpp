#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "profl/defense/aggregate.hpp"
#include "support.hpp"

using namespace profl;
using namespace profl::defense;
using profl::testing::TwoServers;

namespace {

struct Run {
  AggregationResult encrypted;
  AggregationResult oracle;
};

Run run_both(TwoServers& servers, const std::vector<FixedVector>& gradients) {
  std::vector<protocols::EncryptedVector> enc;
  for (const auto& g : gradients) enc.push_back(servers.encrypt(g));
  Rng oracle_rng(1);
  return Run{aggregate(servers.channel(), enc), plaintext_oracle_aggregate(gradients, oracle_rng)};
}

void check_equivalent(const Run& run) {
  CHECK(run.encrypted.aggregate == run.oracle.aggregate);
  CHECK(run.encrypted.survivors == run.oracle.survivors);
  CHECK(run.encrypted.rejections == run.oracle.rejections);
  CHECK(run.encrypted.distance_sums == run.oracle.distance_sums);
}

}  // namespace

TEST_CASE("identical gradients are a fixed point") {
  TwoServers servers(201, 4);
  const FixedVector g{5, -3, 0, 1'000'000, -9'999'999};
  const auto run = run_both(servers, {g, g, g, g});
  CHECK(run.encrypted.aggregate == g);
  CHECK(run.encrypted.survivors == std::vector<std::size_t>{0, 1});
  check_equivalent(run);
}

TEST_CASE("far malicious gradients are excluded") {
  TwoServers servers(202, 5);
  Rng data(3);
  std::vector<FixedVector> gradients;
  for (int i = 0; i < 5; ++i) gradients.push_back(testing::random_fixed(data, 12, 1000));
  for (auto& x : gradients[1]) x += 5'000'000;
  for (auto& x : gradients[3]) x -= 5'000'000;
  const auto run = run_both(servers, gradients);
  CHECK(run.encrypted.survivors == std::vector<std::size_t>{0, 2, 4});
  check_equivalent(run);
}

TEST_CASE("stealth spikes with two survivors never reach the aggregate") {
  TwoServers servers(203, 4);
  Rng data(4);
  std::vector<FixedVector> gradients;
  for (int i = 0; i < 3; ++i) gradients.push_back(testing::random_fixed(data, 40, 1'000'000));

  // stealth: benign mean plus three positive spikes inside the benign distance envelope
  FixedVector mean(40);
  for (std::size_t k = 0; k < 40; ++k) mean[k] = (gradients[0][k] + gradients[1][k] + gradients[2][k]) / 3;
  std::int64_t d_max = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) d_max = std::max(d_max, testing::squared_distance(gradients[i], gradients[j]));
  FixedVector stealth = mean;
  const std::vector<std::size_t> spiked{3, 17, 31};
  const auto spike = static_cast<std::int64_t>(std::sqrt(0.9 * static_cast<double>(d_max) / 3));
  for (auto k : spiked) stealth[k] += spike;
  REQUIRE(testing::squared_distance(stealth, mean) < d_max);
  gradients.push_back(stealth);

  const auto run = run_both(servers, gradients);
  check_equivalent(run);
  for (auto k : spiked) {
    CHECK(run.encrypted.aggregate[k] != stealth[k]);
    bool benign = false;
    for (int i = 0; i < 3; ++i) benign = benign || run.encrypted.aggregate[k] == gradients[i][k];
    CHECK(benign);
  }
}

TEST_CASE("two users keep one survivor unchanged") {
  TwoServers servers(204, 2);
  const FixedVector a{1, 2, 3};
  const FixedVector b{-4, 0, 9};
  const auto run = run_both(servers, {a, b});
  check_equivalent(run);
  // equal sums: lower index wins
  CHECK(run.encrypted.survivors == std::vector<std::size_t>{0});
  CHECK(run.encrypted.aggregate == a);
  CHECK(run.encrypted.rejections == std::vector<std::uint32_t>{0, 0, 0});
}

TEST_CASE("encrypted and plaintext aggregation agree on random instances") {
  Rng data(5);
  for (int trial = 0; trial < 8; ++trial) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(data.index_below(6));
    TwoServers servers(300 + trial, n);
    std::vector<FixedVector> gradients;
    for (std::uint32_t i = 0; i < n; ++i) gradients.push_back(testing::random_fixed(data, 10, 10'000'000));
    if (n > 3) gradients[n - 1][0] = 2'000'000'000;
    check_equivalent(run_both(servers, gradients));
  }
}

TEST_CASE("aggregate is invariant to user order") {
  Rng data(6);
  std::vector<FixedVector> gradients;
  for (int i = 0; i < 7; ++i) gradients.push_back(testing::random_fixed(data, 8, 100'000));
  Rng rng(1);
  const auto base = plaintext_oracle_aggregate(gradients, rng);
  std::vector<std::size_t> order(gradients.size());
  std::iota(order.begin(), order.end(), 0);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(order.begin(), order.end(), data);
    std::vector<FixedVector> permuted;
    for (auto i : order) permuted.push_back(gradients[i]);
    const auto out = plaintext_oracle_aggregate(permuted, rng);
    CHECK(out.aggregate == base.aggregate);
    std::vector<std::size_t> mapped;
    for (auto s : out.survivors) mapped.push_back(order[s]);
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == base.survivors);
  }
}

TEST_CASE("distance is evaluated once per unordered pair") {
  for (std::uint32_t n : {2u, 3u, 6u}) {
    TwoServers servers(205, n);
    Rng data(7);
    std::vector<FixedVector> gradients;
    for (std::uint32_t i = 0; i < n; ++i) gradients.push_back(testing::random_fixed(data, 4, 100));
    const auto run = run_both(servers, gradients);
    const auto& ledger = servers.fabric.ledger();
    const std::size_t pairs = n * (n - 1) / 2;
    CHECK(run.encrypted.distance_evaluations == pairs);
    CHECK(run.oracle.distance_evaluations == pairs);
    CHECK(ledger.link_messages(transport::PartyId::server2(), transport::PartyId::server1(),
                               transport::Phase::SecDis) == pairs);
    CHECK(ledger.phase_messages(transport::Phase::SecRep) == 2 * 4);
    CHECK(ledger.phase_messages(transport::Phase::SecDis) == n + pairs);
  }
}

TEST_CASE("aggregate input validation") {
  TwoServers servers(206, 2);
  std::vector<protocols::EncryptedVector> one{servers.encrypt({1, 2})};
  CHECK_THROWS_AS(aggregate(servers.channel(), one), std::invalid_argument);
  std::vector<protocols::EncryptedVector> ragged{servers.encrypt({1, 2}), servers.encrypt({1})};
  CHECK_THROWS_AS(aggregate(servers.channel(), ragged), std::invalid_argument);
  Rng rng(1);
  CHECK_THROWS_AS(plaintext_oracle_aggregate(std::vector<FixedVector>{{1}}, rng), std::invalid_argument);
  CHECK_THROWS_AS(fedavg(std::vector<FixedVector>{{1}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("multi-krum-only ablation averages survivors") {
  Rng rng(1);
  const std::vector<FixedVector> gradients{{0, 10}, {1, 11}, {-1, 10}, {100, 10}};
  const auto out = plaintext_oracle_aggregate(gradients, rng, RepresentativeRule::SurvivorMean);
  CHECK(out.survivors == std::vector<std::size_t>{0, 1});
  CHECK(out.aggregate == FixedVector{0, 10});  // (0.5, 10.5) rounds half to even
}

TEST_CASE("fedavg and report rows") {
  CHECK(fedavg(std::vector<FixedVector>{{1, -3}, {2, 5}, {6, 1}}) == FixedVector{3, 1});

  AggregationResult result;
  result.survivors = {0, 3, 4};
  result.rejections = {0, 2, 1};
  std::ostringstream out;
  write_report_header(out);
  write_report_row(out, 7, result);
  CHECK(out.str() == "round,survivors,total_rejections,rejections\n7,0 3 4,3,0 2 1\n");
}
