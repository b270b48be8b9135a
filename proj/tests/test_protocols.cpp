#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "profl/ahe/serialize.hpp"
#include "profl/protocols/pauta.hpp"
#include "profl/protocols/sec_dis.hpp"
#include "profl/protocols/sec_rep.hpp"
#include "profl/protocols/sec_sel.hpp"
#include "profl/protocols/selection.hpp"
#include "support.hpp"

using namespace profl;
using namespace profl::protocols;
using profl::testing::TwoServers;

namespace {

// Sort-based reference for select_smallest.
std::vector<std::size_t> sort_smallest(const std::vector<std::int64_t>& keys, std::size_t k) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

// Floating-point reference for the 3-sigma rule and lower median.
std::pair<std::int64_t, std::size_t> reference_pauta(const std::vector<std::int64_t>& xs) {
  long double mean = 0;
  for (auto x : xs) mean += x;
  mean /= xs.size();
  long double var = 0;
  for (auto x : xs) var += (x - mean) * (x - mean);
  const long double sigma = std::sqrt(var / xs.size());
  std::vector<std::int64_t> kept;
  for (auto x : xs)
    if (std::abs(x - mean) <= 3 * sigma) kept.push_back(x);
  std::sort(kept.begin(), kept.end());
  return {kept[(kept.size() - 1) / 2], xs.size() - kept.size()};
}

}  // namespace

TEST_CASE("sec_dis small examples") {
  TwoServers servers;
  auto gx = servers.encrypt({1, 2});
  auto gy = servers.encrypt({4, 6});
  CHECK(servers.decrypt_signed(sec_dis(servers.channel(), gx, gy).value) == 25);
  CHECK(servers.decrypt_signed(sec_dis(servers.channel(), gx, gx).value) == 0);
  CHECK(servers.decrypt_signed(sec_dis(servers.channel(), gy, gx).value) == 25);
  CHECK(servers.fabric.idle());
}

TEST_CASE("sec_dis matches the plaintext distance on signed vectors") {
  TwoServers servers(102);
  Rng data(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = testing::random_fixed(data, 32, 20'000'000);
    const auto y = testing::random_fixed(data, 32, 20'000'000);
    const auto ex = servers.encrypt(x);
    const auto ey = servers.encrypt(y);
    const auto forward = servers.decrypt_signed(sec_dis(servers.channel(), ex, ey).value);
    const auto backward = servers.decrypt_signed(sec_dis(servers.channel(), ey, ex).value);
    REQUIRE(forward == testing::squared_distance(x, y));
    REQUIRE(backward == forward);
  }
}

TEST_CASE("sec_dis input validation") {
  TwoServers servers;
  auto gx = servers.encrypt({1, 2, 3});
  auto gy = servers.encrypt({1, 2});
  CHECK_THROWS_AS(sec_dis(servers.channel(), gx, gy), std::invalid_argument);

  Rng rng(5);
  const auto other = ahe::keygen(ahe::KeyGenOptions{256, true, ahe::KeyId{1}}, rng);
  EncryptedVector foreign{ahe::encrypt(other.pk, 1, rng), ahe::encrypt(other.pk, 2, rng)};
  CHECK_THROWS_AS(sec_dis(servers.channel(), foreign, gy), ahe::KeyMismatch);
}

TEST_CASE("sec_dis traffic for one pair of 100-dimensional vectors") {
  TwoServers servers(103);
  Rng data(8);
  const auto ex = servers.encrypt(testing::random_fixed(data, 100, 1000));
  const auto ey = servers.encrypt(testing::random_fixed(data, 100, 1000));
  sec_dis(servers.channel(), ex, ey);

  const auto& ledger = servers.fabric.ledger();
  const std::uint64_t x_bytes = servers.keys.pk.ciphertext_bytes();
  const std::uint64_t n_bytes = servers.keys.pk.plaintext_bytes();
  // 2 * n * m ciphertext-sized elements upstream (n = 2), one Z_N scalar back
  CHECK(ledger.link_bytes(transport::PartyId::server1(), transport::PartyId::server2()) == 2 * 2 * 100 * x_bytes);
  CHECK(ledger.link_bytes(transport::PartyId::server2(), transport::PartyId::server1()) == n_bytes);
  CHECK(ledger.total_bytes() == 2 * 2 * 100 * x_bytes + n_bytes);
  CHECK(ledger.phase_messages(transport::Phase::SecDis) == 3);
}

TEST_CASE("blinding soundness on the sec_dis transcript") {
  TwoServers servers(104, 2, true);
  Rng data(9);
  const auto x = testing::random_fixed(data, 16, 5000);
  const auto y = testing::random_fixed(data, 16, 5000);
  const std::vector<EncryptedVector> gradients{servers.encrypt(x), servers.encrypt(y)};
  SecDisSession session(servers.channel(), gradients);
  session.distance(0, 1);

  const auto& pk = servers.keys.pk;
  for (const auto& record : servers.fabric.transcript()) {
    const auto& msg = record.message;
    if (msg.receiver == transport::PartyId::server2()) {
      // every ciphertext S2 receives decrypts to a blinded value, never a raw coordinate
      ahe::Reader in(msg.payload);
      std::size_t k = 0;
      const std::size_t user = record.sequence;  // uploads are the first two messages
      const auto& plain = user == 0 ? x : y;
      while (!in.done()) {
        const auto c = in.ciphertext(pk);
        in.partial(pk);
        const BigInt seen = ahe::full_decrypt(servers.keys.sk, c);
        REQUIRE(seen != encoding::to_residue(plain[k], pk.n));
        REQUIRE(seen == mod(encoding::to_residue(plain[k], pk.n) + session.blinding(user)[k], pk.n));
        ++k;
      }
      CHECK(k == 16);
    }
    if (msg.sender == transport::PartyId::server1()) {
      // no blinding value leaves S1 in the clear
      for (std::size_t u = 0; u < 2; ++u) {
        for (const auto& r : session.blinding(u)) {
          ahe::Bytes needle;
          put_fixed(needle, r, pk.plaintext_bytes());
          REQUIRE(std::search(msg.payload.begin(), msg.payload.end(), needle.begin(), needle.end()) ==
                  msg.payload.end());
        }
      }
    }
  }
  for (std::size_t u = 0; u < 2; ++u)
    for (const auto& r : session.blinding(u)) CHECK(sgn(r) != 0);
}

TEST_CASE("randomized selection agrees with sorting") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index_below(40);
    std::vector<std::int64_t> keys(n);
    for (auto& key : keys) key = static_cast<std::int64_t>(rng.index_below(trial % 2 ? 5 : 1000));
    const std::size_t k = rng.index_below(n + 1);
    REQUIRE(select_smallest<std::int64_t>(keys, k, rng) == sort_smallest(keys, k));
  }
  const std::vector<std::int64_t> keys{3, 1};
  CHECK_THROWS_AS(select_smallest<std::int64_t>(keys, 3, rng), std::invalid_argument);
}

TEST_CASE("sec_sel examples") {
  TwoServers servers(105);
  auto enc = [&](std::vector<std::int64_t> sums) {
    std::vector<ahe::Ciphertext> out;
    for (auto s : sums) out.push_back(ahe::encrypt(servers.keys.pk, s, servers.rng));
    return out;
  };
  auto sel = sec_sel(servers.channel(), enc({10, 50, 12, 48}), 2);
  CHECK(sel.selected == std::vector<std::size_t>{0, 2});
  CHECK(sel.sums == std::vector<BigInt>{10, 50, 12, 48});

  CHECK(sec_sel(servers.channel(), enc({7, 7, 7, 7}), 2).selected == std::vector<std::size_t>{0, 1});
  CHECK(sec_sel(servers.channel(), enc({9, 4}), 1).selected == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(sec_sel(servers.channel(), enc({9}), 1), std::invalid_argument);
  CHECK_THROWS_AS(sec_sel(servers.channel(), enc({9, 4}), 3), std::invalid_argument);
  CHECK(servers.fabric.idle());
  CHECK(servers.fabric.ledger().phase_messages(transport::Phase::SecSel) == 6);
}

TEST_CASE("pauta examples") {
  {
    const std::vector<std::int64_t> xs{1, 2, 3, 2, 1000};
    const auto out = pauta_lower_median(xs);
    CHECK(out.rejected == 0);
    CHECK(xs[out.median_index] == 2);
  }
  {
    const std::vector<std::int64_t> xs{5, 5, 5};
    const auto out = pauta_lower_median(xs);
    CHECK(out.rejected == 0);
    CHECK(out.kept.size() == 3);
    CHECK(xs[out.median_index] == 5);
  }
  {
    // lower median of an even-sized set is a submitted value
    const std::vector<std::int64_t> xs{4, 1, 3, 2};
    CHECK(xs[pauta_lower_median(xs).median_index] == 2);
  }
  CHECK_THROWS_AS(pauta_lower_median(std::vector<std::int64_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(pauta_lower_median(std::vector<std::int64_t>{kPautaValueLimit}), std::overflow_error);
}

TEST_CASE("pauta drops a gross outlier among gaussian samples") {
  const std::int64_t deg = 1000;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::vector<std::int64_t> xs;
    for (int i = 0; i < 20; ++i) xs.push_back(std::llround(rng.normal() * deg));
    std::vector<std::int64_t> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    const std::int64_t clean_median = sorted[(sorted.size() - 1) / 2];

    xs.push_back(50 * deg);
    const auto out = pauta_lower_median(xs);
    REQUIRE(std::find(out.kept.begin(), out.kept.end(), xs.size() - 1) == out.kept.end());
    REQUIRE(std::abs(xs[out.median_index] - clean_median) < deg / 2);
  }
}

TEST_CASE("pauta matches the floating-point reference and respects the Chebyshev floor") {
  Rng rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.index_below(30);
    std::vector<std::int64_t> xs(n);
    for (auto& x : xs) x = std::llround(rng.normal() * 1000);
    // a few heavy outliers
    for (std::size_t j = 0; j < rng.index_below(4) && j < n; ++j)
      xs[rng.index_below(n)] = std::llround(rng.normal() * 1e7);
    const auto out = pauta_lower_median(xs);
    const auto [median, rejected] = reference_pauta(xs);
    REQUIRE(xs[out.median_index] == median);
    REQUIRE(out.rejected == rejected);
    REQUIRE(out.rejected <= n / 9 + 1);
    REQUIRE_FALSE(out.kept.empty());
  }
}

TEST_CASE("sec_rep equals the plaintext rule on unblinded values") {
  TwoServers servers(106);
  Rng data(13);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + data.index_below(10);
    std::vector<std::int64_t> xs(n);
    for (auto& x : xs) x = std::llround(data.normal() * 1e6);
    if (n > 3) xs[0] = 10'000'000;
    std::vector<ahe::Ciphertext> cs;
    for (auto x : xs) cs.push_back(ahe::encrypt(servers.keys.pk, encoding::to_residue(x, servers.keys.pk.n), servers.rng));
    const auto rep = sec_rep(servers.channel(), cs);
    const auto expected = pauta_lower_median(xs);
    REQUIRE(encoding::signed_value(rep.median, servers.keys.pk.n) == xs[expected.median_index]);
    REQUIRE(rep.rejected == expected.rejected);
  }
  CHECK(servers.fabric.idle());
}

TEST_CASE("sec_rep with identical inputs") {
  TwoServers servers(107);
  std::vector<ahe::Ciphertext> cs;
  for (int i = 0; i < 3; ++i) cs.push_back(ahe::encrypt(servers.keys.pk, 5, servers.rng));
  const auto rep = sec_rep(servers.channel(), cs);
  CHECK(rep.median == 5);
  CHECK(rep.rejected == 0);
  CHECK_THROWS_AS(sec_rep(servers.channel(), std::vector<ahe::Ciphertext>{}), std::invalid_argument);
}
