#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "profl/ahe/paillier.hpp"
#include "profl/ahe/serialize.hpp"
#include "profl/transport/fabric.hpp"

using namespace profl;
using namespace profl::transport;

TEST_CASE("empty fabric has an all-zero ledger") {
  Fabric fabric(3);
  const auto ledger = fabric.ledger_snapshot();
  CHECK(ledger.total_bytes() == 0);
  CHECK(ledger.total_messages() == 0);
  CHECK(ledger.header_bytes() == 0);
  CHECK(fabric.idle());
}

TEST_CASE("one 1024-bit ciphertext costs 256 payload bytes") {
  Rng rng(31);
  const auto keys = ahe::keygen(ahe::KeyGenOptions{1024, false, ahe::KeyId{2}}, rng);
  ahe::Bytes payload;
  ahe::put_ciphertext(payload, keys.pk, ahe::encrypt(keys.pk, 1, rng));

  Fabric fabric(1);
  fabric.send(Message{PartyId::user(0), PartyId::server1(), Phase::Upload, payload});
  const auto ledger = fabric.ledger_snapshot();
  CHECK(ledger.total_bytes() == 256);
  CHECK(ledger.header_bytes() == kHeaderBytes);
  CHECK(ledger.link_bytes(PartyId::user(0), PartyId::server1()) == 256);
  CHECK(fabric.recv(PartyId::server1()).payload == payload);
}

TEST_CASE("delivery is FIFO per link") {
  Fabric fabric(2);
  for (std::uint8_t i = 0; i < 4; ++i) {
    fabric.send(Message{PartyId::user(0), PartyId::server1(), Phase::Upload, {i}});
    fabric.send(Message{PartyId::user(1), PartyId::server1(), Phase::Upload, {std::uint8_t(10 + i)}});
  }
  for (std::uint8_t i = 0; i < 4; ++i)
    CHECK(fabric.recv_from(PartyId::server1(), PartyId::user(1)).payload[0] == 10 + i);
  for (std::uint8_t i = 0; i < 4; ++i) CHECK(fabric.recv(PartyId::server1()).payload[0] == i);
  CHECK(fabric.idle());
}

TEST_CASE("receiving from an empty queue is a deadlock") {
  Fabric fabric(1);
  CHECK_THROWS_AS(fabric.recv(PartyId::server2()), ProtocolDeadlock);
  fabric.send(Message{PartyId::server1(), PartyId::server2(), Phase::SecDis, {1, 2}});
  CHECK_THROWS_AS(fabric.recv_from(PartyId::server2(), PartyId::user(0)), ProtocolDeadlock);
  CHECK_THROWS_AS(fabric.require_idle(), ProtocolDeadlock);
  fabric.recv(PartyId::server2());
  CHECK_NOTHROW(fabric.require_idle());
}

TEST_CASE("unknown parties are rejected") {
  Fabric fabric(2);
  CHECK_THROWS_AS(fabric.send(Message{PartyId::user(2), PartyId::server1(), Phase::Upload, {}}), std::out_of_range);
  CHECK_THROWS_AS(fabric.send(Message{PartyId::server1(), PartyId::server1(), Phase::Upload, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fabric.recv(PartyId{Role::Server1, 3}), std::out_of_range);
}

TEST_CASE("ledger accounting per round and phase") {
  Fabric fabric(2, true);
  fabric.begin_round(1);
  fabric.send(Message{PartyId::user(0), PartyId::server1(), Phase::Upload, std::vector<std::uint8_t>(10)});
  fabric.send(Message{PartyId::server1(), PartyId::server2(), Phase::SecDis, std::vector<std::uint8_t>(7)});
  fabric.begin_round(2);
  fabric.send(Message{PartyId::user(1), PartyId::server1(), Phase::Upload, std::vector<std::uint8_t>(3)});

  const auto& ledger = fabric.ledger();
  CHECK(ledger.total_bytes() == 20);
  CHECK(ledger.round_bytes(1) == 17);
  CHECK(ledger.round_bytes(2) == 3);
  CHECK(ledger.phase_bytes(Phase::Upload) == 13);
  CHECK(ledger.phase_messages(Phase::Upload, 2) == 1);
  CHECK(ledger.link_messages(PartyId::server1(), PartyId::server2(), Phase::SecDis) == 1);
  CHECK(ledger.rounds() == std::vector<std::uint32_t>{1, 2});

  std::ostringstream csv;
  ledger.write_csv(csv);
  CHECK(csv.str() ==
        "round,link,phase,bytes\n"
        "1,S1->S2,SecDis,7\n"
        "1,U0->S1,Upload,10\n"
        "2,U1->S1,Upload,3\n");

  REQUIRE(fabric.transcript().size() == 3);
  CHECK(fabric.transcript()[1].digest == payload_digest(std::vector<std::uint8_t>(7)));
  CHECK(fabric.transcript()[2].round == 2);
}

TEST_CASE("identical send sequences give identical ledgers") {
  auto run = [] {
    Fabric fabric(3);
    Rng rng(99);
    for (int i = 0; i < 50; ++i) {
      const auto user = static_cast<std::uint32_t>(rng.index_below(3));
      fabric.send(Message{PartyId::user(user), PartyId::server1(), Phase::Upload,
                          std::vector<std::uint8_t>(rng.index_below(100))});
    }
    std::ostringstream csv;
    fabric.ledger().write_csv(csv);
    return csv.str();
  };
  CHECK(run() == run());
}
