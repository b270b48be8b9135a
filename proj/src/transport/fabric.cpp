#include "profl/transport/fabric.hpp"

#include <algorithm>
#include <set>

namespace profl::transport {

std::string PartyId::to_string() const {
  switch (role) {
    case Role::KeyCenter: return "KC";
    case Role::Server1: return "S1";
    case Role::Server2: return "S2";
    case Role::User: return "U" + std::to_string(index);
  }
  return "?";
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::KeyDistribution: return "KeyDistribution";
    case Phase::ModelBroadcast: return "ModelBroadcast";
    case Phase::Upload: return "Upload";
    case Phase::SecDis: return "SecDis";
    case Phase::SecSel: return "SecSel";
    case Phase::SecRep: return "SecRep";
  }
  return "?";
}

void CommLedger::record(const LedgerKey& key, std::uint64_t payload_bytes) {
  auto& entry = entries_[key];
  entry.payload_bytes += payload_bytes;
  entry.messages += 1;
}

std::uint64_t CommLedger::total_bytes() const {
  std::uint64_t total = 0;
  for (const auto& [key, entry] : entries_) total += entry.payload_bytes;
  return total;
}

std::uint64_t CommLedger::total_messages() const {
  std::uint64_t total = 0;
  for (const auto& [key, entry] : entries_) total += entry.messages;
  return total;
}

std::uint64_t CommLedger::round_bytes(std::uint32_t round) const {
  std::uint64_t total = 0;
  for (const auto& [key, entry] : entries_)
    if (key.round == round) total += entry.payload_bytes;
  return total;
}

std::uint64_t CommLedger::phase_bytes(Phase phase, std::optional<std::uint32_t> round) const {
  std::uint64_t total = 0;
  for (const auto& [key, entry] : entries_)
    if (key.phase == phase && (!round || key.round == *round)) total += entry.payload_bytes;
  return total;
}

std::uint64_t CommLedger::phase_messages(Phase phase, std::optional<std::uint32_t> round) const {
  std::uint64_t total = 0;
  for (const auto& [key, entry] : entries_)
    if (key.phase == phase && (!round || key.round == *round)) total += entry.messages;
  return total;
}

std::uint64_t CommLedger::link_messages(PartyId from, PartyId to, Phase phase,
                                        std::optional<std::uint32_t> round) const {
  std::uint64_t total = 0;
  for (const auto& [key, entry] : entries_)
    if (key.from == from && key.to == to && key.phase == phase && (!round || key.round == *round))
      total += entry.messages;
  return total;
}

std::uint64_t CommLedger::link_bytes(PartyId from, PartyId to, std::optional<Phase> phase) const {
  std::uint64_t total = 0;
  for (const auto& [key, entry] : entries_)
    if (key.from == from && key.to == to && (!phase || key.phase == *phase)) total += entry.payload_bytes;
  return total;
}

std::vector<std::uint32_t> CommLedger::rounds() const {
  std::set<std::uint32_t> seen;
  for (const auto& [key, entry] : entries_) seen.insert(key.round);
  return {seen.begin(), seen.end()};
}

void CommLedger::write_csv(std::ostream& out) const {
  out << "round,link,phase,bytes\n";
  for (const auto& [key, entry] : entries_)
    out << key.round << ',' << key.from.to_string() << "->" << key.to.to_string() << ','
        << to_string(key.phase) << ',' << entry.payload_bytes << '\n';
}

std::uint64_t payload_digest(const std::vector<std::uint8_t>& payload) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (auto b : payload) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

Fabric::Fabric(std::uint32_t num_users, bool keep_transcript)
    : num_users_(num_users), keep_transcript_(keep_transcript) {}

void Fabric::check_party(PartyId party) const {
  if (party.role == Role::User) {
    if (party.index >= num_users_) throw std::out_of_range("unknown user " + party.to_string());
  } else if (party.index != 0) {
    throw std::out_of_range("singleton role with nonzero index");
  }
}

void Fabric::send(Message msg) {
  check_party(msg.sender);
  check_party(msg.receiver);
  if (msg.sender == msg.receiver) throw std::invalid_argument("send: sender equals receiver");
  ledger_.record(LedgerKey{round_, msg.sender, msg.receiver, msg.phase}, msg.payload.size());
  const std::uint64_t sequence = next_sequence_++;
  if (keep_transcript_)
    transcript_.push_back(TranscriptRecord{sequence, round_, msg, payload_digest(msg.payload)});
  const PartyId receiver = msg.receiver;
  inbox_[receiver].push_back(Queued{sequence, std::move(msg)});
  ++pending_;
}

Message Fabric::recv(PartyId receiver) {
  check_party(receiver);
  auto box = inbox_.find(receiver);
  if (box == inbox_.end() || box->second.empty())
    throw ProtocolDeadlock("recv: no message queued for " + receiver.to_string());
  Message msg = std::move(box->second.front().message);
  box->second.pop_front();
  --pending_;
  return msg;
}

Message Fabric::recv_from(PartyId receiver, PartyId sender) {
  check_party(receiver);
  auto box = inbox_.find(receiver);
  if (box != inbox_.end()) {
    auto& queue = box->second;
    auto it = std::find_if(queue.begin(), queue.end(),
                           [&](const Queued& q) { return q.message.sender == sender; });
    if (it != queue.end()) {
      Message msg = std::move(it->message);
      queue.erase(it);
      --pending_;
      return msg;
    }
  }
  throw ProtocolDeadlock("recv: no message queued on " + sender.to_string() + "->" + receiver.to_string());
}

void Fabric::require_idle() const {
  if (pending_ == 0) return;
  for (const auto& [party, queue] : inbox_)
    if (!queue.empty())
      throw ProtocolDeadlock(std::to_string(pending_) + " message(s) left undelivered, first for " +
                             party.to_string());
}

}  // namespace profl::transport
