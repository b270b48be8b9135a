#pragma once

// In-process message fabric between the key center, the two servers and the
// users. Every send is charged to a per-(round, link, phase) ledger so that
// protocol traffic can be measured byte for byte.

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace profl::transport {

enum class Role : std::uint8_t { KeyCenter, Server1, Server2, User };

struct PartyId {
  Role role = Role::KeyCenter;
  std::uint32_t index = 0;  // meaningful for users only

  static PartyId key_center() { return {Role::KeyCenter, 0}; }
  static PartyId server1() { return {Role::Server1, 0}; }
  static PartyId server2() { return {Role::Server2, 0}; }
  static PartyId user(std::uint32_t i) { return {Role::User, i}; }

  std::string to_string() const;
  friend auto operator<=>(const PartyId&, const PartyId&) = default;
};

enum class Phase : std::uint8_t { KeyDistribution, ModelBroadcast, Upload, SecDis, SecSel, SecRep };

std::string to_string(Phase phase);

/// Fixed per-message framing overhead, tracked apart from payload bytes.
inline constexpr std::uint64_t kHeaderBytes = 16;

struct Message {
  PartyId sender;
  PartyId receiver;
  Phase phase = Phase::Upload;
  std::vector<std::uint8_t> payload;
};

class ProtocolDeadlock : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LedgerKey {
  std::uint32_t round = 0;
  PartyId from;
  PartyId to;
  Phase phase = Phase::Upload;
  friend auto operator<=>(const LedgerKey&, const LedgerKey&) = default;
};

struct LedgerEntry {
  std::uint64_t payload_bytes = 0;
  std::uint64_t messages = 0;
};

/// Cumulative payload bytes and message counts. Header bytes are kept out of
/// the payload totals and reported as messages * kHeaderBytes.
class CommLedger {
 public:
  void record(const LedgerKey& key, std::uint64_t payload_bytes);

  std::uint64_t total_bytes() const;
  std::uint64_t total_messages() const;
  std::uint64_t header_bytes() const { return total_messages() * kHeaderBytes; }

  std::uint64_t round_bytes(std::uint32_t round) const;
  std::uint64_t phase_bytes(Phase phase, std::optional<std::uint32_t> round = std::nullopt) const;
  std::uint64_t phase_messages(Phase phase, std::optional<std::uint32_t> round = std::nullopt) const;
  /// Messages on one directed link for a phase, optionally for a single round.
  std::uint64_t link_messages(PartyId from, PartyId to, Phase phase,
                              std::optional<std::uint32_t> round = std::nullopt) const;
  std::uint64_t link_bytes(PartyId from, PartyId to, std::optional<Phase> phase = std::nullopt) const;
  std::vector<std::uint32_t> rounds() const;

  const std::map<LedgerKey, LedgerEntry>& entries() const { return entries_; }

  /// CSV with columns round,link,phase,bytes (payload only).
  void write_csv(std::ostream& out) const;

 private:
  std::map<LedgerKey, LedgerEntry> entries_;
};

struct TranscriptRecord {
  std::uint64_t sequence = 0;
  std::uint32_t round = 0;
  Message message;
  std::uint64_t digest = 0;  // FNV-1a over the payload
};

std::uint64_t payload_digest(const std::vector<std::uint8_t>& payload);

/// Deterministic single-queue fabric: sends are totally ordered by a global
/// sequence number, delivery is FIFO per directed link.
class Fabric {
 public:
  explicit Fabric(std::uint32_t num_users, bool keep_transcript = false);

  void send(Message msg);
  /// Oldest pending message addressed to `receiver`.
  Message recv(PartyId receiver);
  /// Oldest pending message on the directed link sender -> receiver.
  Message recv_from(PartyId receiver, PartyId sender);

  bool idle() const { return pending_ == 0; }
  std::size_t pending() const { return pending_; }
  /// Throws ProtocolDeadlock if any message is still queued.
  void require_idle() const;

  void begin_round(std::uint32_t round) { round_ = round; }
  std::uint32_t round() const { return round_; }
  std::uint32_t num_users() const { return num_users_; }

  CommLedger ledger_snapshot() const { return ledger_; }
  const CommLedger& ledger() const { return ledger_; }
  const std::vector<TranscriptRecord>& transcript() const { return transcript_; }

 private:
  void check_party(PartyId party) const;

  struct Queued {
    std::uint64_t sequence;
    Message message;
  };

  std::uint32_t num_users_;
  bool keep_transcript_;
  std::uint32_t round_ = 0;
  std::uint64_t next_sequence_ = 0;
  std::map<PartyId, std::deque<Queued>> inbox_;
  std::size_t pending_ = 0;
  CommLedger ledger_;
  std::vector<TranscriptRecord> transcript_;
};

}  // namespace profl::transport
