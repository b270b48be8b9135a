#include "profl/fl/key_center.hpp"

#include <stdexcept>

#include "profl/ahe/serialize.hpp"

namespace profl::fl {
namespace {

using transport::PartyId;
using transport::Phase;

// Payload = sequence of (u32 length, blob).
void append_blob(ahe::Bytes& out, const ahe::Bytes& blob) {
  ahe::put_u32(out, static_cast<std::uint32_t>(blob.size()));
  out.insert(out.end(), blob.begin(), blob.end());
}

std::vector<std::span<const std::uint8_t>> split_blobs(std::span<const std::uint8_t> payload) {
  std::vector<std::span<const std::uint8_t>> out;
  while (!payload.empty()) {
    ahe::Reader in(payload);
    const std::uint32_t size = in.u32();
    if (in.remaining() < size) throw std::out_of_range("key payload truncated");
    out.push_back(payload.subspan(4, size));
    payload = payload.subspan(4 + size);
  }
  return out;
}

}  // namespace

DistributedKeys key_center_init(transport::Fabric& fabric, unsigned modulus_bits, bool insecure_test_mode, Rng& rng) {
  const auto model = ahe::keygen(ahe::KeyGenOptions{modulus_bits, insecure_test_mode, kModelKey}, rng);
  const auto grad = ahe::keygen(ahe::KeyGenOptions{modulus_bits, insecure_test_mode, kGradientKey}, rng);
  const auto [share1, share2] = ahe::key_split(grad.sk, rng);

  ahe::Bytes to_s1;
  append_blob(to_s1, ahe::serialize(model.pk));
  append_blob(to_s1, ahe::serialize(grad.pk));
  append_blob(to_s1, ahe::serialize(share1));
  fabric.send(transport::Message{PartyId::key_center(), PartyId::server1(), Phase::KeyDistribution, std::move(to_s1)});

  ahe::Bytes to_s2;
  append_blob(to_s2, ahe::serialize(share2));
  fabric.send(transport::Message{PartyId::key_center(), PartyId::server2(), Phase::KeyDistribution, std::move(to_s2)});

  ahe::Bytes to_user;
  append_blob(to_user, ahe::serialize(grad.pk));
  append_blob(to_user, ahe::serialize(model.sk));
  for (std::uint32_t u = 0; u < fabric.num_users(); ++u)
    fabric.send(transport::Message{PartyId::key_center(), PartyId::user(u), Phase::KeyDistribution, to_user});

  DistributedKeys out{};
  {
    const auto msg = fabric.recv(PartyId::server1());
    const auto blobs = split_blobs(msg.payload);
    if (blobs.size() != 3) throw std::invalid_argument("S1 key payload: expected three parts");
    out.s1 = Server1Keys{ahe::deserialize_public_key(blobs[0]), ahe::deserialize_public_key(blobs[1]),
                         ahe::deserialize_share(blobs[2])};
  }
  {
    const auto msg = fabric.recv(PartyId::server2());
    const auto blobs = split_blobs(msg.payload);
    if (blobs.size() != 1) throw std::invalid_argument("S2 key payload: expected one part");
    out.s2 = Server2Keys{ahe::deserialize_share(blobs[0])};
  }
  for (std::uint32_t u = 0; u < fabric.num_users(); ++u) {
    const auto msg = fabric.recv(PartyId::user(u));
    const auto blobs = split_blobs(msg.payload);
    if (blobs.size() != 2) throw std::invalid_argument("user key payload: expected two parts");
    out.users.push_back(UserKeys{ahe::deserialize_public_key(blobs[0]), ahe::deserialize_secret_key(blobs[1])});
  }
  fabric.require_idle();
  return out;
}

}  // namespace profl::fl
