#include "profl/protocols/sec_rep.hpp"

#include <stdexcept>

#include "profl/ahe/serialize.hpp"
#include "profl/encoding/fixed_point.hpp"
#include "profl/protocols/pauta.hpp"

namespace profl::protocols {

using transport::Message;
using transport::PartyId;
using transport::Phase;

namespace {

void server2_represent(Channel channel) {
  const auto view = ahe::public_view(channel.s2.share);
  const Message msg = channel.fabric.recv_from(PartyId::server2(), PartyId::server1());
  if (msg.phase != Phase::SecRep) throw std::logic_error("sec_rep: unexpected phase at S2");
  ahe::Reader in(msg.payload);
  std::vector<BigInt> blinded;
  while (!in.done()) {
    const auto c = in.ciphertext(view);
    const auto p = in.partial(view);
    blinded.push_back(ahe::part_dec2(channel.s2.share, c, p));
  }
  if (blinded.empty()) throw std::logic_error("sec_rep: empty request");

  std::vector<std::int64_t> offsets;
  offsets.reserve(blinded.size());
  for (const auto& v : blinded)
    offsets.push_back(to_int64(encoding::signed_value(mod(v - blinded.front(), view.n), view.n)));
  const auto outcome = pauta_lower_median(offsets);

  ahe::Bytes reply;
  ahe::put_plaintext(reply, view, blinded[outcome.median_index]);
  ahe::put_u32(reply, static_cast<std::uint32_t>(outcome.rejected));
  channel.fabric.send(Message{PartyId::server2(), PartyId::server1(), Phase::SecRep, std::move(reply)});
}

}  // namespace

Representative sec_rep(Channel channel, std::span<const ahe::Ciphertext> values) {
  if (values.empty()) throw std::invalid_argument("sec_rep: no values");
  const auto& pk = channel.s1.pk;

  // @S1: one shared blinding scalar for this dimension
  const BigInt r = channel.s1.rng.nonzero_below(pk.n);
  {
    const auto blind = ahe::encrypt(pk, r, channel.s1.rng);
    ahe::Bytes payload;
    payload.reserve(2 * values.size() * pk.ciphertext_bytes());
    for (const auto& c : values) {
      const auto blinded = ahe::hom_add(pk, c, blind);
      ahe::put_ciphertext(payload, pk, blinded);
      ahe::put_partial(payload, pk, ahe::part_dec1(channel.s1.share, blinded));
    }
    channel.fabric.send(Message{PartyId::server1(), PartyId::server2(), Phase::SecRep, std::move(payload)});
  }

  server2_represent(channel);

  // @S1: unblind the median
  const Message reply = channel.fabric.recv_from(PartyId::server1(), PartyId::server2());
  ahe::Reader in(reply.payload);
  Representative out;
  out.median = mod(in.plaintext(pk) - r, pk.n);
  out.rejected = in.u32();
  return out;
}

std::vector<Representative> sec_rep_all(Channel channel, std::span<const EncryptedVector* const> gradients) {
  if (gradients.empty()) throw std::invalid_argument("sec_rep: no gradients");
  const std::size_t dimension = gradients.front()->size();
  for (const auto* g : gradients)
    if (g->size() != dimension) throw std::invalid_argument("sec_rep: dimension mismatch");

  std::vector<Representative> out;
  out.reserve(dimension);
  std::vector<ahe::Ciphertext> column(gradients.size());
  for (std::size_t t = 0; t < dimension; ++t) {
    for (std::size_t i = 0; i < gradients.size(); ++i) column[i] = (*gradients[i])[t];
    out.push_back(sec_rep(channel, column));
  }
  return out;
}

}  // namespace profl::protocols
