#include "profl/protocols/sec_sel.hpp"

#include <stdexcept>

#include "profl/ahe/serialize.hpp"
#include "profl/protocols/selection.hpp"

namespace profl::protocols {

using transport::Message;
using transport::PartyId;
using transport::Phase;

Selection sec_sel(Channel channel, std::span<const ahe::Ciphertext> sums, std::size_t k) {
  const std::size_t n = sums.size();
  if (n < 2) throw std::invalid_argument("sec_sel: needs at least two candidates");
  if (k == 0 || k > n) throw std::invalid_argument("sec_sel: k must lie in [1, n]");
  const auto& pk = channel.s1.pk;

  // @S1: stage-one decryption of every sum
  {
    ahe::Bytes payload;
    for (const auto& c : sums) {
      ahe::put_ciphertext(payload, pk, c);
      ahe::put_partial(payload, pk, ahe::part_dec1(channel.s1.share, c));
    }
    channel.fabric.send(Message{PartyId::server1(), PartyId::server2(), Phase::SecSel, std::move(payload)});
  }

  // @S2: stage two, plaintext sums back to S1
  {
    const auto view = ahe::public_view(channel.s2.share);
    const Message msg = channel.fabric.recv_from(PartyId::server2(), PartyId::server1());
    ahe::Reader in(msg.payload);
    ahe::Bytes reply;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = in.ciphertext(view);
      const auto p = in.partial(view);
      ahe::put_plaintext(reply, view, ahe::part_dec2(channel.s2.share, c, p));
    }
    if (!in.done()) throw std::logic_error("sec_sel: malformed request");
    channel.fabric.send(Message{PartyId::server2(), PartyId::server1(), Phase::SecSel, std::move(reply)});
  }

  // @S1: randomized selection
  Selection out;
  const Message reply = channel.fabric.recv_from(PartyId::server1(), PartyId::server2());
  ahe::Reader in(reply.payload);
  out.sums.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.sums.push_back(in.plaintext(pk));
  out.selected = select_smallest<BigInt>(out.sums, k, channel.s1.rng);
  return out;
}

}  // namespace profl::protocols
