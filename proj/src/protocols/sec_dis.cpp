#include "profl/protocols/sec_dis.hpp"

#include <stdexcept>

#include "profl/ahe/serialize.hpp"

namespace profl::protocols {

using transport::Message;
using transport::PartyId;
using transport::Phase;

SecDisSession::SecDisSession(Channel channel, std::span<const EncryptedVector> gradients)
    : channel_(channel), gradients_(gradients) {
  if (gradients.size() < 2) throw std::invalid_argument("sec_dis: needs at least two gradients");
  dimension_ = gradients.front().size();
  const auto& pk = channel_.s1.pk;
  for (const auto& g : gradients) {
    if (g.size() != dimension_) throw std::invalid_argument("sec_dis: dimension mismatch");
    for (const auto& c : g)
      if (c.id != pk.id) throw ahe::KeyMismatch("sec_dis: gradient not under the gradient key");
  }

  // @S1: blind, partially decrypt, upload
  const BigInt& n = pk.n;
  for (std::size_t i = 0; i < gradients.size(); ++i) {
    std::vector<BigInt> r(dimension_);
    ahe::Bytes payload;
    payload.reserve(2 * dimension_ * pk.ciphertext_bytes());
    BigInt r_squared_sum = 0;
    ahe::Ciphertext self_term{1, pk.id};
    for (std::size_t k = 0; k < dimension_; ++k) {
      r[k] = channel_.s1.rng.nonzero_below(n);
      const auto blinded = ahe::hom_add(pk, gradients[i][k], ahe::encrypt(pk, r[k], channel_.s1.rng));
      const auto partial = ahe::part_dec1(channel_.s1.share, blinded);
      ahe::put_ciphertext(payload, pk, blinded);
      ahe::put_partial(payload, pk, partial);

      // [[g_i[k]]]^{-2 r_i[k]}
      const BigInt minus_two_r = mod(-2 * r[k], n);
      self_term = ahe::hom_add(pk, self_term, ahe::hom_scale(pk, gradients[i][k], minus_two_r));
      r_squared_sum += r[k] * r[k];
    }
    self_term = ahe::hom_add(pk, self_term, ahe::encrypt(pk, mod(-r_squared_sum, n), channel_.s1.rng));
    s1_state_.blinding.push_back(std::move(r));
    s1_state_.self_terms.push_back(self_term);
    channel_.fabric.send(Message{PartyId::server1(), PartyId::server2(), Phase::SecDis, std::move(payload)});
  }
  server2_ingest();
}

void SecDisSession::server2_ingest() {
  // @S2: full decryption of the blinded gradients
  const auto pk = ahe::public_view(channel_.s2.share);
  for (std::size_t i = 0; i < gradients_.size(); ++i) {
    const Message msg = channel_.fabric.recv_from(PartyId::server2(), PartyId::server1());
    if (msg.phase != Phase::SecDis) throw std::logic_error("sec_dis: unexpected phase at S2");
    ahe::Reader in(msg.payload);
    std::vector<BigInt> values(dimension_);
    for (auto& v : values) {
      const auto c = in.ciphertext(pk);
      const auto p = in.partial(pk);
      v = ahe::part_dec2(channel_.s2.share, c, p);
    }
    if (!in.done()) throw std::logic_error("sec_dis: malformed upload");
    s2_state_.blinded.push_back(std::move(values));
  }
}

BigInt SecDisSession::server2_pair_sum(std::size_t i, std::size_t j) const {
  const BigInt& n = channel_.s2.share.n;
  BigInt sum = 0;
  for (std::size_t k = 0; k < dimension_; ++k) {
    const BigInt diff = s2_state_.blinded[i][k] - s2_state_.blinded[j][k];
    sum += diff * diff;
  }
  return mod(sum, n);
}

EncryptedDistance SecDisSession::distance(std::size_t i, std::size_t j) {
  if (i == j || i >= size() || j >= size()) throw std::out_of_range("sec_dis: invalid pair");

  // @S2: dis' over the blinded values, summed across coordinates
  {
    ahe::Bytes payload;
    ahe::put_plaintext(payload, ahe::public_view(channel_.s2.share), server2_pair_sum(i, j));
    channel_.fabric.send(Message{PartyId::server2(), PartyId::server1(), Phase::SecDis, std::move(payload)});
  }

  // @S1: [[d]] = [[dis']] * [[t]]
  const auto& pk = channel_.s1.pk;
  const Message reply = channel_.fabric.recv_from(PartyId::server1(), PartyId::server2());
  if (reply.phase != Phase::SecDis) throw std::logic_error("sec_dis: unexpected phase at S1");
  ahe::Reader in(reply.payload);
  const BigInt blinded_distance = in.plaintext(pk);

  const auto& rx = s1_state_.blinding[i];
  const auto& ry = s1_state_.blinding[j];
  const auto& gx = gradients_[i];
  const auto& gy = gradients_[j];
  ahe::Ciphertext t = ahe::hom_add(pk, s1_state_.self_terms[i], s1_state_.self_terms[j]);
  BigInt cross = 0;
  for (std::size_t k = 0; k < dimension_; ++k) {
    t = ahe::hom_add(pk, t, ahe::hom_scale(pk, gx[k], mod(2 * ry[k], pk.n)));  // [[g_x]]^{2 r_y}
    t = ahe::hom_add(pk, t, ahe::hom_scale(pk, gy[k], mod(2 * rx[k], pk.n)));  // [[g_y]]^{2 r_x}
    cross += 2 * rx[k] * ry[k];
  }
  t = ahe::hom_add(pk, t, ahe::encrypt(pk, mod(cross, pk.n), channel_.s1.rng));  // [[2 r_x r_y]]
  ++evaluations_;
  return EncryptedDistance{ahe::hom_add(pk, ahe::encrypt(pk, blinded_distance, channel_.s1.rng), t)};
}

EncryptedDistance sec_dis(Channel channel, const EncryptedVector& gx, const EncryptedVector& gy) {
  const std::vector<EncryptedVector> pair{gx, gy};
  SecDisSession session(channel, pair);
  return session.distance(0, 1);
}

}  // namespace profl::protocols
