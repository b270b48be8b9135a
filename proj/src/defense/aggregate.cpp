#include "profl/defense/aggregate.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "profl/ahe/paillier.hpp"
#include "profl/encoding/fixed_point.hpp"
#include "profl/protocols/pauta.hpp"
#include "profl/protocols/sec_dis.hpp"
#include "profl/protocols/sec_rep.hpp"
#include "profl/protocols/sec_sel.hpp"
#include "profl/protocols/selection.hpp"

namespace profl::defense {
namespace {

template <class Vectors>
std::size_t check_shape(const Vectors& gradients) {
  if (gradients.size() < 2) throw std::invalid_argument("aggregate: needs at least two gradients");
  const std::size_t m = gradients.front().size();
  for (const auto& g : gradients)
    if (g.size() != m) throw std::invalid_argument("aggregate: dimension mismatch");
  return m;
}

}  // namespace

std::size_t survivor_count(std::size_t n) { return (n + 1) / 2; }

AggregationResult aggregate(protocols::Channel channel, std::span<const protocols::EncryptedVector> gradients) {
  const std::size_t m = check_shape(gradients);
  const std::size_t n = gradients.size();
  const auto& pk = channel.s1.pk;

  // distance sums; dis(i, i) = 0 is skipped
  std::vector<ahe::Ciphertext> sums(n, ahe::Ciphertext{1, pk.id});
  protocols::SecDisSession session(channel, gradients);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto d = session.distance(i, j);
      sums[i] = ahe::hom_add(pk, sums[i], d.value);
      sums[j] = ahe::hom_add(pk, sums[j], d.value);
    }
  }

  auto selection = protocols::sec_sel(channel, sums, survivor_count(n));

  std::vector<const protocols::EncryptedVector*> survivors;
  for (auto idx : selection.selected) survivors.push_back(&gradients[idx]);
  const auto reps = protocols::sec_rep_all(channel, survivors);

  AggregationResult out;
  out.aggregate.reserve(m);
  out.rejections.reserve(m);
  for (const auto& rep : reps) {
    out.aggregate.push_back(to_int64(encoding::signed_value(rep.median, pk.n)));
    out.rejections.push_back(static_cast<std::uint32_t>(rep.rejected));
  }
  out.survivors = std::move(selection.selected);
  out.distance_sums = std::move(selection.sums);
  out.distance_evaluations = session.evaluations();
  channel.fabric.require_idle();
  return out;
}

AggregationResult plaintext_oracle_aggregate(std::span<const FixedVector> gradients, Rng& rng,
                                             RepresentativeRule rule) {
  const std::size_t m = check_shape(gradients);
  const std::size_t n = gradients.size();

  AggregationResult out;
  out.distance_sums.assign(n, BigInt(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      __int128 d = 0;
      for (std::size_t k = 0; k < m; ++k) {
        const __int128 diff = static_cast<__int128>(gradients[i][k]) - gradients[j][k];
        d += diff * diff;
      }
      // split the 128-bit value into two 64-bit halves for GMP
      const BigInt high(static_cast<unsigned long>(static_cast<unsigned __int128>(d) >> 64));
      const BigInt low(static_cast<unsigned long>(static_cast<unsigned __int128>(d) & ~0UL));
      const BigInt dist = (high << 64) + low;
      out.distance_sums[i] += dist;
      out.distance_sums[j] += dist;
      ++out.distance_evaluations;
    }
  }
  out.survivors = protocols::select_smallest<BigInt>(out.distance_sums, survivor_count(n), rng);

  const std::size_t k = out.survivors.size();
  out.aggregate.reserve(m);
  out.rejections.reserve(m);
  std::vector<std::int64_t> column(k);
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t s = 0; s < k; ++s) column[s] = gradients[out.survivors[s]][t];
    if (rule == RepresentativeRule::PautaMedian) {
      // offsets to the first value mirror what S2 computes on blinded data
      std::vector<std::int64_t> offsets(k);
      for (std::size_t s = 0; s < k; ++s) offsets[s] = column[s] - column[0];
      const auto outcome = protocols::pauta_lower_median(offsets);
      out.aggregate.push_back(column[outcome.median_index]);
      out.rejections.push_back(static_cast<std::uint32_t>(outcome.rejected));
    } else {
      const __int128 total = std::accumulate(column.begin(), column.end(), __int128{0});
      out.aggregate.push_back(static_cast<std::int64_t>(
          std::nearbyint(static_cast<long double>(total) / static_cast<long double>(k))));
      out.rejections.push_back(0);
    }
  }
  return out;
}

FixedVector fedavg(std::span<const FixedVector> gradients) {
  const std::size_t m = check_shape(gradients);
  FixedVector out(m);
  for (std::size_t t = 0; t < m; ++t) {
    __int128 total = 0;
    for (const auto& g : gradients) total += g[t];
    out[t] = static_cast<std::int64_t>(
        std::nearbyint(static_cast<long double>(total) / static_cast<long double>(gradients.size())));
  }
  return out;
}

void write_report_header(std::ostream& out) { out << "round,survivors,total_rejections,rejections\n"; }

void write_report_row(std::ostream& out, std::uint32_t round, const AggregationResult& result) {
  out << round << ',';
  for (std::size_t i = 0; i < result.survivors.size(); ++i) out << (i ? " " : "") << result.survivors[i];
  const auto total = std::accumulate(result.rejections.begin(), result.rejections.end(), std::uint64_t{0});
  out << ',' << total << ',';
  for (std::size_t t = 0; t < result.rejections.size(); ++t) out << (t ? " " : "") << result.rejections[t];
  out << '\n';
}

}  // namespace profl::defense
