#pragma once

// Composite robust aggregation: pairwise distances, selection of the
// ceil(n/2) gradients with the smallest distance sums, then a per-dimension
// 3-sigma filtered lower median over the survivors.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "profl/common/bigint.hpp"
#include "profl/common/random.hpp"
#include "profl/protocols/channel.hpp"

namespace profl::defense {

using FixedVector = std::vector<std::int64_t>;

struct AggregationResult {
  FixedVector aggregate;                  // signed fixed-point value per dimension
  std::vector<std::size_t> survivors;     // ascending user indices
  std::vector<std::uint32_t> rejections;  // per dimension
  std::vector<BigInt> distance_sums;      // per user
  std::size_t distance_evaluations = 0;
};

/// How survivors are reduced to one value per dimension.
enum class RepresentativeRule {
  PautaMedian,   // the full defense
  SurvivorMean,  // Multi-Krum only (ablation)
};

std::size_t survivor_count(std::size_t n);

/// Encrypted pipeline run by S1 and S2 over the channel.
AggregationResult aggregate(protocols::Channel channel, std::span<const protocols::EncryptedVector> gradients);

/// The same selection and representative logic on plaintext fixed-point
/// vectors. Output is bit-identical to `aggregate` for in-range inputs.
AggregationResult plaintext_oracle_aggregate(std::span<const FixedVector> gradients, Rng& rng,
                                             RepresentativeRule rule = RepresentativeRule::PautaMedian);

/// Unweighted mean with no defense, rounded to nearest.
FixedVector fedavg(std::span<const FixedVector> gradients);

/// One line per round: round, survivors (space separated), total rejections,
/// then the per-dimension rejection counts.
void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, std::uint32_t round, const AggregationResult& result);

}  // namespace profl::defense
