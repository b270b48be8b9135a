#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace profl::protocols {

struct PautaOutcome {
  std::vector<std::size_t> kept;  // ascending input indices inside mean +- 3 sigma
  std::size_t median_index = 0;   // input index of the lower median of the kept values
  std::size_t rejected = 0;
};

/// Magnitude limit for the integer statistics below.
inline constexpr std::int64_t kPautaValueLimit = std::int64_t{1} << 40;

/// 3-sigma (Pauta) rejection followed by the lower median of the survivors.
///
/// sigma is the population standard deviation. A value is dropped when
/// |x - mean| > 3 sigma, evaluated exactly as (n*x - S)^2 > 9 (n*Q - S^2) with
/// S = sum x and Q = sum x^2, so the outcome is shift invariant and bit-exact.
/// Equal values are ordered by input index when picking the median.
PautaOutcome pauta_lower_median(std::span<const std::int64_t> values);

}  // namespace profl::protocols
