#include "profl/protocols/pauta.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace profl::protocols {

PautaOutcome pauta_lower_median(std::span<const std::int64_t> values) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("pauta_lower_median: empty input");
  if (n > (std::size_t{1} << 20)) throw std::invalid_argument("pauta_lower_median: too many values");

  using Wide = __int128;
  Wide sum = 0;
  Wide sum_sq = 0;
  for (auto v : values) {
    if (v >= kPautaValueLimit || v <= -kPautaValueLimit)
      throw std::overflow_error("pauta_lower_median: value outside the exact-arithmetic range");
    sum += v;
    sum_sq += Wide(v) * v;
  }
  const Wide count = static_cast<Wide>(n);
  const Wide spread = 9 * (count * sum_sq - sum * sum);  // 9 * n^2 * sigma^2

  PautaOutcome out;
  for (std::size_t i = 0; i < n; ++i) {
    const Wide deviation = count * values[i] - sum;  // n * (x - mean)
    if (deviation * deviation > spread) {
      ++out.rejected;
    } else {
      out.kept.push_back(i);
    }
  }

  std::vector<std::size_t> sorted = out.kept;
  std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
    return values[a] != values[b] ? values[a] < values[b] : a < b;
  });
  out.median_index = sorted[(sorted.size() - 1) / 2];
  return out;
}

}  // namespace profl::protocols
