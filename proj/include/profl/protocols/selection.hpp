#pragma once

// Randomized selection (quickselect) of the k smallest keys.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "profl/common/random.hpp"

namespace profl::protocols {

/// Indices of the k smallest keys, ascending by index. Ties on equal keys go
/// to the lower index, so the result does not depend on the pivot sequence.
/// Expected O(n) comparisons.
template <class Key>
std::vector<std::size_t> select_smallest(std::span<const Key> keys, std::size_t k, Rng& rng) {
  const std::size_t n = keys.size();
  if (k > n) throw std::invalid_argument("select_smallest: k exceeds the number of keys");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (k == 0) return {};

  auto less = [&](std::size_t a, std::size_t b) {
    if (keys[a] < keys[b]) return true;
    if (keys[b] < keys[a]) return false;
    return a < b;
  };

  // invariant: the k smallest all lie in order[0, hi) and order[0, lo) are among them
  std::size_t lo = 0;
  std::size_t hi = n;
  while (hi - lo > 1) {
    const std::size_t pivot_pos = lo + rng.index_below(hi - lo);
    std::swap(order[pivot_pos], order[hi - 1]);
    const std::size_t pivot = order[hi - 1];
    std::size_t store = lo;
    for (std::size_t i = lo; i + 1 < hi; ++i)
      if (less(order[i], pivot)) std::swap(order[i], order[store++]);
    std::swap(order[store], order[hi - 1]);
    // order[store] now holds the pivot at its final rank
    if (store + 1 == k || store == k) {
      lo = hi = k;
      break;
    }
    if (store + 1 < k) {
      lo = store + 1;
    } else {
      hi = store;
    }
  }
  std::vector<std::size_t> selected(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(selected.begin(), selected.end());
  return selected;
}

}  // namespace profl::protocols
