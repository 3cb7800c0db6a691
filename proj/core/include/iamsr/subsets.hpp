#pragma once

#include <cstddef>
#include <vector>

namespace iamsr {

/// Calls fn(indices) for every size-r subset of {0, ..., n-1} in
/// lexicographic order. fn returns false to stop early; the function then
/// returns false as well.
template <typename Fn>
bool for_each_subset(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return true;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    if (!fn(static_cast<const std::vector<std::size_t>&>(idx))) return false;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace iamsr
