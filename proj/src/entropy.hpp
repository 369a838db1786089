#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace vru::detail {

// Entropy in bits from raw counts. Non-zero counts are summed in sorted order
// so the result depends only on the multiset of counts: a transposed joint
// table, or a marginal reused as a joint, gives bit-identical values.
inline double entropy_bits(std::vector<std::size_t> counts, std::size_t total) {
  std::erase(counts, std::size_t{0});
  std::sort(counts.begin(), counts.end());
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace vru::detail
