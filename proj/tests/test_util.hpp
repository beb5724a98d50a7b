#pragma once

#include <random>
#include <vector>

#include "mpp/combinatorics.hpp"

namespace mpp::testutil {

// Random filling of a support, each entry uniform below its upper/left neighbours.
inline SkewPlanePartition random_pp(const SkewSupport& s, int cap, std::mt19937_64& rng) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(s.M));
  for (int i = 1; i <= s.M; ++i) {
    for (int j = s.mu.part(i) + 1; j <= s.N; ++j) {
      int hi = cap;
      if (s.contains(i - 1, j)) {
        const int c = j - s.mu.part(i - 1) - 1;
        hi = std::min(hi, rows[static_cast<std::size_t>(i - 2)][static_cast<std::size_t>(c)]);
      }
      if (s.contains(i, j - 1)) hi = std::min(hi, rows[static_cast<std::size_t>(i - 1)].back());
      std::uniform_int_distribution<int> d(0, hi);
      rows[static_cast<std::size_t>(i - 1)].push_back(d(rng));
    }
  }
  return SkewPlanePartition::from_grid(s, rows);
}

inline std::vector<SkewSupport> small_supports() {
  return {{1, 1, {}}, {2, 2, {}}, {3, 1, {1}}, {2, 3, {1}}, {3, 3, {2, 1}}};
}

}  // namespace mpp::testutil
