#pragma once

#include <vector>

#include "ugnn/common/mat.hpp"
#include "ugnn/common/rng.hpp"
#include "ugnn/graph/sampling.hpp"
#include "ugnn/graph/shift.hpp"

namespace ugnn::test {

/// Random symmetric weighted adjacency with zero diagonal; every off-diagonal
/// pair is present with the given density, weights in (0.2, 1.2).
inline Mat random_adjacency(int n, double density, RngStream& rng) {
  Mat a(n, n);
  bool any = false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < density) {
        const double w = 0.2 + rng.uniform();
        a.at(i, j) = w;
        a.at(j, i) = w;
        any = true;
      }
    }
  }
  if (!any && n >= 2) {
    a.at(0, 1) = 1.0;
    a.at(1, 0) = 1.0;
  }
  return a;
}

/// Random strictly-increasing kept set of size n_keep drawn from [0, n).
inline std::vector<int> random_kept(int n, int n_keep, RngStream& rng) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
    std::swap(all[i], all[j]);
  }
  std::vector<int> kept(all.begin(), all.begin() + n_keep);
  std::sort(kept.begin(), kept.end());
  return kept;
}

inline graph::NestedSampler sampler_from_kept(std::vector<int> kept, int n, int depth = 1) {
  graph::NestedSampler d;
  d.depth = depth;
  d.selector.n_in = n;
  d.selector.n_out = static_cast<int>(kept.size());
  d.selector.kept_indices = std::move(kept);
  d.selector.validate();
  return d;
}

inline Mat random_mat(int r, int c, RngStream& rng) { return rng.normal_mat(r, c); }

}  // namespace ugnn::test
