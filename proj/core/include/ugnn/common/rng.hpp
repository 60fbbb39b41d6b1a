#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "ugnn/common/mat.hpp"

namespace ugnn {

/// Deterministic random stream. Streams derived from the same base seed with
/// distinct stream indices are independent for practical purposes, so work
/// split across streams is reproducible regardless of evaluation order.
/// Normal draws avoid cached spare values; the full state is the engine state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();                   // (0, 1)
  double normal();                    // standard normal, Box-Muller without cache
  std::uint64_t uniform_int(std::uint64_t bound);  // [0, bound)

  Mat normal_mat(int rows, int cols);
  void fill_normal(Mat& m);

  /// Serializable engine state, whitespace-separated decimal words.
  std::string state() const;
  void restore(const std::string& state);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 step; used for seed derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// Collapses (seed, tag) into a fresh seed for a derived stream family.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace ugnn
