#pragma once

#include "ugnn/common/mat.hpp"

namespace ugnn::ad {

/// A dense value that may participate in differentiation. node_id is the
/// handle of the tape node holding this value, -1 while unbound.
struct Tensor {
  Mat value;
  bool requires_grad = false;
  int node_id = -1;

  Tensor() = default;
  explicit Tensor(Mat v, bool rg = false) : value(std::move(v)), requires_grad(rg) {}
};

}  // namespace ugnn::ad
