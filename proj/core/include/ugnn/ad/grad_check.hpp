#pragma once

#include <functional>
#include <map>
#include <string>

#include "ugnn/ad/param_store.hpp"
#include "ugnn/ad/tape.hpp"

namespace ugnn::ad {

/// A scalar function recorded on a tape from the current parameter values;
/// returns the loss node id.
using RecordedScalarFn = std::function<int(Tape&, const std::map<std::string, int>&)>;

/// Central finite-difference verification of reverse-mode gradients.
/// Perturbs every parameter coordinate by +/- step and compares against the
/// analytic gradient; returns the max relative error
/// |a - n| / max(1, |a|, |n|) for the caller to assert on.
double grad_check(ParameterStore& params, const RecordedScalarFn& f, double step);

}  // namespace ugnn::ad
