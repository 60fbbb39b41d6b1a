#include "ugnn/ad/grad_check.hpp"

#include <cmath>

#include "ugnn/common/error.hpp"

namespace ugnn::ad {

namespace {

double eval(ParameterStore& params, const RecordedScalarFn& f) {
  Tape tape;
  auto ids = params.bind(tape);
  const int loss = f(tape, ids);
  return tape.value(loss).at(0, 0);
}

}  // namespace

double grad_check(ParameterStore& params, const RecordedScalarFn& f, double step) {
  if (step < 1e-8 || step > 1e-4) {
    throw ArgumentError("grad_check: step must lie in [1e-8, 1e-4]");
  }

  GradMap analytic;
  {
    Tape tape;
    auto ids = params.bind(tape);
    const int loss = f(tape, ids);
    tape.backward(loss);
    analytic = params.collect_grads(tape, ids);
  }

  double max_err = 0.0;
  for (auto& [name, tensor_unused] : analytic) {
    Mat& value = params.at(name);
    const Mat& ga = analytic.at(name);
    for (std::size_t i = 0; i < value.d.size(); ++i) {
      const double saved = value.d[i];
      value.d[i] = saved + step;
      const double up = eval(params, f);
      value.d[i] = saved - step;
      const double down = eval(params, f);
      value.d[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = ga.d[i];
      const double err = std::fabs(a - numeric) / std::max({1.0, std::fabs(a), std::fabs(numeric)});
      max_err = std::max(max_err, err);
    }
  }
  return max_err;
}

}  // namespace ugnn::ad
