#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "ugnn/ad/grad_check.hpp"
#include "ugnn/ad/param_store.hpp"
#include "ugnn/ad/tape.hpp"
#include "ugnn/common/error.hpp"

using namespace ugnn;
using namespace ugnn::ad;

TEST_CASE("op shape contracts") {
  Tape tape;
  const int a = tape.leaf(Mat(2, 3));
  const int b = tape.leaf(Mat(3, 4));
  const int c = tape.matmul(a, b);
  CHECK(tape.value(c).rows == 2);
  CHECK(tape.value(c).cols == 4);

  const int r = tape.relu(tape.leaf(Mat{{-1, 2}}));
  CHECK(bitwise_equal(tape.value(r), Mat{{0, 2}}));

  const int cc = tape.concat_cols(tape.leaf(Mat(2, 3)), tape.leaf(Mat(2, 5)));
  CHECK(tape.value(cc).cols == 8);

  CHECK_THROWS_AS(tape.matmul(a, a), StructuralError);
  CHECK_THROWS_AS(tape.add(a, b), StructuralError);
}

TEST_CASE("backward reproduces the hand chain rule for mse(w x, y)") {
  Tape tape;
  const int w = tape.leaf(Mat{{1.0}}, true);
  const int x = tape.leaf(Mat{{2.0}});
  const int y = tape.leaf(Mat{{0.0}});
  const int loss = tape.mse(tape.matmul(w, x), y);
  tape.backward(loss);
  // d/dw (w*2)^2 = 2 * (w*2) * 2 = 8 at w = 1.
  CHECK(tape.grad(w).at(0, 0) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("parameters off the loss path get zero gradients") {
  Tape tape;
  const int used = tape.leaf(Mat{{3.0}}, true);
  const int unused = tape.leaf(Mat{{5.0}}, true);
  const int loss = tape.mse(used, tape.leaf(Mat{{0.0}}));
  tape.backward(loss);
  CHECK(tape.grad(used).at(0, 0) == doctest::Approx(6.0));  // d x^2 = 2x
  CHECK(tape.grad(unused).at(0, 0) == 0.0);
}

TEST_CASE("backward rejects non-scalar losses") {
  Tape tape;
  const int a = tape.leaf(Mat(2, 2), true);
  CHECK_THROWS_AS(tape.backward(a), ContractViolation);
}

TEST_CASE("non-finite results trip a numeric error") {
  Tape tape;
  const int a = tape.leaf(Mat{{1e308}});
  CHECK_THROWS_AS(tape.scalar_mul(a, 1e10), NumericError);
}

TEST_CASE("backward is deterministic: identical tapes give identical gradients") {
  auto run = [](RngStream rng) {
    Tape tape;
    const int a = tape.leaf(rng.normal_mat(4, 4), true);
    const int b = tape.leaf(rng.normal_mat(4, 4), true);
    const int y = tape.silu(tape.matmul(a, b));
    const int loss = tape.mse(y, tape.leaf(Mat(4, 4)));
    tape.backward(loss);
    return std::pair{tape.grad(a), tape.grad(b)};
  };
  const auto g1 = run(RngStream(99));
  const auto g2 = run(RngStream(99));
  CHECK(bitwise_equal(g1.first, g2.first));
  CHECK(bitwise_equal(g1.second, g2.second));
}

TEST_CASE("gradients are linear in the loss") {
  RngStream rng(5);
  const Mat av = rng.normal_mat(3, 3);
  const double ca = 2.5, cb = -1.25;

  auto grads_of = [&](double sa, double sb) {
    Tape tape;
    const int a = tape.leaf(av, true);
    const int f = tape.mse(tape.relu(a), tape.leaf(Mat::full(3, 3, 0.5)));
    const int g = tape.mse(tape.matmul(a, a), tape.leaf(Mat(3, 3)));
    const int loss = tape.add(tape.scalar_mul(f, sa), tape.scalar_mul(g, sb));
    tape.backward(loss);
    return tape.grad(a);
  };
  const Mat gf = grads_of(1.0, 0.0);
  const Mat gg = grads_of(0.0, 1.0);
  const Mat combined = grads_of(ca, cb);
  const Mat expected = add(scale(gf, ca), scale(gg, cb));
  CHECK(max_abs_diff(combined, expected) < 1e-12);
}

namespace {

/// Runs grad_check on a single-op computation ending in mse against a
/// constant target.
double op_grad_check(const RecordedScalarFn& f, ParameterStore& params) {
  return grad_check(params, f, 1e-6);
}

}  // namespace

TEST_CASE("grad_check validates every vocabulary op on random inputs") {
  const auto s = graph::build_shift(Mat{{0, 1, 0}, {1, 0, 0.5}, {0, 0.5, 0}}, true);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream rng(seed);
    {
      // matmul + add + add_row
      ParameterStore p;
      p.insert("A", rng.normal_mat(4, 3));
      p.insert("B", rng.normal_mat(3, 5));
      p.insert("C", rng.normal_mat(4, 5));
      p.insert("row", rng.normal_mat(1, 5));
      const Mat target = rng.normal_mat(4, 5);
      auto f = [&](Tape& t, const std::map<std::string, int>& id) {
        const int y = t.add_row(
            t.add(t.matmul(id.at("A"), id.at("B")), id.at("C")), id.at("row"));
        return t.mse(y, t.leaf(target));
      };
      CHECK(op_grad_check(f, p) < 1e-5);
    }
    {
      // scalar_mul + concat_cols + slice_cols
      ParameterStore p;
      p.insert("A", rng.normal_mat(3, 2));
      p.insert("B", rng.normal_mat(3, 4));
      const Mat target = rng.normal_mat(3, 3);
      auto f = [&](Tape& t, const std::map<std::string, int>& id) {
        const int cat = t.concat_cols(t.scalar_mul(id.at("A"), -1.75), id.at("B"));
        return t.mse(t.slice_cols(cat, 1, 4), t.leaf(target));
      };
      CHECK(op_grad_check(f, p) < 1e-5);
    }
    {
      // relu, inputs bounded away from the kink
      ParameterStore p;
      Mat a = rng.normal_mat(5, 5);
      for (auto& x : a.d) x += x >= 0.0 ? 0.2 : -0.2;
      p.insert("A", a);
      const Mat target = rng.normal_mat(5, 5);
      auto f = [&](Tape& t, const std::map<std::string, int>& id) {
        return t.mse(t.relu(id.at("A")), t.leaf(target));
      };
      CHECK(op_grad_check(f, p) < 1e-5);
    }
    {
      // silu
      ParameterStore p;
      p.insert("A", rng.normal_mat(4, 6));
      const Mat target = rng.normal_mat(4, 6);
      auto f = [&](Tape& t, const std::map<std::string, int>& id) {
        return t.mse(t.silu(id.at("A")), t.leaf(target));
      };
      CHECK(op_grad_check(f, p) < 1e-5);
    }
    {
      // layer_norm with learnable gain and bias
      ParameterStore p;
      p.insert("X", rng.normal_mat(4, 8));
      Mat gain = rng.normal_mat(1, 8);
      for (auto& x : gain.d) x = 1.0 + 0.3 * x;
      p.insert("gain", gain);
      p.insert("bias", rng.normal_mat(1, 8));
      const Mat target = rng.normal_mat(4, 8);
      auto f = [&](Tape& t, const std::map<std::string, int>& id) {
        return t.mse(t.layer_norm(id.at("X"), id.at("gain"), id.at("bias")), t.leaf(target));
      };
      CHECK(op_grad_check(f, p) < 1e-5);
    }
    {
      // mse with gradients flowing to both sides
      ParameterStore p;
      p.insert("A", rng.normal_mat(3, 3));
      p.insert("B", rng.normal_mat(3, 3));
      auto f = [&](Tape& t, const std::map<std::string, int>& id) {
        return t.mse(id.at("A"), id.at("B"));
      };
      CHECK(op_grad_check(f, p) < 1e-5);
    }
    {
      // row_select + zero_pad
      ParameterStore p;
      p.insert("A", rng.normal_mat(5, 3));
      const Mat target = rng.normal_mat(5, 3);
      auto f = [&](Tape& t, const std::map<std::string, int>& id) {
        const int sel = t.row_select(id.at("A"), {0, 2, 4});
        const int pad = t.zero_pad(sel, {0, 2, 4}, 5);
        return t.mse(pad, t.leaf(target));
      };
      CHECK(op_grad_check(f, p) < 1e-5);
    }
    {
      // sparse_matmul against a fixed shift operator
      ParameterStore p;
      p.insert("A", rng.normal_mat(3, 4));
      const Mat target = rng.normal_mat(3, 4);
      auto f = [&](Tape& t, const std::map<std::string, int>& id) {
        return t.mse(t.sparse_matmul(&s, id.at("A")), t.leaf(target));
      };
      CHECK(op_grad_check(f, p) < 1e-5);
    }
  }
}

TEST_CASE("grad_check on a quadratic is near-exact") {
  ParameterStore p;
  p.insert("x", Mat{{3.0}});
  auto f = [](Tape& t, const std::map<std::string, int>& id) {
    return t.mse(id.at("x"), t.leaf(Mat{{0.0}}));
  };
  CHECK(grad_check(p, f, 1e-6) < 1e-8);
}

TEST_CASE("grad_check on layer_norm + mse stays under 1e-5") {
  RngStream rng(77);
  ParameterStore p;
  p.insert("X", rng.normal_mat(4, 8));
  p.insert("gain", Mat::full(1, 8, 1.0));
  p.insert("bias", Mat(1, 8));
  const Mat target = rng.normal_mat(4, 8);
  auto f = [&](Tape& t, const std::map<std::string, int>& id) {
    return t.mse(t.layer_norm(id.at("X"), id.at("gain"), id.at("bias")), t.leaf(target));
  };
  CHECK(grad_check(p, f, 1e-6) < 1e-5);
}

TEST_CASE("grad_check of a constant function is exactly zero") {
  ParameterStore p;
  p.insert("x", Mat{{1.5}});
  auto f = [](Tape& t, const std::map<std::string, int>&) {
    return t.mse(t.leaf(Mat{{2.0}}), t.leaf(Mat{{2.0}}));
  };
  CHECK(grad_check(p, f, 1e-6) == 0.0);
}

TEST_CASE("grad_check rejects steps outside [1e-8, 1e-4]") {
  ParameterStore p;
  p.insert("x", Mat{{1.0}});
  auto f = [](Tape& t, const std::map<std::string, int>& id) {
    return t.mse(id.at("x"), t.leaf(Mat{{0.0}}));
  };
  CHECK_THROWS_AS(grad_check(p, f, 1e-2), ArgumentError);
}

TEST_CASE("parameter store iterates lexicographically and rejects duplicates") {
  ParameterStore p;
  p.insert("b", Mat(1, 1));
  p.insert("a", Mat(1, 1));
  p.insert("c", Mat(1, 1));
  std::vector<std::string> names;
  for (const auto& [name, t] : p) names.push_back(name);
  CHECK(names == std::vector<std::string>{"a", "b", "c"});
  CHECK_THROWS_AS(p.insert("a", Mat(1, 1)), ContractViolation);
}
