#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "ugnn/ad/grad_check.hpp"
#include "ugnn/common/error.hpp"
#include "ugnn/model/conv.hpp"
#include "ugnn/model/ugnn.hpp"

using namespace ugnn;
using namespace ugnn::model;

namespace {

SamplerSet make_sampler_set(int n, const std::vector<std::vector<int>>& kept_per_level) {
  SamplerSet set;
  graph::SelectionMatrix prev = graph::SelectionMatrix::identity(n);
  set.nested.push_back(graph::NestedSampler::identity(n));
  int depth = 0;
  for (const auto& kept : kept_per_level) {
    graph::SelectionMatrix abs;
    abs.n_in = n;
    abs.n_out = static_cast<int>(kept.size());
    abs.kept_indices = kept;
    abs.validate();
    set.level.push_back(graph::relative_selection(prev, abs));
    ++depth;
    graph::NestedSampler d;
    d.depth = depth;
    d.selector = abs;
    set.nested.push_back(d);
    prev = abs;
  }
  return set;
}

UGNNConfig small_config(int n, int depth, int layers, int taps, int f0, int cond, int target) {
  UGNNConfig cfg;
  cfg.depth = depth;
  cfg.layers_per_block = layers;
  cfg.taps.assign(layers, taps);
  cfg.gamma = 1;
  cfg.feature_widths.resize(depth + 1);
  for (int b = 0; b <= depth; ++b) cfg.feature_widths[b] = f0 >> b;
  cfg.node_counts.assign(depth + 1, n);
  cfg.activation = Activation::silu;
  cfg.normalization = Normalization::layer;
  cfg.conditioning_width = cond;
  cfg.target_width = target;
  return cfg;
}

}  // namespace

TEST_CASE("time embedding at t = 0 is [0..0, 1..1]") {
  const Mat e = time_embedding(0, 4, 3);
  for (int r = 0; r < 3; ++r) {
    CHECK(e.at(r, 0) == 0.0);
    CHECK(e.at(r, 1) == 0.0);
    CHECK(e.at(r, 2) == 1.0);
    CHECK(e.at(r, 3) == 1.0);
  }
}

TEST_CASE("time embedding frequencies follow the 10000 base") {
  const Mat e = time_embedding(1, 4, 2);
  // omega_1 = 1, omega_2 = 10000^{-1/2} = 0.01
  CHECK(e.at(0, 0) == doctest::Approx(0.8414709848078965).epsilon(1e-14));
  CHECK(e.at(0, 1) == doctest::Approx(0.009999833334166664).epsilon(1e-14));
  CHECK(e.at(0, 2) == doctest::Approx(0.5403023058681398).epsilon(1e-14));
  CHECK(e.at(0, 3) == doctest::Approx(0.9999500004166653).epsilon(1e-14));
  // All rows identical.
  const Mat e2 = time_embedding(7, 8, 5);
  for (int r = 1; r < 5; ++r)
    for (int j = 0; j < 8; ++j) CHECK(e2.at(r, j) == e2.at(0, j));
}

TEST_CASE("time embedding rejects odd dimensions") {
  CHECK_THROWS_AS(time_embedding(1, 3, 2), ArgumentError);
  CHECK_THROWS_AS(time_embedding(-1, 4, 2), ArgumentError);
}

TEST_CASE("sampled conv reproduces the hand example") {
  // S = [[0,1],[1,0]], V = [[1],[0]], K = 1, H_0 = H_1 = [1], relu, no norm.
  const auto s = graph::build_shift(Mat{{0, 1}, {1, 0}}, false);
  const auto d = graph::NestedSampler::identity(2);
  ConvSpec spec;
  spec.gamma = 1;
  spec.activation = Activation::relu;
  spec.normalization = Normalization::none;
  const std::vector<Mat> taps = {Mat{{1.0}}, Mat{{1.0}}};
  const Mat v{{1.0}, {0.0}};
  const Mat out = sampled_graph_conv(v, s, d, taps, spec, ConvViewpoint::zero_padded);
  CHECK(bitwise_equal(out, Mat{{1.0}, {1.0}}));
  const Mat out2 = sampled_graph_conv(v, s, d, taps, spec, ConvViewpoint::reduced);
  CHECK(max_abs_diff(out, out2) == 0.0);
}

TEST_CASE("identity filter conv is the identity map") {
  // K = 0, H_0 = I, identity activation: the layer passes the signal through.
  RngStream rng(3);
  const auto s = graph::build_shift(test::random_adjacency(5, 0.5, rng), true);
  const auto d = graph::NestedSampler::identity(5);
  ConvSpec spec;
  spec.activation = Activation::identity;
  const Mat v = rng.normal_mat(5, 3);
  const Mat out = sampled_graph_conv(v, s, d, {Mat::identity(3)}, spec,
                                     ConvViewpoint::zero_padded);
  CHECK(bitwise_equal(out, v));
}

TEST_CASE("stacked projection filter recovers the first half of a concat") {
  // H_0 = [I; 0] picks out y from [y; x].
  RngStream rng(4);
  const auto s = graph::build_shift(test::random_adjacency(4, 0.6, rng), true);
  const auto d = graph::NestedSampler::identity(4);
  const Mat y = rng.normal_mat(4, 2);
  const Mat x = rng.normal_mat(4, 2);
  Mat h0(4, 2);
  h0.at(0, 0) = 1.0;
  h0.at(1, 1) = 1.0;
  ConvSpec spec;
  spec.activation = Activation::identity;
  const Mat out = sampled_graph_conv(concat_cols(y, x), s, d, {h0}, spec,
                                     ConvViewpoint::zero_padded);
  CHECK(bitwise_equal(out, y));
}

TEST_CASE("conv viewpoints agree on random strided sampled instances") {
  RngStream rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_int(27));
    const auto s = graph::build_shift(test::random_adjacency(n, 0.4, rng), true);
    const int keep = 1 + static_cast<int>(rng.uniform_int(n));
    const auto d = test::sampler_from_kept(test::random_kept(n, keep, rng), n);
    const int k_max = static_cast<int>(rng.uniform_int(4));
    const int w_in = 1 + static_cast<int>(rng.uniform_int(4));
    const int w_out = 1 + static_cast<int>(rng.uniform_int(4));
    std::vector<Mat> taps;
    for (int k = 0; k <= k_max; ++k) taps.push_back(rng.normal_mat(w_in, w_out));
    ConvSpec spec;
    spec.gamma = 1 + static_cast<int>(rng.uniform_int(3));
    spec.activation = Activation::silu;
    const Mat v = rng.normal_mat(keep, w_in);
    const Mat a = sampled_graph_conv(v, s, d, taps, spec, ConvViewpoint::reduced);
    const Mat b = sampled_graph_conv(v, s, d, taps, spec, ConvViewpoint::zero_padded);
    CHECK(max_abs_diff(a, b) < 1e-10);
  }
}

TEST_CASE("recorded conv matches the pure zero-padded evaluation") {
  RngStream rng(31);
  const int n = 9;
  const auto s = graph::build_shift(test::random_adjacency(n, 0.4, rng), true);
  const auto d = test::sampler_from_kept(test::random_kept(n, 6, rng), n);
  std::vector<Mat> taps = {rng.normal_mat(3, 2), rng.normal_mat(3, 2), rng.normal_mat(3, 2)};
  Mat gain = Mat::full(1, 2, 1.1);
  Mat bias = Mat::full(1, 2, -0.05);
  ConvSpec spec;
  spec.gamma = 2;
  spec.activation = Activation::silu;
  spec.normalization = Normalization::layer;
  const Mat v = rng.normal_mat(6, 3);

  const Mat pure = sampled_graph_conv(v, s, d, taps, spec, ConvViewpoint::zero_padded,
                                      &gain, &bias);
  ad::Tape tape;
  std::vector<int> tap_ids;
  for (const auto& h : taps) tap_ids.push_back(tape.leaf(h));
  const int out = record_sampled_conv(tape, tape.leaf(v), &s, d, tap_ids, spec,
                                      tape.leaf(gain), tape.leaf(bias));
  CHECK(bitwise_equal(tape.value(out), pure));
}

TEST_CASE("input embedding concatenates the two halves") {
  const int n = 4, f0 = 8, cond = 3;
  auto cfg = small_config(n, 1, 1, 1, f0, cond, 2);
  const auto s = graph::build_shift(Mat{{0, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}},
                                    true);
  UGnn model(cfg, &s);
  model.init_params(7);

  RngStream rng(9);
  const Mat x0 = rng.normal_mat(n, f0);
  const Mat u = rng.normal_mat(n, cond);
  ad::Tape tape;
  auto pid = model.params().bind(tape);
  const int v0 = model.record_input_embedding(tape, pid, tape.leaf(x0), 5, tape.leaf(u));
  CHECK(tape.value(v0).cols == f0);

  // Hand assembly of Eq. (embedding): concat(embed_x(x0) + te, embed_u(u)).
  const auto& p = model.params();
  Mat left = matmul(x0, p.at("embed_x.W"));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < f0 / 2; ++j) left.at(i, j) += p.at("embed_x.b").at(0, j);
  left = add(left, time_embedding(5, f0 / 2, n));
  Mat right = matmul(u, p.at("embed_u.W"));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < f0 / 2; ++j) right.at(i, j) += p.at("embed_u.b").at(0, j);
  CHECK(max_abs_diff(tape.value(v0), concat_cols(left, right)) < 1e-14);
}

TEST_CASE("input embedding with zero maps shows the raw time pattern") {
  const int n = 3, f0 = 8;
  auto cfg = small_config(n, 1, 1, 1, f0, 2, 2);
  const auto s = graph::build_shift(Mat{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, true);
  UGnn model(cfg, &s);
  model.init_params(1);
  for (auto& [name, t] : model.params()) {
    for (auto& x : model.params().at(name).d) x = 0.0;
  }
  ad::Tape tape;
  auto pid = model.params().bind(tape);
  const int v0 = model.record_input_embedding(tape, pid, tape.leaf(Mat(n, f0)), 0,
                                              tape.leaf(Mat(n, 2)));
  const Mat& v = tape.value(v0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < f0 / 4; ++j) CHECK(v.at(i, j) == 0.0);                    // sin(0)
    for (int j = f0 / 4; j < f0 / 2; ++j) CHECK(v.at(i, j) == 1.0);               // cos(0)
    for (int j = f0 / 2; j < f0; ++j) CHECK(v.at(i, j) == 0.0);                   // zero Y_U
  }
}

TEST_CASE("missing conditioning input is a contract violation") {
  auto cfg = small_config(3, 1, 1, 1, 8, 2, 2);
  const auto s = graph::build_shift(Mat{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, true);
  UGnn model(cfg, &s);
  model.init_params(1);
  const Mat x(3, 2);
  CHECK_THROWS_AS(model.predict(x, 1, nullptr), ContractViolation);
}

TEST_CASE("forward output shape equals input shape via the reference sizes") {
  // Reference configuration: B = 3, L = 2, K = 2, F = 64/32/16/8,
  // N = 100/100/80/64 (no downsampling at level 1, then 0.8 twice).
  RngStream rng(55);
  const int n = 100;
  const auto s = graph::build_shift(test::random_adjacency(n, 0.15, rng), true);
  UGNNConfig cfg;
  cfg.depth = 3;
  cfg.layers_per_block = 2;
  cfg.taps = {2, 2};
  cfg.gamma = 1;
  cfg.feature_widths = {64, 32, 16, 8};
  cfg.node_counts = {100, 100, 80, 64};
  cfg.conditioning_width = 40;
  cfg.target_width = 10;
  UGnn model(cfg, &s);
  model.init_params(2);

  CHECK(model.samplers().nested[1].n_sub() == 100);
  CHECK(model.samplers().nested[2].n_sub() == 80);
  CHECK(model.samplers().nested[3].n_sub() == 64);

  const Mat x = rng.normal_mat(n, 10);
  const Mat u = rng.normal_mat(n, 40);
  const Mat out = model.predict(x, 250, &u);
  CHECK(out.rows == n);
  CHECK(out.cols == 10);
  CHECK(out.all_finite());
}

TEST_CASE("zeroed parameters produce zero output") {
  RngStream rng(66);
  const int n = 6;
  const auto s = graph::build_shift(test::random_adjacency(n, 0.5, rng), true);
  auto cfg = small_config(n, 2, 1, 2, 8, 4, 3);
  UGnn model(cfg, &s);
  model.init_params(3);
  for (auto& [name, t] : model.params()) {
    for (auto& x : model.params().at(name).d) x = 0.0;
  }
  const Mat x = rng.normal_mat(n, 3);
  const Mat u = rng.normal_mat(n, 4);
  const Mat out = model.predict(x, 4, &u);
  for (double v : out.d) CHECK(v == 0.0);
}

namespace {

/// Plain stacked-filter forward (no samplers, gamma = 1) computed with dense
/// matrix powers; an independent route for the strided implementation.
Mat plain_forward(const UGnn& model, const Mat& x, int t, const Mat& u) {
  const auto& cfg = model.config();
  const auto& p = model.params();
  const Mat sd = model.shift().to_dense();
  const int n = cfg.n_nodes();

  auto linear = [&](const Mat& in, const std::string& name) {
    Mat out = matmul(in, p.at(name + ".W"));
    const Mat& b = p.at(name + ".b");
    for (int i = 0; i < out.rows; ++i)
      for (int j = 0; j < out.cols; ++j) out.at(i, j) += b.at(0, j);
    return out;
  };
  auto conv_stack = [&](Mat v, const std::string& prefix) {
    for (int l = 0; l < cfg.layers_per_block; ++l) {
      const std::string lp = prefix + ".conv" + std::to_string(l);
      Mat acc;
      for (int k = 0; k <= cfg.taps[l]; ++k) {
        const Mat term = matmul(matmul(matpow(sd, k), v), p.at(lp + ".H" + std::to_string(k)));
        acc = k == 0 ? term : add(acc, term);
      }
      if (cfg.normalization == Normalization::layer) {
        acc = layer_norm_eval(acc, p.at(lp + ".ln_g"), p.at(lp + ".ln_b"));
      }
      v = apply_activation(acc, cfg.activation);
    }
    return v;
  };

  Mat v = linear(x, "read_in");
  Mat left = add(linear(v, "embed_x"), time_embedding(t, cfg.f0() / 2, n));
  Mat right = cfg.conditioning_width > 0 ? linear(u, "embed_u") : Mat(n, cfg.f0() / 2);
  v = concat_cols(left, right);

  std::vector<Mat> skips(cfg.depth + 1);
  for (int b = 1; b <= cfg.depth; ++b) {
    v = conv_stack(v, "enc." + std::to_string(b));
    skips[b] = v;
  }
  Mat y = linear(v, "bottleneck.0");
  y = apply_activation(y, cfg.activation);
  y = linear(y, "bottleneck.1");
  for (int b = cfg.depth; b >= 1; --b) {
    y = conv_stack(concat_cols(y, skips[b]), "dec." + std::to_string(b));
  }
  return linear(y, "read_out");
}

}  // namespace

TEST_CASE("with identity samplers and gamma = 1 the forward equals the plain network") {
  RngStream rng(77);
  const int n = 7;
  const auto s = graph::build_shift(test::random_adjacency(n, 0.5, rng), true);
  auto cfg = small_config(n, 2, 2, 2, 8, 5, 4);
  UGnn model(cfg, &s);
  model.init_params(5);
  const Mat x = rng.normal_mat(n, 4);
  const Mat u = rng.normal_mat(n, 5);
  const Mat fast = model.predict(x, 13, &u);
  const Mat plain = plain_forward(model, x, 13, u);
  CHECK(max_abs_diff(fast, plain) < 1e-12);
}

TEST_CASE("forward is permutation equivariant") {
  RngStream rng(88);
  const int n = 8;
  const Mat adj = test::random_adjacency(n, 0.5, rng);
  const auto s = graph::build_shift(adj, false);

  const std::vector<std::vector<int>> kept_levels = {{0, 1, 2, 4, 5, 7}, {1, 2, 5, 7}};
  auto cfg = small_config(n, 2, 1, 2, 8, 3, 2);
  cfg.node_counts = {8, 6, 4};
  UGnn model(cfg, &s, make_sampler_set(n, kept_levels));
  model.init_params(9);

  // Permutation p: new index of original node i.
  const std::vector<int> p = {3, 6, 0, 7, 2, 5, 1, 4};
  Mat padj(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) padj.at(p[i], p[j]) = adj.at(i, j);
  const auto sp = graph::build_shift(padj, false);
  std::vector<std::vector<int>> pkept;
  for (const auto& kept : kept_levels) {
    std::vector<int> mapped;
    for (int i : kept) mapped.push_back(p[i]);
    std::sort(mapped.begin(), mapped.end());
    pkept.push_back(std::move(mapped));
  }
  UGnn pmodel(cfg, &sp, make_sampler_set(n, pkept));
  pmodel.init_params(9);
  pmodel.set_params(model.params());

  const Mat x = rng.normal_mat(n, 2);
  const Mat u = rng.normal_mat(n, 3);
  Mat px(n, 2), pu(n, 3);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 2; ++j) px.at(p[i], j) = x.at(i, j);
    for (int j = 0; j < 3; ++j) pu.at(p[i], j) = u.at(i, j);
  }

  const Mat out = model.predict(x, 3, &u);
  const Mat pout = pmodel.predict(px, 3, &pu);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(pout.at(p[i], j) == doctest::Approx(out.at(i, j)).epsilon(1e-9));
    }
}

TEST_CASE("full model gradient passes the finite-difference check (compact)") {
  RngStream rng(99);
  const int n = 5;
  const auto s = graph::build_shift(test::random_adjacency(n, 0.6, rng), true);
  auto cfg = small_config(n, 1, 1, 1, 4, 2, 2);
  cfg.node_counts = {5, 4};
  UGnn model(cfg, &s);
  model.init_params(11);

  const Mat x = rng.normal_mat(n, 2);
  const Mat u = rng.normal_mat(n, 2);
  const Mat target = rng.normal_mat(n, 2);
  auto f = [&](ad::Tape& t, const std::map<std::string, int>& pid) {
    const int out = model.record_forward(t, pid, t.leaf(x), 3, t.leaf(u));
    return t.mse(out, t.leaf(target));
  };
  CHECK(ad::grad_check(model.params(), f, 1e-6) < 1e-5);
}

TEST_CASE("config validation rejects bad shape plans") {
  auto cfg = small_config(4, 2, 1, 1, 8, 2, 2);
  cfg.feature_widths = {8, 8, 4};  // not strictly decreasing
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = small_config(4, 2, 1, 1, 6, 2, 2);  // F_0 not divisible by 4
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = small_config(4, 2, 1, 1, 8, 2, 2);
  cfg.node_counts = {4, 5, 4};  // increasing
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
}
