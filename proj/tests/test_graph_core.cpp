#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "ugnn/common/error.hpp"
#include "ugnn/graph/sampling.hpp"
#include "ugnn/graph/shift.hpp"

using namespace ugnn;
using namespace ugnn::graph;

TEST_CASE("build_shift keeps an already-normalized two-cycle") {
  const auto s = build_shift(Mat{{0, 1}, {1, 0}}, true);
  CHECK(s.entry(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.entry(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.spectral_norm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("build_shift divides by the spectral norm") {
  // Eigenvalues are +-2, so entries halve.
  const auto s = build_shift(Mat{{0, 2}, {2, 0}}, true);
  CHECK(s.entry(0, 1) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("build_shift zeroes the diagonal without normalization") {
  const auto s = build_shift(Mat{{5, 1}, {1, 5}}, false);
  CHECK(s.entry(0, 0) == 0.0);
  CHECK(s.entry(1, 1) == 0.0);
  CHECK(s.entry(0, 1) == 1.0);
}

TEST_CASE("build_shift rejects bad inputs") {
  CHECK_THROWS_AS(build_shift(Mat(2, 3), true), StructuralError);
  CHECK_THROWS_AS(build_shift(Mat{{0, 1}, {2, 0}}, true), StructuralError);
  CHECK_THROWS_AS(build_shift(Mat(3, 3), true), DataError);  // all-zero graph
  Mat nan(2, 2);
  nan.at(0, 1) = std::nan("");
  CHECK_THROWS_AS(build_shift(nan, true), StructuralError);
}

TEST_CASE("normalized shift has spectral norm at most 1 + 1e-12") {
  RngStream rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_int(25));
    const auto adj = test::random_adjacency(n, 0.4, rng);
    const auto s = build_shift(adj, true);
    CHECK(s.spectral_norm() <= 1.0 + 1e-12);
    CHECK(power_iteration_norm(s.to_dense()) <= 1.0 + 1e-12);
  }
}

TEST_CASE("build_shift is permutation covariant") {
  RngStream rng(7);
  const int n = 9;
  const auto adj = test::random_adjacency(n, 0.5, rng);
  // Rotate labels by 3.
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = (i + 3) % n;
  Mat padj(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) padj.at(perm[i], perm[j]) = adj.at(i, j);

  const auto s = build_shift(adj, true).to_dense();
  const auto sp = build_shift(padj, true).to_dense();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CHECK(sp.at(perm[i], perm[j]) == doctest::Approx(s.at(i, j)).epsilon(1e-9));
    }
}

TEST_CASE("sparse and dense application paths agree bitwise") {
  RngStream rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_int(20));
    const auto s = build_shift(test::random_adjacency(n, 0.35, rng), true);
    REQUIRE(s.has_dense());
    const Mat x = test::random_mat(n, 5, rng);
    CHECK(bitwise_equal(s.apply(x), s.apply_dense(x)));
  }
}

TEST_CASE("select_by_degree drops the smallest degree, larger index first on ties") {
  // Path 0-1-2: degrees 1, 2, 1; the tie drops node 2.
  const auto s = build_shift(Mat{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, false);
  const auto sel = select_by_degree(s, 2);
  CHECK(sel.kept_indices == std::vector<int>{0, 1});
}

TEST_CASE("select_by_degree with n_keep = n is the identity") {
  RngStream rng(3);
  const auto s = build_shift(test::random_adjacency(6, 0.5, rng), false);
  const auto sel = select_by_degree(s, 6);
  CHECK(sel.kept_indices == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("select_by_degree keeps the star center") {
  const auto s =
      build_shift(Mat{{0, 1, 1, 1}, {1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}}, false);
  const auto sel = select_by_degree(s, 1);
  CHECK(sel.kept_indices == std::vector<int>{0});
}

TEST_CASE("select_by_degree rejects out-of-range n_keep") {
  const auto s = build_shift(Mat{{0, 1}, {1, 0}}, false);
  CHECK_THROWS_AS(select_by_degree(s, 0), ArgumentError);
  CHECK_THROWS_AS(select_by_degree(s, 3), ArgumentError);
}

TEST_CASE("selection matrices satisfy the row and column sum constraints") {
  RngStream rng(5);
  const auto s = build_shift(test::random_adjacency(10, 0.4, rng), false);
  const auto sel = select_by_degree(s, 6);
  const Mat c = sel.to_dense();
  for (int r = 0; r < c.rows; ++r) {
    double sum = 0.0;
    for (int j = 0; j < c.cols; ++j) sum += c.at(r, j);
    CHECK(sum == 1.0);
  }
  for (int j = 0; j < c.cols; ++j) {
    double sum = 0.0;
    for (int r = 0; r < c.rows; ++r) sum += c.at(r, j);
    CHECK(sum <= 1.0);
  }
}

TEST_CASE("compose_nested multiplies the selection chain") {
  SelectionMatrix c1{3, 4, {0, 1, 3}};
  SelectionMatrix c2{2, 3, {0, 2}};
  const auto d = compose_nested({c1, c2}, 4);
  CHECK(d.depth == 2);
  CHECK(d.selector.kept_indices == std::vector<int>{0, 3});

  // Matches the explicit binary matrix product C2 * C1.
  const Mat prod = matmul(c2.to_dense(), c1.to_dense());
  CHECK(bitwise_equal(prod, d.selector.to_dense()));
}

TEST_CASE("compose_nested of a single selection is that selection") {
  SelectionMatrix c1{2, 5, {1, 4}};
  const auto d = compose_nested({c1}, 5);
  CHECK(d.depth == 1);
  CHECK(d.selector.kept_indices == c1.kept_indices);
}

TEST_CASE("compose_nested of nothing is the identity at depth 0") {
  const auto d = compose_nested({}, 4);
  CHECK(d.depth == 0);
  CHECK(d.is_identity());
  CHECK(d.selector.kept_indices == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("compose_nested rejects broken dimension chains") {
  SelectionMatrix c1{3, 4, {0, 1, 3}};
  SelectionMatrix bad{2, 5, {0, 2}};
  CHECK_THROWS_AS(compose_nested({c1, bad}, 4), StructuralError);
}

TEST_CASE("zero_pad places rows at their original indices") {
  const auto d = test::sampler_from_kept({0, 3}, 4);
  const Mat padded = zero_pad(d, Mat{{1}, {2}});
  CHECK(bitwise_equal(padded, Mat{{1}, {0}, {0}, {2}}));
}

TEST_CASE("zero_pad and downsample are identities for the identity sampler") {
  const auto d = NestedSampler::identity(3);
  const Mat x{{1, 2}, {3, 4}, {5, 6}};
  CHECK(bitwise_equal(zero_pad(d, x), x));
  CHECK(bitwise_equal(downsample(d, x), x));
}

TEST_CASE("downsample extracts the kept rows") {
  const auto d = test::sampler_from_kept({0, 3}, 4);
  CHECK(bitwise_equal(downsample(d, Mat{{1}, {9}, {9}, {2}}), Mat{{1}, {2}}));
}

TEST_CASE("shape mismatches raise structural errors") {
  const auto d = test::sampler_from_kept({0, 3}, 4);
  CHECK_THROWS_AS(zero_pad(d, Mat(3, 1)), StructuralError);
  CHECK_THROWS_AS(downsample(d, Mat(5, 1)), StructuralError);
}

TEST_CASE("downsample is a left inverse of zero_pad and D D^T = I") {
  RngStream rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_int(20));
    const int keep = 1 + static_cast<int>(rng.uniform_int(n));
    const auto d = test::sampler_from_kept(test::random_kept(n, keep, rng), n);
    const Mat x = test::random_mat(keep, 3, rng);
    CHECK(bitwise_equal(downsample(d, zero_pad(d, x)), x));

    const Mat dd = d.selector.to_dense();
    CHECK(bitwise_equal(matmul(dd, transpose(dd)), Mat::identity(keep)));

    // D^T D is a 0/1 diagonal with trace N_b.
    const Mat proj = matmul(transpose(dd), dd);
    double trace = 0.0;
    for (int i = 0; i < n; ++i) {
      trace += proj.at(i, i);
      for (int j = 0; j < n; ++j) {
        if (i != j) CHECK(proj.at(i, j) == 0.0);
        else CHECK((proj.at(i, i) == 0.0 || proj.at(i, i) == 1.0));
      }
    }
    CHECK(trace == static_cast<double>(keep));

    // zero_pad(downsample(x)) projects onto the kept coordinates.
    const Mat full = test::random_mat(n, 2, rng);
    const Mat projected = zero_pad(d, downsample(d, full));
    CHECK(bitwise_equal(projected, matmul(proj, full)));
  }
}

TEST_CASE("reduced_shift with identity sampler and gamma=1, k=1 is S") {
  RngStream rng(17);
  const auto s = build_shift(test::random_adjacency(8, 0.4, rng), true);
  const auto d = NestedSampler::identity(8);
  CHECK(max_abs_diff(reduced_shift(d, s, 1, 1), s.to_dense()) == 0.0);
}

TEST_CASE("reduced_shift matches the hand-computed path example") {
  // Path 0-1-2 (unit weights): S^2 = [[1,0,1],[0,2,0],[1,0,1]].
  const auto s = build_shift(Mat{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, false);
  const auto d = test::sampler_from_kept({0, 2}, 3);
  CHECK(bitwise_equal(reduced_shift(d, s, 1, 2), Mat{{1, 1}, {1, 1}}));
}

TEST_CASE("reduced_shift with k = 0 is the identity") {
  RngStream rng(19);
  const auto s = build_shift(test::random_adjacency(7, 0.5, rng), true);
  const auto d = test::sampler_from_kept({1, 3, 6}, 7);
  CHECK(bitwise_equal(reduced_shift(d, s, 3, 0), Mat::identity(3)));
}

TEST_CASE("reduced_shift equals the dense brute-force oracle") {
  RngStream rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_int(27));  // N <= 30
    const auto s = build_shift(test::random_adjacency(n, 0.35, rng), true);
    const int keep = 1 + static_cast<int>(rng.uniform_int(n));
    const auto d = test::sampler_from_kept(test::random_kept(n, keep, rng), n);
    const int gamma = 1 + static_cast<int>(rng.uniform_int(3));
    const int k = static_cast<int>(rng.uniform_int(4));

    const Mat fast = reduced_shift(d, s, gamma, k);
    const Mat dd = d.selector.to_dense();
    const Mat oracle = matmul(matmul(dd, matpow(s.to_dense(), gamma * k)), transpose(dd));
    CHECK(max_abs_diff(fast, oracle) < 1e-10);
  }
}

TEST_CASE("selection serialization round-trips") {
  SelectionMatrix sel{3, 7, {1, 4, 6}};
  const auto line = serialize_selection(sel);
  CHECK(line == "1 4 6");
  const auto back = parse_selection(line, 7);
  CHECK(back.kept_indices == sel.kept_indices);
  CHECK(back.n_out == 3);
}
