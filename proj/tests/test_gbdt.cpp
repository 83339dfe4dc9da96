// Copyright 2026 The sqgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numeric>

#include "sqgen/error.hpp"
#include "sqgen/eval.hpp"
#include "sqgen/gbdt.hpp"
#include "sqgen/linear.hpp"
#include "sqgen/rng.hpp"
#include "support.hpp"

using namespace sqgen;

namespace {

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

GbdtDataset xor_dataset(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  GbdtDataset d;
  d.x = FeatureMatrix(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform(), b = rng.uniform();
    d.x.at(i, 0) = a;
    d.x.at(i, 1) = b;
    d.labels.push_back((a > 0.5) != (b > 0.5) ? 1.0 : 0.0);
  }
  return d;
}

Tree leaf(double w) {
  Tree t;
  t.nodes.push_back({-1, 0.0, -1, -1, w, 0.0});
  return t;
}

// x[f] < thr ? lw : rw
Tree stump(int f, double thr, double lw, double rw, double gain) {
  Tree t;
  t.nodes.push_back({f, thr, 1, 2, 0.0, gain});
  t.nodes.push_back({-1, 0.0, -1, -1, lw, 0.0});
  t.nodes.push_back({-1, 0.0, -1, -1, rw, 0.0});
  return t;
}

}  // namespace

TEST_CASE("leaf weight examples") {
  CHECK(leaf_weight(2.0, 3.0, 1.0) == doctest::Approx(-0.5));
  CHECK(leaf_weight(0.0, 3.0, 1.0) == 0.0);
  CHECK_THROWS_AS(leaf_weight(1.0, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("split gain examples") {
  // x = [0, 1], g = [-1, 1], h = [1, 1], lambda 0.
  const auto x = FeatureMatrix::from_rows(std::vector<std::vector<double>>{{0.0}, {1.0}});
  const std::vector<double> g{-1.0, 1.0}, h{1.0, 1.0};
  const auto rows = all_rows(2);
  const auto s = find_best_split(x, g, h, rows, 0.0, 0.0);
  REQUIRE(s.has_value());
  CHECK(s->feature == 0);
  CHECK(s->threshold == 0.5);
  CHECK(s->gain == doctest::Approx(1.0));
  CHECK_FALSE(find_best_split(x, g, h, rows, 0.0, 2.0).has_value());

  const auto constant = FeatureMatrix::from_rows(std::vector<std::vector<double>>{{3.0}, {3.0}});
  CHECK_FALSE(find_best_split(constant, g, h, rows, 0.0, 0.0).has_value());
  CHECK_FALSE(find_best_split(x, g, h, std::vector<std::size_t>{0}, 0.0, 0.0).has_value());
}

TEST_CASE("missing values go left") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto x = FeatureMatrix::from_rows(std::vector<std::vector<double>>{{nan}, {0.0}, {1.0}});
  const std::vector<double> g{-1.0, -1.0, 2.0}, h{1.0, 1.0, 1.0};
  const auto s = find_best_split(x, g, h, all_rows(3), 0.0, 0.0);
  REQUIRE(s.has_value());
  CHECK(s->threshold == 0.5);
  CHECK(s->gain == doctest::Approx(0.5 * (4.0 / 2.0 + 4.0 / 1.0)));
  CHECK(stump(0, 0.5, -1.0, 1.0, 1.0).predict(std::vector<double>{nan}) == -1.0);
}

TEST_CASE("tie break keeps the lower feature") {
  // Two identical columns.
  const auto x = FeatureMatrix::from_rows(std::vector<std::vector<double>>{{0, 0}, {1, 1}});
  const std::vector<double> g{-1.0, 1.0}, h{1.0, 1.0};
  const auto s = find_best_split(x, g, h, all_rows(2), 0.0, 0.0);
  REQUIRE(s.has_value());
  CHECK(s->feature == 0);
}

TEST_CASE("split search matches brute force on dyadic datasets") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(30), d = 1 + rng.below(4);
    FeatureMatrix x(n, d);
    std::vector<double> g(n), h(n);
    for (std::size_t r = 0; r < n; ++r) {
      // Dyadic values keep every sum exact, so the argmax is unambiguous.
      for (std::size_t c = 0; c < d; ++c) x.at(r, c) = static_cast<double>(rng.below(8));
      g[r] = static_cast<double>(static_cast<int>(rng.below(17)) - 8) / 4.0;
      h[r] = static_cast<double>(1 + rng.below(4)) / 4.0;
    }
    const double lambda = static_cast<double>(rng.below(3)) / 2.0;
    const double gamma = static_cast<double>(rng.below(3)) / 4.0;
    const auto got = find_best_split(x, g, h, all_rows(n), lambda, gamma);
    const auto want = testing::brute_force_split(x, g, h, lambda, gamma);
    REQUIRE(got.has_value() == want.has_value());
    if (got) {
      CHECK(got->feature == want->feature);
      CHECK(got->threshold == want->threshold);
      CHECK(got->gain == doctest::Approx(want->gain).epsilon(1e-12));
    }
  }
}

TEST_CASE("xor needs depth") {
  const auto train = xor_dataset(1000, 1);
  const auto test = xor_dataset(1000, 2);
  GbdtParams p;
  p.trees = 50;
  p.max_depth = 2;
  const auto ens = gbdt_train(train, p);
  std::vector<double> scores;
  for (std::size_t r = 0; r < test.x.rows; ++r) scores.push_back(gbdt_predict(ens, test.x.row(r)));
  CHECK(auroc(scores, test.labels) >= 0.99);

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t r = 0; r < train.x.rows; ++r) {
    rows.emplace_back(train.x.row(r).begin(), train.x.row(r).end());
    labels.push_back(static_cast<int>(train.labels[r]));
  }
  const auto lr = train_logistic(rows, labels, LinearHyper{});
  std::vector<double> lr_scores;
  for (std::size_t r = 0; r < test.x.rows; ++r) lr_scores.push_back(lr.margin(test.x.row(r)));
  CHECK(auroc(lr_scores, test.labels) <= 0.60);
}

TEST_CASE("huge gamma installs no tree") {
  GbdtParams p;
  p.gamma = 1e9;
  const auto ens = gbdt_train(xor_dataset(100, 3), p);
  CHECK(ens.trees.empty());
  CHECK(sigmoid(gbdt_predict(ens, std::vector<double>{0.2, 0.9})) == 0.5);
}

TEST_CASE("predict examples") {
  GbdtEnsemble ens;
  ens.num_features = 1;
  const std::vector<double> x{0.0};
  CHECK(gbdt_predict(ens, x) == 0.0);
  ens.trees.push_back(leaf(0.7));
  CHECK(gbdt_predict(ens, x) == doctest::Approx(0.7));
  ens.trees = {leaf(0.3), leaf(-0.1)};
  CHECK(gbdt_predict(ens, x) == doctest::Approx(0.2));
  const double before = gbdt_predict(ens, x);
  ens.trees.push_back(leaf(0.0));
  CHECK(gbdt_predict(ens, x) == before);
  ens.base_margin = 1.0;
  CHECK(gbdt_predict(ens, x) == doctest::Approx(1.2));
  CHECK_THROWS_AS(gbdt_predict(ens, std::vector<double>{0.0, 1.0}), ShapeMismatch);
}

TEST_CASE("training loss never increases") {
  const auto data = xor_dataset(300, 4);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t <= 21; t += 2) {
    GbdtParams p;
    p.trees = t;
    p.max_depth = 3;
    p.learning_rate = 0.3;
    const double loss = log_loss(gbdt_train(data, p), data.x, data.labels);
    CHECK(loss <= prev + 1e-12);
    prev = loss;
  }
}

TEST_CASE("training is deterministic") {
  const auto data = xor_dataset(200, 5);
  GbdtParams p;
  p.trees = 10;
  CHECK(gbdt_train(data, p) == gbdt_train(data, p));
  p.objective = Objective::kPairwise;
  auto grouped = data;
  grouped.group_sizes = std::vector<std::size_t>(20, 10);
  CHECK(gbdt_train(grouped, p) == gbdt_train(grouped, p));
}

TEST_CASE("pairwise gradients") {
  std::vector<double> g, h;
  SUBCASE("two items, tied scores") {
    pairwise_gradients(std::vector<double>{0, 0}, std::vector<double>{1, 0}, std::vector<std::size_t>{2}, g, h);
    CHECK(g[0] == doctest::Approx(-0.18453512321427123).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(0.18453512321427123).epsilon(1e-12));
    CHECK(h[0] == doctest::Approx(0.09226756160713562).epsilon(1e-12));
    CHECK(h[1] == doctest::Approx(0.09226756160713562).epsilon(1e-12));
  }
  SUBCASE("three items") {
    pairwise_gradients(std::vector<double>{2, 1, 0}, std::vector<double>{0, 1, 0}, std::vector<std::size_t>{3}, g,
                       h);
    CHECK(g[0] == doctest::Approx(0.2698119697686759).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(-0.30502440379380685).epsilon(1e-12));
    CHECK(g[2] == doctest::Approx(0.03521243402513098).epsilon(1e-12));
    CHECK(h[0] == doctest::Approx(0.07256361465222584).epsilon(1e-12));
    CHECK(h[1] == doctest::Approx(0.09830596662074093).epsilon(1e-12));
    CHECK(h[2] == doctest::Approx(0.025742351968515077).epsilon(1e-12));
  }
  SUBCASE("single-class groups contribute nothing") {
    pairwise_gradients(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 1, 0, 0},
                       std::vector<std::size_t>{2, 2}, g, h);
    for (double v : g) CHECK(v == 0.0);
    for (double v : h) CHECK(v == 0.0);
  }
  SUBCASE("lambdas sum to zero per group") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 2 + rng.below(10);
      std::vector<double> s(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = rng.normal();
        y[i] = rng.bernoulli(0.4) ? 1.0 : 0.0;
      }
      pairwise_gradients(s, y, std::vector<std::size_t>{n}, g, h);
      CHECK(std::accumulate(g.begin(), g.end(), 0.0) == doctest::Approx(0.0));
      for (double v : h) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("feature importance") {
  GbdtEnsemble ens;
  ens.num_features = 4;
  CHECK(feature_importance(ens).empty());
  ens.trees.push_back(leaf(1.0));
  CHECK(feature_importance(ens).empty());
  ens.trees.push_back(stump(3, 0.5, -1, 1, 2.0));
  CHECK(feature_importance(ens) == std::map<std::size_t, double>{{3, 1.0}});
  ens.trees.push_back(stump(1, 0.5, -1, 1, 6.0));
  ens.trees.push_back(stump(3, 0.1, -1, 1, 2.0));
  const auto imp = feature_importance(ens);
  CHECK(imp.at(1) == doctest::Approx(0.6));
  CHECK(imp.at(3) == doctest::Approx(0.4));
}

TEST_CASE("training input errors") {
  GbdtParams p;
  GbdtDataset empty;
  CHECK_THROWS_AS(gbdt_train(empty, p), InvalidArgument);
  auto d = xor_dataset(10, 6);
  d.labels[0] = 0.5;
  CHECK_THROWS_AS(gbdt_train(d, p), InvalidArgument);
  d.labels[0] = 1.0;
  p.objective = Objective::kPairwise;
  d.group_sizes = {5, 0, 5};
  CHECK_THROWS_AS(gbdt_train(d, p), InvalidArgument);
  d.group_sizes = {5, 4};
  CHECK_THROWS_AS(gbdt_train(d, p), InvalidArgument);
  GbdtParams bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK(parse_objective("pairwise") == Objective::kPairwise);
  CHECK_FALSE(parse_objective("listwise").has_value());
}
