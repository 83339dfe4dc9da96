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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sqgen {

enum class Objective { kPointwise, kPairwise };

std::string_view objective_name(Objective o);
std::optional<Objective> parse_objective(std::string_view name);

struct GbdtParams {
  std::size_t trees = 100;
  std::size_t max_depth = 5;
  double learning_rate = 0.7;  // eta, applied to leaf weights at install time
  double gamma = 0.0;          // per-leaf complexity cost
  double lambda = 1.0;         // L2 on leaf weights
  std::size_t min_leaf = 1;
  double base_margin = 0.0;
  Objective objective = Objective::kPointwise;
  std::uint64_t seed = 7;

  // Throws InvalidArgument when a field is out of range.
  void validate() const;
  bool operator==(const GbdtParams&) const = default;
};

// Row-major dense matrix. NaN marks a missing value.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  static FeatureMatrix from_rows(std::span<const std::vector<double>> rows);

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

// Split nodes send x[feature] < threshold (and NaN) left. Leaves have
// feature == -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;
  double gain = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> x) const;
  std::size_t depth() const;
  bool operator==(const Tree&) const = default;
};

struct GbdtEnsemble {
  double base_margin = 0.0;
  std::size_t num_features = 0;
  std::vector<Tree> trees;
  GbdtParams params;

  bool operator==(const GbdtEnsemble&) const = default;
};

// -G / (H + lambda). Throws InvalidArgument when H + lambda <= 0.
double leaf_weight(double grad_sum, double hess_sum, double lambda);

// 0.5 * [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)] - gamma
double split_gain(double gl, double hl, double gr, double hr, double lambda, double gamma);

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;

  bool operator==(const SplitCandidate&) const = default;
};

// Exact greedy search over every feature and every midpoint between
// consecutive distinct values of the given rows. Missing values go left.
// Ties keep the lower feature index, then the lower threshold. Returns
// nullopt when no candidate has positive gain or fewer than two rows are
// given.
std::optional<SplitCandidate> find_best_split(const FeatureMatrix& x, std::span<const double> grad,
                                              std::span<const double> hess,
                                              std::span<const std::size_t> rows, double lambda,
                                              double gamma, std::size_t min_leaf = 1);

// Training data. For the pairwise objective, group_sizes partitions the rows
// (in order) into per-job groups; labels are binary in both objectives.
struct GbdtDataset {
  FeatureMatrix x;
  std::vector<double> labels;
  std::vector<std::size_t> group_sizes;
};

// Gradient and hessian of the LambdaMART objective for the current scores:
// for each relevant/irrelevant pair in a group, rho = 1/(1+exp(s_i - s_j))
// weighted by |delta NDCG| of swapping them.
void pairwise_gradients(std::span<const double> scores, std::span<const double> labels,
                        std::span<const std::size_t> group_sizes, std::vector<double>& grad,
                        std::vector<double>& hess);

// Boosting. A round whose best tree cannot reduce the regularised objective
// (single leaf with 0.5 G^2/(H+lambda) - gamma <= 0) ends training, since
// every later round would see the same statistics. Throws InvalidArgument
// on empty data, non-binary labels or an empty group.
GbdtEnsemble gbdt_train(const GbdtDataset& data, const GbdtParams& params);

// Base margin plus every tree's leaf value. Throws ShapeMismatch on arity.
double gbdt_predict(const GbdtEnsemble& ensemble, std::span<const double> x);

// Mean logistic loss of the ensemble on labelled rows.
double log_loss(const GbdtEnsemble& ensemble, const FeatureMatrix& x, std::span<const double> labels);

// Total split gain per feature, normalised to sum to 1. Empty when the
// ensemble has no split.
std::map<std::size_t, double> feature_importance(const GbdtEnsemble& ensemble);

}  // namespace sqgen
