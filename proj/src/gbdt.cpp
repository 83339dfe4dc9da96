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

#include "sqgen/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sqgen/error.hpp"
#include "sqgen/linear.hpp"

namespace sqgen {
namespace {

// Per-feature row orders sorted by value (NaN rows excluded), stable on
// row index.
std::vector<std::vector<std::size_t>> sorted_columns(const FeatureMatrix& x,
                                                     std::span<const std::size_t> rows) {
  std::vector<std::vector<std::size_t>> out(x.cols);
  for (std::size_t f = 0; f < x.cols; ++f) {
    auto& col = out[f];
    for (auto r : rows) {
      if (!std::isnan(x.at(r, f))) col.push_back(r);
    }
    std::stable_sort(col.begin(), col.end(), [&](std::size_t a, std::size_t b) { return x.at(a, f) < x.at(b, f); });
  }
  return out;
}

// Scans presorted columns restricted to rows with in_node[row] set.
std::optional<SplitCandidate> scan(const FeatureMatrix& x, std::span<const double> grad,
                                   std::span<const double> hess,
                                   const std::vector<std::vector<std::size_t>>& columns,
                                   const std::vector<char>& in_node, std::span<const std::size_t> rows,
                                   double lambda, double gamma, std::size_t min_leaf) {
  double g_total = 0.0, h_total = 0.0;
  for (auto r : rows) {
    g_total += grad[r];
    h_total += hess[r];
  }
  const std::size_t n = rows.size();
  std::optional<SplitCandidate> best;
  for (std::size_t f = 0; f < x.cols; ++f) {
    // Missing values always go left.
    double gl = 0.0, hl = 0.0;
    std::size_t nl = 0;
    for (auto r : rows) {
      if (std::isnan(x.at(r, f))) {
        gl += grad[r];
        hl += hess[r];
        ++nl;
      }
    }
    const auto& col = columns[f];
    std::size_t i = 0;
    while (i < col.size()) {
      if (!in_node[col[i]]) {
        ++i;
        continue;
      }
      const double v = x.at(col[i], f);
      // absorb every in-node row with value v
      std::size_t j = i;
      while (j < col.size() && x.at(col[j], f) == v) {
        if (in_node[col[j]]) {
          gl += grad[col[j]];
          hl += hess[col[j]];
          ++nl;
        }
        ++j;
      }
      // next in-node value
      std::size_t k = j;
      while (k < col.size() && !in_node[col[k]]) ++k;
      if (k == col.size()) break;
      i = k;
      const double threshold = v + (x.at(col[k], f) - v) / 2.0;
      if (nl < min_leaf || n - nl < min_leaf) continue;
      const double gr = g_total - gl;
      const double hr = h_total - hl;
      if (hl + lambda <= 0.0 || hr + lambda <= 0.0 || h_total + lambda <= 0.0) continue;
      const double gain = split_gain(gl, hl, gr, hr, lambda, gamma);
      if (!best || gain > best->gain) best = SplitCandidate{f, threshold, gain};
    }
  }
  if (!best || !(best->gain > 0.0)) return std::nullopt;
  return best;
}

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, std::span<const double> grad, std::span<const double> hess,
              const GbdtParams& params, const std::vector<std::vector<std::size_t>>& columns)
      : x_(x), grad_(grad), hess_(hess), params_(params), columns_(columns), in_node_(x.rows, 0) {}

  Tree build(std::vector<std::size_t> rows) {
    Tree tree;
    grow(tree, std::move(rows), 0);
    return tree;
  }

 private:
  int grow(Tree& tree, std::vector<std::size_t> rows, std::size_t depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    std::optional<SplitCandidate> split;
    if (depth < params_.max_depth && rows.size() >= 2) {
      for (auto r : rows) in_node_[r] = 1;
      split = scan(x_, grad_, hess_, columns_, in_node_, rows, params_.lambda, params_.gamma, params_.min_leaf);
      for (auto r : rows) in_node_[r] = 0;
    }
    if (!split) {
      double g = 0.0, h = 0.0;
      for (auto r : rows) {
        g += grad_[r];
        h += hess_[r];
      }
      tree.nodes[id].weight = h + params_.lambda > 0.0 ? params_.learning_rate * leaf_weight(g, h, params_.lambda) : 0.0;
      return id;
    }
    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      const double v = x_.at(r, split->feature);
      (std::isnan(v) || v < split->threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(tree, std::move(left), depth + 1);
    const int r = grow(tree, std::move(right), depth + 1);
    auto& node = tree.nodes[id];
    node.feature = static_cast<int>(split->feature);
    node.threshold = split->threshold;
    node.gain = split->gain;
    node.left = l;
    node.right = r;
    return id;
  }

  const FeatureMatrix& x_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  const GbdtParams& params_;
  const std::vector<std::vector<std::size_t>>& columns_;
  std::vector<char> in_node_;
};

std::size_t node_depth(const Tree& t, int id) {
  const auto& n = t.nodes[static_cast<std::size_t>(id)];
  if (n.is_leaf()) return 0;
  return 1 + std::max(node_depth(t, n.left), node_depth(t, n.right));
}

}  // namespace

std::string_view objective_name(Objective o) { return o == Objective::kPointwise ? "pointwise" : "pairwise"; }

std::optional<Objective> parse_objective(std::string_view name) {
  if (name == "pointwise") return Objective::kPointwise;
  if (name == "pairwise") return Objective::kPairwise;
  return std::nullopt;
}

void GbdtParams::validate() const {
  if (trees < 1) throw InvalidArgument("gbdt: trees must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw InvalidArgument("gbdt: eta must be in (0, 1]");
  if (!(gamma >= 0.0) || !(lambda >= 0.0)) throw InvalidArgument("gbdt: gamma and lambda must be >= 0");
  if (min_leaf < 1) throw InvalidArgument("gbdt: min_leaf must be >= 1");
}

FeatureMatrix FeatureMatrix::from_rows(std::span<const std::vector<double>> rows) {
  FeatureMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols) throw ShapeMismatch("ragged feature rows");
    std::copy(rows[r].begin(), rows[r].end(), m.data.begin() + static_cast<long>(r * m.cols));
  }
  return m;
}

double Tree::predict(std::span<const double> x) const {
  if (nodes.empty()) return 0.0;
  std::size_t id = 0;
  while (!nodes[id].is_leaf()) {
    const auto& n = nodes[id];
    const double v = x[static_cast<std::size_t>(n.feature)];
    id = static_cast<std::size_t>(std::isnan(v) || v < n.threshold ? n.left : n.right);
  }
  return nodes[id].weight;
}

std::size_t Tree::depth() const { return nodes.empty() ? 0 : node_depth(*this, 0); }

double leaf_weight(double grad_sum, double hess_sum, double lambda) {
  if (!(hess_sum + lambda > 0.0)) throw InvalidArgument("leaf_weight: H + lambda must be positive");
  return -grad_sum / (hess_sum + lambda);
}

double split_gain(double gl, double hl, double gr, double hr, double lambda, double gamma) {
  const double g = gl + gr;
  const double h = hl + hr;
  return 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - g * g / (h + lambda)) - gamma;
}

std::optional<SplitCandidate> find_best_split(const FeatureMatrix& x, std::span<const double> grad,
                                              std::span<const double> hess,
                                              std::span<const std::size_t> rows, double lambda,
                                              double gamma, std::size_t min_leaf) {
  if (grad.size() != x.rows || hess.size() != x.rows) throw ShapeMismatch("find_best_split: g/h length");
  if (rows.size() < 2) return std::nullopt;
  const auto columns = sorted_columns(x, rows);
  std::vector<char> in_node(x.rows, 0);
  for (auto r : rows) in_node[r] = 1;
  return scan(x, grad, hess, columns, in_node, rows, lambda, gamma, min_leaf);
}

void pairwise_gradients(std::span<const double> scores, std::span<const double> labels,
                        std::span<const std::size_t> group_sizes, std::vector<double>& grad,
                        std::vector<double>& hess) {
  grad.assign(scores.size(), 0.0);
  hess.assign(scores.size(), 0.0);
  std::size_t offset = 0;
  std::vector<std::size_t> order;
  std::vector<std::size_t> rank;
  for (auto size : group_sizes) {
    order.resize(size);
    std::iota(order.begin(), order.end(), offset);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    rank.assign(size, 0);
    for (std::size_t i = 0; i < size; ++i) rank[order[i] - offset] = i + 1;
    std::size_t relevant = 0;
    for (std::size_t i = offset; i < offset + size; ++i) relevant += labels[i] > 0.5 ? 1 : 0;
    double ideal = 0.0;
    for (std::size_t k = 1; k <= relevant; ++k) ideal += 1.0 / std::log2(static_cast<double>(k) + 1.0);
    if (relevant == 0 || relevant == size) {
      offset += size;
      continue;
    }
    for (std::size_t i = offset; i < offset + size; ++i) {
      if (labels[i] <= 0.5) continue;
      for (std::size_t j = offset; j < offset + size; ++j) {
        if (labels[j] > 0.5) continue;
        const double di = 1.0 / std::log2(static_cast<double>(rank[i - offset]) + 1.0);
        const double dj = 1.0 / std::log2(static_cast<double>(rank[j - offset]) + 1.0);
        const double delta = std::abs(di - dj) / ideal;
        const double rho = 1.0 / (1.0 + std::exp(scores[i] - scores[j]));
        grad[i] -= rho * delta;
        grad[j] += rho * delta;
        const double h = rho * (1.0 - rho) * delta;
        hess[i] += h;
        hess[j] += h;
      }
    }
    offset += size;
  }
}

GbdtEnsemble gbdt_train(const GbdtDataset& data, const GbdtParams& params) {
  params.validate();
  const auto& x = data.x;
  if (x.rows == 0) throw InvalidArgument("gbdt_train: empty dataset");
  if (data.labels.size() != x.rows) throw ShapeMismatch("gbdt_train: label count differs from rows");
  for (double y : data.labels) {
    if (y != 0.0 && y != 1.0) throw InvalidArgument("gbdt_train: labels must be 0 or 1");
  }
  if (params.objective == Objective::kPairwise) {
    std::size_t total = 0;
    for (auto s : data.group_sizes) {
      if (s == 0) throw InvalidArgument("gbdt_train: empty pairwise group");
      total += s;
    }
    if (total != x.rows) throw InvalidArgument("gbdt_train: group sizes do not cover the rows");
  }

  GbdtEnsemble ens;
  ens.base_margin = params.base_margin;
  ens.num_features = x.cols;
  ens.params = params;

  std::vector<std::size_t> all(x.rows);
  std::iota(all.begin(), all.end(), 0);
  const auto columns = sorted_columns(x, all);
  std::vector<double> margin(x.rows, params.base_margin);
  std::vector<double> grad(x.rows), hess(x.rows);

  for (std::size_t round = 0; round < params.trees; ++round) {
    if (params.objective == Objective::kPointwise) {
      for (std::size_t i = 0; i < x.rows; ++i) {
        const double p = sigmoid(margin[i]);
        grad[i] = p - data.labels[i];
        hess[i] = p * (1.0 - p);
      }
    } else {
      pairwise_gradients(margin, data.labels, data.group_sizes, grad, hess);
    }

    TreeBuilder builder(x, grad, hess, params, columns);
    Tree tree = builder.build(all);
    if (tree.nodes.size() == 1) {
      double g = 0.0, h = 0.0;
      for (std::size_t i = 0; i < x.rows; ++i) {
        g += grad[i];
        h += hess[i];
      }
      const bool helps = h + params.lambda > 0.0 && 0.5 * g * g / (h + params.lambda) - params.gamma > 0.0;
      if (!helps) break;
    }
    for (std::size_t i = 0; i < x.rows; ++i) margin[i] += tree.predict(x.row(i));
    ens.trees.push_back(std::move(tree));
  }
  return ens;
}

double gbdt_predict(const GbdtEnsemble& ensemble, std::span<const double> x) {
  if (x.size() != ensemble.num_features) {
    throw ShapeMismatch("gbdt_predict: expected " + std::to_string(ensemble.num_features) + " features, got " +
                        std::to_string(x.size()));
  }
  double m = ensemble.base_margin;
  for (const auto& t : ensemble.trees) m += t.predict(x);
  return m;
}

double log_loss(const GbdtEnsemble& ensemble, const FeatureMatrix& x, std::span<const double> labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double m = gbdt_predict(ensemble, x.row(i));
    // log(1 + exp(-m)) for y=1, log(1 + exp(m)) for y=0, computed stably
    const double z = labels[i] > 0.5 ? -m : m;
    total += z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  }
  return total / static_cast<double>(x.rows);
}

std::map<std::size_t, double> feature_importance(const GbdtEnsemble& ensemble) {
  std::map<std::size_t, double> gain;
  double total = 0.0;
  for (const auto& t : ensemble.trees) {
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) continue;
      gain[static_cast<std::size_t>(n.feature)] += n.gain;
      total += n.gain;
    }
  }
  if (total <= 0.0) return {};
  for (auto& [f, g] : gain) g /= total;
  return gain;
}

}  // namespace sqgen
