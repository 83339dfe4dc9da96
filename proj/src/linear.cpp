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

#include "sqgen/linear.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sqgen/adam.hpp"
#include "sqgen/error.hpp"
#include "sqgen/rng.hpp"

namespace sqgen {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double LogisticModel::margin(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw ShapeMismatch("logistic model expects " + std::to_string(weights.size()) + " features, got " +
                        std::to_string(x.size()));
  }
  double s = bias;
  for (std::size_t i = 0; i < x.size(); ++i) s += weights[i] * x[i];
  return s;
}

LogisticModel train_logistic(std::span<const std::vector<double>> features,
                             std::span<const int> labels, const LinearHyper& hyper) {
  if (features.empty()) throw InvalidArgument("train_logistic: empty dataset");
  if (features.size() != labels.size()) throw ShapeMismatch("train_logistic: label count differs");
  const std::size_t dim = features.front().size();
  for (const auto& x : features) {
    if (x.size() != dim) throw ShapeMismatch("train_logistic: ragged feature rows");
  }

  LogisticModel model{std::vector<double>(dim, 0.0), 0.0};
  std::vector<double> gw(dim);
  std::vector<double> gb(1);
  std::vector<double> bias_buf(1, 0.0);
  const std::vector<std::span<double>> params = {std::span<double>(model.weights),
                                                 std::span<double>(bias_buf)};
  const std::vector<std::span<const double>> grads = {std::span<const double>(gw),
                                                      std::span<const double>(gb)};
  AdamState adam;
  Rng rng(hyper.seed);
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max<std::size_t>(1, hyper.batch_size);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::fill(gw.begin(), gw.end(), 0.0);
      gb[0] = 0.0;
      model.bias = bias_buf[0];
      for (std::size_t i = start; i < end; ++i) {
        const auto& x = features[order[i]];
        const double err = model.predict(x) - static_cast<double>(labels[order[i]]);
        for (std::size_t k = 0; k < dim; ++k) gw[k] += err * x[k];
        gb[0] += err;
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (std::size_t k = 0; k < dim; ++k) gw[k] = gw[k] * inv + hyper.l2 * model.weights[k];
      gb[0] *= inv;
      adam_step(params, grads, adam, hyper.learning_rate);
    }
  }
  model.bias = bias_buf[0];
  return model;
}

Probabilities BowClassifier::probabilities(const Tokens& tokens) const {
  std::array<double, kNumTemplates> logits{};
  std::copy(bias_.begin(), bias_.end(), logits.begin());
  for (const auto& t : tokens) {
    const auto it = vocab_.find(t);
    if (it == vocab_.end()) continue;
    const double* w = weights_.data() + it->second * kNumTemplates;
    for (std::size_t k = 0; k < kNumTemplates; ++k) logits[k] += w[k];
  }
  return softmax(logits);
}

TemplateId BowClassifier::predict(const Tokens& tokens) const {
  return template_from_index(argmax(probabilities(tokens)));
}

BowClassifier train_bow(std::span<const TcExample> dataset, const LinearHyper& hyper) {
  if (dataset.empty()) throw InvalidArgument("train_bow: empty dataset");
  BowClassifier model;
  std::map<std::string, std::size_t> sorted;
  for (const auto& ex : dataset) {
    for (const auto& t : ex.tokens) sorted.emplace(t, 0);
  }
  std::size_t next = 0;
  for (auto& [tok, idx] : sorted) model.vocab_.emplace(tok, next++);
  model.weights_.assign(next * kNumTemplates, 0.0);

  // Token ids per example, resolved once.
  std::vector<std::vector<std::size_t>> ids(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (const auto& t : dataset[i].tokens) ids[i].push_back(model.vocab_.at(t));
  }

  std::vector<double> gw(model.weights_.size());
  std::vector<double> gb(kNumTemplates);
  const std::vector<std::span<double>> params = {std::span<double>(model.weights_),
                                                 std::span<double>(model.bias_)};
  const std::vector<std::span<const double>> grads = {std::span<const double>(gw),
                                                      std::span<const double>(gb)};
  AdamState adam;
  Rng rng(hyper.seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max<std::size_t>(1, hyper.batch_size);
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::fill(gw.begin(), gw.end(), 0.0);
      std::fill(gb.begin(), gb.end(), 0.0);
      for (std::size_t i = start; i < end; ++i) {
        const auto& ex = dataset[order[i]];
        const auto p = model.probabilities(ex.tokens);
        const auto gold = index_of(ex.gold);
        for (std::size_t k = 0; k < kNumTemplates; ++k) {
          const double err = p[k] - (k == gold ? 1.0 : 0.0);
          gb[k] += err;
          for (auto id : ids[order[i]]) gw[id * kNumTemplates + k] += err;
        }
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (std::size_t k = 0; k < gw.size(); ++k) gw[k] = gw[k] * inv + hyper.l2 * model.weights_[k];
      for (auto& g : gb) g *= inv;
      adam_step(params, grads, adam, hyper.learning_rate);
    }
  }
  return model;
}

}  // namespace sqgen
