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

#include "sqgen/dan.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sqgen/error.hpp"
#include "sqgen/rng.hpp"

namespace sqgen {
namespace {

constexpr double kProbFloor = 1e-12;

// Per-example activations kept for backprop. acts[0] is the pooled
// embedding; acts[l + 1] is layer l's output (post-relu, post-dropout for
// hidden layers; logits for the last).
struct Trace {
  std::vector<std::size_t> rows;
  std::vector<std::vector<double>> acts;
  std::vector<std::vector<double>> masks;  // dropout scale per head input, empty if none
};

void affine(const Dense& layer, std::span<const double> x, std::vector<double>& y) {
  y.assign(layer.b.begin(), layer.b.end());
  for (std::size_t i = 0; i < layer.in; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* w = layer.w.data() + i * layer.out;
    for (std::size_t j = 0; j < layer.out; ++j) y[j] += xi * w[j];
  }
}

void relu(std::vector<double>& v) {
  for (auto& x : v) x = x > 0.0 ? x : 0.0;
}

std::size_t used_tokens(const DanTcModel& model, const Tokens& tokens) {
  return std::min(tokens.size(), model.max_tokens());
}

// Runs the network. With rng set and dropout > 0, inverted dropout is
// applied to every head-layer input.
void forward(const DanTcModel& model, const Tokens& tokens, Trace& tr, Rng* rng) {
  const auto& emb = model.embeddings();
  const auto& layers = model.layers();
  const std::size_t n = used_tokens(model, tokens);
  if (n == 0) throw EmptySentence();

  tr.rows.resize(n);
  tr.acts.resize(layers.size() + 1);
  tr.masks.assign(layers.size(), {});
  auto& pooled = tr.acts[0];
  pooled.assign(emb.dim(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    tr.rows[i] = emb.row_index(tokens[i]);
    const auto r = emb.row(tr.rows[i]);
    for (std::size_t k = 0; k < emb.dim(); ++k) pooled[k] += r[k];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& x : pooled) x *= inv;

  const double keep = 1.0 - model.dropout();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& input = tr.acts[l];
    if (rng != nullptr && l >= 2 && model.dropout() > 0.0) {
      auto& mask = tr.masks[l];
      mask.resize(input.size());
      for (std::size_t k = 0; k < input.size(); ++k) {
        mask[k] = rng->uniform() < keep ? 1.0 / keep : 0.0;
        input[k] *= mask[k];
      }
    }
    affine(layers[l], input, tr.acts[l + 1]);
    if (l + 1 < layers.size()) relu(tr.acts[l + 1]);
  }
}

// Accumulates gradients for one example given d(loss)/d(logits).
void backward(const DanTcModel& model, const Trace& tr, std::vector<double> delta,
              DanGradients& g) {
  const auto& layers = model.layers();
  std::vector<double> prev;
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    auto& gl = g.layers[l];
    const auto& input = tr.acts[l];
    for (std::size_t i = 0; i < layer.in; ++i) {
      const double xi = input[i];
      if (xi == 0.0) continue;
      double* gw = gl.w.data() + i * layer.out;
      for (std::size_t j = 0; j < layer.out; ++j) gw[j] += xi * delta[j];
    }
    for (std::size_t j = 0; j < layer.out; ++j) gl.b[j] += delta[j];

    prev.assign(layer.in, 0.0);
    for (std::size_t i = 0; i < layer.in; ++i) {
      const double* w = layer.w.data() + i * layer.out;
      double s = 0.0;
      for (std::size_t j = 0; j < layer.out; ++j) s += w[j] * delta[j];
      prev[i] = s;
    }
    if (l > 0) {
      // input is relu output (possibly scaled by a dropout mask)
      const auto& mask = tr.masks[l];
      for (std::size_t i = 0; i < layer.in; ++i) {
        if (input[i] <= 0.0) {
          prev[i] = 0.0;
        } else if (!mask.empty()) {
          prev[i] *= mask[i];
        }
      }
    }
    delta.swap(prev);
  }

  const auto dim = model.embeddings().dim();
  const double inv = 1.0 / static_cast<double>(tr.rows.size());
  for (auto row : tr.rows) {
    double* ge = g.embeddings.data() + row * dim;
    for (std::size_t k = 0; k < dim; ++k) ge[k] += delta[k] * inv;
  }
}

double example_loss_and_delta(const Trace& tr, TemplateId gold, double weight,
                              std::vector<double>& delta) {
  const auto probs = softmax(tr.acts.back());
  const auto c = index_of(gold);
  delta.assign(kNumTemplates, 0.0);
  for (std::size_t k = 0; k < kNumTemplates; ++k) {
    delta[k] = weight * (probs[k] - (k == c ? 1.0 : 0.0));
  }
  return -weight * std::log(std::max(probs[c], kProbFloor));
}

double class_weight(std::span<const double> weights, TemplateId t) {
  return weights.empty() ? 1.0 : weights[index_of(t)];
}

void xavier(Dense& layer, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
  for (auto& w : layer.w) w = rng.uniform(-a, a);
}

}  // namespace

void TcHyper::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw InvalidArgument("dropout must be in [0, 1)");
  if (mlp_depth < 1) throw InvalidArgument("mlp depth must be at least 1");
  if (batch_size < 1) throw InvalidArgument("batch size must be at least 1");
  if (embedding_dim == 0 || hidden1 == 0 || hidden2 == 0 || mlp_width == 0 || buckets == 0) {
    throw InvalidArgument("layer widths must be positive");
  }
  if (max_tokens == 0) throw InvalidArgument("max_tokens must be positive");
  if (!class_weights.empty() && class_weights.size() != kNumTemplates) {
    throw InvalidArgument("class_weights needs one entry per template");
  }
}

DanTcModel::DanTcModel(EmbeddingTable embeddings, std::vector<Dense> layers, double dropout,
                       std::size_t max_tokens)
    : embeddings_(std::move(embeddings)), layers_(std::move(layers)), dropout_(dropout),
      max_tokens_(max_tokens) {
  if (layers_.size() < 3) throw ShapeMismatch("DAN needs two encoder layers and a head");
  std::size_t width = embeddings_.dim();
  for (const auto& l : layers_) {
    if (l.in != width || l.w.size() != l.in * l.out || l.b.size() != l.out) {
      throw ShapeMismatch("DAN layer shapes do not chain");
    }
    width = l.out;
  }
  if (width != kNumTemplates) throw ShapeMismatch("DAN head must emit one logit per template");
}

std::vector<std::span<double>> DanTcModel::parameters() {
  std::vector<std::span<double>> out;
  out.emplace_back(embeddings_.data());
  for (auto& l : layers_) {
    out.emplace_back(l.w);
    out.emplace_back(l.b);
  }
  return out;
}

DanGradients::DanGradients(const DanTcModel& model)
    : embeddings(model.embeddings().data().size(), 0.0) {
  for (const auto& l : model.layers()) layers.emplace_back(l.in, l.out);
}

void DanGradients::zero() {
  std::fill(embeddings.begin(), embeddings.end(), 0.0);
  for (auto& l : layers) {
    std::fill(l.w.begin(), l.w.end(), 0.0);
    std::fill(l.b.begin(), l.b.end(), 0.0);
  }
}

std::vector<std::span<const double>> DanGradients::buffers() const {
  std::vector<std::span<const double>> out;
  out.emplace_back(embeddings);
  for (const auto& l : layers) {
    out.emplace_back(l.w);
    out.emplace_back(l.b);
  }
  return out;
}

DanTcModel make_dan_model(std::vector<std::string> vocab, const TcHyper& hyper) {
  hyper.validate();
  Rng rng(hyper.seed);
  EmbeddingTable emb(std::move(vocab), hyper.embedding_dim, hyper.buckets);
  const double a = std::sqrt(3.0 / static_cast<double>(hyper.embedding_dim));
  for (auto& x : emb.data()) x = rng.uniform(-a, a);

  std::vector<Dense> layers;
  layers.emplace_back(hyper.embedding_dim, hyper.hidden1);
  layers.emplace_back(hyper.hidden1, hyper.hidden2);
  std::size_t width = hyper.hidden2;
  for (std::size_t i = 0; i + 1 < hyper.mlp_depth; ++i) {
    layers.emplace_back(width, hyper.mlp_width);
    width = hyper.mlp_width;
  }
  layers.emplace_back(width, kNumTemplates);
  for (auto& l : layers) xavier(l, rng);
  return DanTcModel(std::move(emb), std::move(layers), hyper.dropout, hyper.max_tokens);
}

std::vector<double> dan_encode(const DanTcModel& model, const Tokens& tokens) {
  const auto& emb = model.embeddings();
  const std::size_t n = used_tokens(model, tokens);
  if (n == 0) throw EmptySentence();
  std::vector<double> pooled(emb.dim(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = emb.lookup(tokens[i]);
    for (std::size_t k = 0; k < emb.dim(); ++k) pooled[k] += r[k];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& x : pooled) x *= inv;

  std::vector<double> h;
  affine(model.layers()[0], pooled, h);
  relu(h);
  std::vector<double> z;
  affine(model.layers()[1], h, z);
  relu(z);
  return z;
}

std::array<double, kNumTemplates> tc_logits(const DanTcModel& model, std::span<const double> z_sent) {
  const auto& layers = model.layers();
  if (z_sent.size() != model.encoding_dim()) {
    throw ShapeMismatch("encoding has dimension " + std::to_string(z_sent.size()) + ", expected " +
                        std::to_string(model.encoding_dim()));
  }
  std::vector<double> x(z_sent.begin(), z_sent.end());
  std::vector<double> y;
  for (std::size_t l = 2; l < layers.size(); ++l) {
    affine(layers[l], x, y);
    if (l + 1 < layers.size()) relu(y);
    x.swap(y);
  }
  std::array<double, kNumTemplates> out{};
  std::copy(x.begin(), x.end(), out.begin());
  return out;
}

Probabilities softmax(std::span<const double> logits) {
  if (logits.size() != kNumTemplates) throw ShapeMismatch("softmax expects one logit per template");
  Probabilities p{};
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < kNumTemplates; ++k) {
    p[k] = std::exp(logits[k] - mx);
    sum += p[k];
  }
  for (auto& x : p) x /= sum;
  return p;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

Probabilities tc_forward(const DanTcModel& model, std::span<const double> z_sent) {
  return softmax(tc_logits(model, z_sent));
}

Probabilities tc_probabilities(const DanTcModel& model, const Tokens& tokens) {
  const auto z = dan_encode(model, tokens);
  return tc_forward(model, z);
}

TemplateId tc_predict(const DanTcModel& model, const Tokens& tokens) {
  const auto z = dan_encode(model, tokens);
  return template_from_index(argmax(tc_logits(model, z)));
}

double tc_loss(std::span<const double> gold, std::span<const double> predicted) {
  if (gold.size() != predicted.size()) throw ShapeMismatch("tc_loss: length mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] != 0.0) loss -= gold[i] * std::log(std::max(predicted[i], kProbFloor));
  }
  return loss;
}

double tc_loss_and_gradient(const DanTcModel& model, std::span<const TcExample> batch,
                            DanGradients& grads, std::span<const double> class_weights) {
  grads.zero();
  if (batch.empty()) return 0.0;
  Trace tr;
  std::vector<double> delta;
  double total = 0.0;
  for (const auto& ex : batch) {
    forward(model, ex.tokens, tr, nullptr);
    total += example_loss_and_delta(tr, ex.gold, class_weight(class_weights, ex.gold), delta);
    backward(model, tr, delta, grads);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (auto& x : grads.embeddings) x *= inv;
  for (auto& l : grads.layers) {
    for (auto& x : l.w) x *= inv;
    for (auto& x : l.b) x *= inv;
  }
  return total * inv;
}

std::vector<std::string> build_vocab(std::span<const TcExample> dataset, std::size_t min_count,
                                     std::size_t max_tokens) {
  std::map<std::string, std::size_t> counts;
  for (const auto& ex : dataset) {
    const auto n = std::min(ex.tokens.size(), max_tokens);
    for (std::size_t i = 0; i < n; ++i) ++counts[ex.tokens[i]];
  }
  std::vector<std::string> vocab;
  for (const auto& [tok, c] : counts) {
    if (c >= min_count) vocab.push_back(tok);
  }
  return vocab;
}

TcTrainResult tc_train(std::span<const TcExample> dataset, const TcHyper& hyper) {
  hyper.validate();
  if (dataset.empty()) throw InvalidArgument("tc_train: empty dataset");
  for (const auto& ex : dataset) {
    if (ex.tokens.empty()) throw EmptySentence();
  }

  TcTrainResult result{make_dan_model(build_vocab(dataset, hyper.min_count, hyper.max_tokens), hyper), {}};
  auto& model = result.model;
  Rng rng(hyper.seed ^ 0x9e3779b97f4a7c15ULL);
  AdamState adam;
  DanGradients grads(model);
  const auto params = model.parameters();
  const auto grad_buffers = grads.buffers();

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Trace tr;
  std::vector<double> delta;
  for (std::size_t epoch = 0; epoch < hyper.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
      const std::size_t end = std::min(order.size(), start + hyper.batch_size);
      grads.zero();
      for (std::size_t i = start; i < end; ++i) {
        const auto& ex = dataset[order[i]];
        forward(model, ex.tokens, tr, &rng);
        epoch_loss += example_loss_and_delta(tr, ex.gold, class_weight(hyper.class_weights, ex.gold), delta);
        backward(model, tr, delta, grads);
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (auto& x : grads.embeddings) x *= inv;
      for (auto& l : grads.layers) {
        for (auto& x : l.w) x *= inv;
        for (auto& x : l.b) x *= inv;
      }
      adam_step(params, grad_buffers, adam, hyper.learning_rate);
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(order.size()));
  }
  return result;
}

}  // namespace sqgen
