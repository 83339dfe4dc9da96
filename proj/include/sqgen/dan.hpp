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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sqgen/adam.hpp"
#include "sqgen/embedding.hpp"
#include "sqgen/template_id.hpp"
#include "sqgen/text.hpp"

namespace sqgen {

using Probabilities = std::array<double, kNumTemplates>;

struct TcHyper {
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  double dropout = 0.4;
  std::size_t max_epochs = 100;
  std::size_t mlp_depth = 3;
  std::uint64_t seed = 7;

  std::size_t embedding_dim = EmbeddingTable::kDefaultDim;
  std::size_t buckets = EmbeddingTable::kDefaultBuckets;
  std::size_t hidden1 = 64;
  std::size_t hidden2 = 64;
  std::size_t mlp_width = 64;
  std::size_t max_tokens = 64;
  // Tokens seen fewer times than this in training share the hashed OOV rows.
  std::size_t min_count = 2;
  // Optional per-class loss weights; empty means all 1.
  std::vector<double> class_weights;

  // Throws InvalidArgument when a field is out of range.
  void validate() const;
};

// Fully-connected layer computing x * w + b with w stored row-major (in x out).
struct Dense {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> w;
  std::vector<double> b;

  Dense() = default;
  Dense(std::size_t in_dim, std::size_t out_dim) : in(in_dim), out(out_dim), w(in_dim * out_dim), b(out_dim) {}
  bool operator==(const Dense&) const = default;
};

// Deep averaging network classifier. layers[0] and layers[1] form the
// sentence encoder; the remaining layers are the MLP head whose last layer
// emits one logit per template. Every layer but the last is followed by relu.
class DanTcModel {
 public:
  DanTcModel() = default;
  DanTcModel(EmbeddingTable embeddings, std::vector<Dense> layers, double dropout,
             std::size_t max_tokens);

  const EmbeddingTable& embeddings() const { return embeddings_; }
  EmbeddingTable& embeddings() { return embeddings_; }
  const std::vector<Dense>& layers() const { return layers_; }
  std::vector<Dense>& layers() { return layers_; }
  double dropout() const { return dropout_; }
  std::size_t max_tokens() const { return max_tokens_; }
  std::size_t encoding_dim() const { return layers_[1].out; }

  // Parameter buffers in a fixed order: embeddings, then w and b per layer.
  std::vector<std::span<double>> parameters();

 private:
  EmbeddingTable embeddings_;
  std::vector<Dense> layers_;
  double dropout_ = 0.0;
  std::size_t max_tokens_ = 64;
};

// Gradient buffers shaped like a DanTcModel's parameters.
struct DanGradients {
  std::vector<double> embeddings;
  std::vector<Dense> layers;

  explicit DanGradients(const DanTcModel& model);
  void zero();
  std::vector<std::span<const double>> buffers() const;
};

// Builds a randomly initialised model: Xavier-uniform dense layers, zero
// biases, embedding coordinates uniform in +-sqrt(3/d).
DanTcModel make_dan_model(std::vector<std::string> vocab, const TcHyper& hyper);

// relu(relu(mean(emb) W1 + b1) W2 + b2). Tokens beyond max_tokens are
// ignored. Throws EmptySentence when tokens is empty.
std::vector<double> dan_encode(const DanTcModel& model, const Tokens& tokens);

// Softmax over the head's logits. Throws ShapeMismatch on a wrong-sized
// encoding.
Probabilities tc_forward(const DanTcModel& model, std::span<const double> z_sent);
std::array<double, kNumTemplates> tc_logits(const DanTcModel& model, std::span<const double> z_sent);

Probabilities softmax(std::span<const double> logits);

// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

Probabilities tc_probabilities(const DanTcModel& model, const Tokens& tokens);
TemplateId tc_predict(const DanTcModel& model, const Tokens& tokens);

// Cross-entropy -sum_i gold_i * log(max(pred_i, 1e-12)). Throws ShapeMismatch
// on length mismatch.
double tc_loss(std::span<const double> gold, std::span<const double> predicted);

struct TcExample {
  Tokens tokens;
  TemplateId gold = TemplateId::kNull;
};

// Mean (optionally class-weighted) cross-entropy over the batch with
// dropout disabled, accumulating d(loss)/d(param) into grads (which is
// zeroed first). Used by training and the gradient check.
double tc_loss_and_gradient(const DanTcModel& model, std::span<const TcExample> batch,
                            DanGradients& grads, std::span<const double> class_weights = {});

struct TcTrainResult {
  DanTcModel model;
  std::vector<double> epoch_losses;  // mean training loss per epoch
};

// Deterministic given hyper.seed. Throws InvalidArgument on an empty
// dataset.
TcTrainResult tc_train(std::span<const TcExample> dataset, const TcHyper& hyper);

// Vocabulary of tokens occurring at least min_count times, sorted.
std::vector<std::string> build_vocab(std::span<const TcExample> dataset, std::size_t min_count,
                                     std::size_t max_tokens);

}  // namespace sqgen
