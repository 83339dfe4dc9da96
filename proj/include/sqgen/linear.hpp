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
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sqgen/dan.hpp"

namespace sqgen {

double sigmoid(double x);

struct LinearHyper {
  double learning_rate = 0.05;
  std::size_t epochs = 200;
  std::size_t batch_size = 64;
  double l2 = 0.0;
  std::uint64_t seed = 7;
};

// Binary logistic regression over dense features.
struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;

  double margin(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return sigmoid(margin(x)); }
};

// Minimises mean log-loss (+ l2/2 |w|^2) with Adam. Throws InvalidArgument
// on empty or ragged input.
LogisticModel train_logistic(std::span<const std::vector<double>> features,
                             std::span<const int> labels, const LinearHyper& hyper);

// Multinomial logistic regression over bag-of-words counts; the template
// classification baseline.
class BowClassifier {
 public:
  Probabilities probabilities(const Tokens& tokens) const;
  TemplateId predict(const Tokens& tokens) const;

  friend BowClassifier train_bow(std::span<const TcExample> dataset, const LinearHyper& hyper);

 private:
  std::unordered_map<std::string, std::size_t> vocab_;
  std::vector<double> weights_;  // vocab x templates
  std::vector<double> bias_ = std::vector<double>(kNumTemplates, 0.0);
};

BowClassifier train_bow(std::span<const TcExample> dataset, const LinearHyper& hyper);

}  // namespace sqgen
