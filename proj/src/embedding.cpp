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

#include "sqgen/embedding.hpp"

#include "sqgen/error.hpp"

namespace sqgen {

EmbeddingTable::EmbeddingTable(std::vector<std::string> vocab, std::size_t dim, std::size_t buckets)
    : vocab_(std::move(vocab)), dim_(dim), buckets_(buckets) {
  if (dim_ == 0) throw InvalidArgument("embedding dimension must be positive");
  if (buckets_ == 0) throw InvalidArgument("embedding table needs at least one OOV bucket");
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) throw InvalidArgument("duplicate vocabulary token " + vocab_[i]);
  }
  data_.assign(rows() * dim_, 0.0);
}

bool EmbeddingTable::in_vocab(std::string_view token) const {
  return index_.find(std::string(token)) != index_.end();
}

std::size_t EmbeddingTable::row_index(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  return vocab_.size() + bucket_of(token);
}

std::vector<double> EmbeddingTable::mean(const Tokens& tokens) const {
  std::vector<double> out(dim_, 0.0);
  if (tokens.empty()) return out;
  for (const auto& t : tokens) {
    const auto r = lookup(t);
    for (std::size_t k = 0; k < dim_; ++k) out[k] += r[k];
  }
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (auto& x : out) x *= inv;
  return out;
}

}  // namespace sqgen
