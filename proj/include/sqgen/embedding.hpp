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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sqgen/text.hpp"

namespace sqgen {

// Token embedding rows: one per vocabulary token followed by `buckets`
// shared rows for out-of-vocabulary tokens. An OOV token maps to
// vocab_size() + fnv1a64(token) % buckets, so lookup is a pure function of
// the token bytes.
class EmbeddingTable {
 public:
  static constexpr std::string_view kHashName = "fnv1a64";
  static constexpr std::size_t kDefaultDim = 64;
  static constexpr std::size_t kDefaultBuckets = 4096;

  EmbeddingTable() = default;
  // Vocabulary entries must be unique; rows start zeroed.
  EmbeddingTable(std::vector<std::string> vocab, std::size_t dim, std::size_t buckets);

  std::size_t dim() const { return dim_; }
  std::size_t buckets() const { return buckets_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::size_t rows() const { return vocab_.size() + buckets_; }
  const std::vector<std::string>& vocab() const { return vocab_; }

  bool in_vocab(std::string_view token) const;
  std::size_t bucket_of(std::string_view token) const { return fnv1a64(token) % buckets_; }
  std::size_t row_index(std::string_view token) const;

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> lookup(std::string_view token) const { return row(row_index(token)); }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  // Mean of the token rows; zero vector for an empty list.
  std::vector<double> mean(const Tokens& tokens) const;

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t dim_ = 0;
  std::size_t buckets_ = 0;
  std::vector<double> data_;
};

}  // namespace sqgen
