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
#include <string>
#include <unordered_map>
#include <vector>

#include "sqgen/taxonomy.hpp"

namespace sqgen {

struct MentionSpan {
  std::string entity_id;
  std::size_t start = 0;  // token offsets, half-open
  std::size_t end = 0;

  bool operator==(const MentionSpan&) const = default;
};

// Token trie over every surface form in a taxonomy.
class SurfaceMatcher {
 public:
  explicit SurfaceMatcher(const Taxonomy& taxonomy);

  // Leftmost-longest, non-overlapping. When several entities share the
  // matched surface form one span is emitted per entity, in taxonomy order.
  std::vector<MentionSpan> match(const Tokens& tokens) const;

 private:
  struct Node {
    std::unordered_map<std::string, std::size_t> next;
    std::vector<std::size_t> entities;  // taxonomy indices ending here
  };

  std::vector<std::string> ids_;
  std::vector<Node> nodes_;
};

}  // namespace sqgen
