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

#include "sqgen/matcher.hpp"

namespace sqgen {

SurfaceMatcher::SurfaceMatcher(const Taxonomy& taxonomy) : nodes_(1) {
  for (std::size_t i = 0; i < taxonomy.size(); ++i) {
    const auto& e = taxonomy.at(i);
    ids_.push_back(e.id);
    for (const auto& surface : e.surfaces) {
      std::size_t node = 0;
      for (const auto& tok : surface) {
        const auto it = nodes_[node].next.find(tok);
        if (it != nodes_[node].next.end()) {
          node = it->second;
        } else {
          nodes_.emplace_back();
          nodes_[node].next.emplace(tok, nodes_.size() - 1);
          node = nodes_.size() - 1;
        }
      }
      auto& ends = nodes_[node].entities;
      if (ends.empty() || ends.back() != i) ends.push_back(i);
    }
  }
}

std::vector<MentionSpan> SurfaceMatcher::match(const Tokens& tokens) const {
  std::vector<MentionSpan> out;
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    std::size_t node = 0;
    std::size_t best_end = 0;
    std::size_t best_node = 0;
    for (std::size_t j = pos; j < tokens.size(); ++j) {
      const auto it = nodes_[node].next.find(tokens[j]);
      if (it == nodes_[node].next.end()) break;
      node = it->second;
      if (!nodes_[node].entities.empty()) {
        best_end = j + 1;
        best_node = node;
      }
    }
    if (best_end == 0) {
      ++pos;
      continue;
    }
    for (auto idx : nodes_[best_node].entities) out.push_back({ids_[idx], pos, best_end});
    pos = best_end;
  }
  return out;
}

}  // namespace sqgen
