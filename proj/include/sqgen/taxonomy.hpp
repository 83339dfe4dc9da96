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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sqgen/text.hpp"

namespace sqgen {

enum class EntityType { kDegree, kToolSkill, kSpokenLanguage, kCredential };

std::string_view entity_type_name(EntityType t);
std::optional<EntityType> parse_entity_type(std::string_view name);

struct Entity {
  std::string id;
  EntityType type = EntityType::kToolSkill;
  std::string canonical;
  std::vector<Tokens> surfaces;  // tokenized, lower-cased

  bool operator==(const Entity&) const = default;
};

// Entity inventory. Ids are unique and every surface form is non-empty.
class Taxonomy {
 public:
  Taxonomy() = default;
  // Throws InvalidArgument on duplicate ids or empty surface forms.
  explicit Taxonomy(std::vector<Entity> entities);

  const std::vector<Entity>& entities() const { return entities_; }
  std::size_t size() const { return entities_.size(); }
  const Entity* find(std::string_view id) const;
  const Entity& at(std::size_t i) const { return entities_[i]; }
  std::vector<const Entity*> of_type(EntityType type) const;

 private:
  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// One entity per line: id <TAB> type <TAB> canonical name <TAB> surface|surface|...
// Blank lines and lines starting with '#' are skipped. Surface forms are
// tokenized on load.
Taxonomy parse_taxonomy(std::string_view text);
Taxonomy load_taxonomy(const std::filesystem::path& path);
std::string format_taxonomy(const Taxonomy& taxonomy);
void save_taxonomy(const Taxonomy& taxonomy, const std::filesystem::path& path);

}  // namespace sqgen
