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

#include "sqgen/taxonomy.hpp"

#include <array>
#include <fstream>
#include <map>
#include <sstream>

#include "sqgen/error.hpp"

namespace sqgen {
namespace {

constexpr std::array<std::string_view, 4> kTypeNames = {"Degree", "ToolSkill", "SpokenLanguage",
                                                         "Credential"};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string_view entity_type_name(EntityType t) { return kTypeNames[static_cast<std::size_t>(t)]; }

std::optional<EntityType> parse_entity_type(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return static_cast<EntityType>(i);
  }
  return std::nullopt;
}

Taxonomy::Taxonomy(std::vector<Entity> entities) : entities_(std::move(entities)) {
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    const auto& e = entities_[i];
    if (e.id.empty()) throw InvalidArgument("entity with empty id");
    if (e.surfaces.empty()) throw InvalidArgument("entity " + e.id + " has no surface forms");
    for (const auto& s : e.surfaces) {
      if (s.empty()) throw InvalidArgument("entity " + e.id + " has an empty surface form");
    }
    if (!by_id_.emplace(e.id, i).second) throw InvalidArgument("duplicate entity id " + e.id);
  }
}

const Entity* Taxonomy::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &entities_[it->second];
}

std::vector<const Entity*> Taxonomy::of_type(EntityType type) const {
  std::vector<const Entity*> out;
  for (const auto& e : entities_) {
    if (e.type == type) out.push_back(&e);
  }
  return out;
}

Taxonomy parse_taxonomy(std::string_view text) {
  std::vector<Entity> entities;
  std::map<std::string, std::size_t> first_line;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = split(line, '\t');
    if (cols.size() != 4) throw ParseError(line_no, "expected 4 tab-separated columns");
    const auto type = parse_entity_type(cols[1]);
    if (!type) throw ParseError(line_no, "unknown entity type '" + std::string(cols[1]) + "'");
    Entity e;
    e.id = std::string(cols[0]);
    if (!first_line.emplace(e.id, line_no).second) {
      throw ParseError(line_no, "duplicate entity id '" + e.id + "' (first on line " +
                                    std::to_string(first_line[e.id]) + ")");
    }
    e.type = *type;
    e.canonical = std::string(cols[2]);
    for (auto surface : split(cols[3], '|')) {
      auto toks = tokenize(surface);
      if (toks.empty()) throw ParseError(line_no, "empty surface form");
      e.surfaces.push_back(std::move(toks));
    }
    entities.push_back(std::move(e));
  }
  try {
    return Taxonomy(std::move(entities));
  } catch (const InvalidArgument& e) {
    throw ParseError(line_no, e.what());
  }
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open taxonomy " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_taxonomy(ss.str());
}

std::string format_taxonomy(const Taxonomy& taxonomy) {
  std::string out;
  for (const auto& e : taxonomy.entities()) {
    out += e.id;
    out += '\t';
    out += entity_type_name(e.type);
    out += '\t';
    out += e.canonical;
    out += '\t';
    for (std::size_t i = 0; i < e.surfaces.size(); ++i) {
      if (i) out += '|';
      out += join(e.surfaces[i]);
    }
    out += '\n';
  }
  return out;
}

void save_taxonomy(const Taxonomy& taxonomy, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write taxonomy " + path.string());
  out << format_taxonomy(taxonomy);
}

}  // namespace sqgen
