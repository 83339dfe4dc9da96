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

#include "sqgen/template_id.hpp"

#include "sqgen/error.hpp"

namespace sqgen {
namespace {

constexpr std::array<std::string_view, kNumTemplates> kNames = {
    "NULL", "WorkAuth", "Sponsorship", "Education", "Language", "Credential", "Tools"};

}  // namespace

TemplateId template_from_index(std::size_t i) {
  if (i >= kNumTemplates) throw InvalidArgument("template index out of range: " + std::to_string(i));
  return static_cast<TemplateId>(i);
}

std::string_view template_name(TemplateId t) { return kNames[index_of(t)]; }

std::optional<TemplateId> parse_template(std::string_view name) {
  for (std::size_t i = 0; i < kNumTemplates; ++i) {
    if (kNames[i] == name) return static_cast<TemplateId>(i);
  }
  return std::nullopt;
}

}  // namespace sqgen
