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
#include <optional>
#include <string>
#include <string_view>

namespace sqgen {

// Question templates. The integer values are stable and used as class
// indices by the classifier and as categorical codes by the ranker.
enum class TemplateId : int {
  kNull = 0,
  kWorkAuth = 1,
  kSponsorship = 2,
  kEducation = 3,
  kLanguage = 4,
  kCredential = 5,
  kTools = 6,
};

inline constexpr std::size_t kNumTemplates = 7;

inline constexpr std::array<TemplateId, kNumTemplates> kAllTemplates = {
    TemplateId::kNull,     TemplateId::kWorkAuth,   TemplateId::kSponsorship,
    TemplateId::kEducation, TemplateId::kLanguage, TemplateId::kCredential,
    TemplateId::kTools};

inline constexpr std::size_t index_of(TemplateId t) { return static_cast<std::size_t>(t); }

// Throws InvalidArgument when i >= kNumTemplates.
TemplateId template_from_index(std::size_t i);

// Canonical names: NULL, WorkAuth, Sponsorship, Education, Language,
// Credential, Tools.
std::string_view template_name(TemplateId t);
std::optional<TemplateId> parse_template(std::string_view name);

// True for templates whose questions carry an entity parameter.
inline constexpr bool takes_parameter(TemplateId t) {
  return t == TemplateId::kEducation || t == TemplateId::kLanguage ||
         t == TemplateId::kCredential || t == TemplateId::kTools;
}

}  // namespace sqgen
