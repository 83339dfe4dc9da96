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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqgen/template_id.hpp"

namespace sqgen {

// Categorical job attributes keyed by feature name.
using JobFeatures = std::map<std::string, std::string>;

struct JobPosting {
  std::string id;
  std::string title;
  std::string body;
  JobFeatures features;

  bool operator==(const JobPosting&) const = default;
};

struct LabeledSentence {
  std::string text;
  TemplateId gold = TemplateId::kNull;

  bool operator==(const LabeledSentence&) const = default;
};

// A structured screening question. Parameter-taking templates carry an
// entity id; the others carry none.
struct ScreeningQuestion {
  TemplateId tmpl = TemplateId::kWorkAuth;
  std::optional<std::string> parameter;

  bool operator==(const ScreeningQuestion&) const = default;
  auto operator<=>(const ScreeningQuestion&) const = default;
};

enum class FeedbackLabel { kAccepted, kRejected };

struct FeedbackTriple {
  std::string job_id;
  TemplateId tmpl = TemplateId::kWorkAuth;
  std::optional<std::string> parameter;
  FeedbackLabel label = FeedbackLabel::kAccepted;
  std::int64_t timestamp = 0;

  ScreeningQuestion question() const { return {tmpl, parameter}; }
  bool operator==(const FeedbackTriple&) const = default;
};

// Declared job-side categorical features and their value vocabularies.
struct JobFeatureSpec {
  std::string name;
  std::vector<std::string> values;

  bool operator==(const JobFeatureSpec&) const = default;
};

struct JobFeatureSchema {
  std::vector<JobFeatureSpec> features;

  const JobFeatureSpec* find(std::string_view name) const;
  std::vector<std::string> names() const;
  bool operator==(const JobFeatureSchema&) const = default;
};

// industry, company_size, seniority, function, region, employment_status,
// experience_level, title_group.
JobFeatureSchema default_job_schema();

// Throws InvalidArgument for an empty or duplicate id, or a feature name
// absent from the schema.
void validate_jobs(std::span<const JobPosting> jobs, const JobFeatureSchema& schema);

// Last write wins on (job, template, parameter). Output keeps the position
// of each key's final write.
std::vector<FeedbackTriple> dedup_feedback(std::span<const FeedbackTriple> triples);

// Line-delimited JSON dataset files, one record per line. Loading an empty
// file yields no records; a malformed line throws ParseError naming it.
template <typename Record>
std::vector<Record> parse_dataset(std::string_view text);
template <typename Record>
std::string format_dataset(std::span<const Record> records);
template <typename Record>
std::vector<Record> load_dataset(const std::filesystem::path& path);
template <typename Record>
void write_dataset(std::span<const Record> records, const std::filesystem::path& path);

std::string format_record(const JobPosting& r);
std::string format_record(const LabeledSentence& r);
std::string format_record(const FeedbackTriple& r);

// Appends one record and flushes; used for the append-only feedback log.
void append_record(const FeedbackTriple& r, const std::filesystem::path& path);

std::string_view label_name(FeedbackLabel label);

}  // namespace sqgen
