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
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sqgen/corpus.hpp"
#include "sqgen/pipeline.hpp"

namespace httplib {
class Server;
}

namespace sqgen {

// Append-only feedback log. Appends are serialised through one mutex and
// flushed before record() returns, so an acknowledged triple survives a
// restart. Reads apply last-write-wins dedup.
class FeedbackStore {
 public:
  // Loads existing rows from path (a missing file is an empty log).
  FeedbackStore(std::filesystem::path path, std::set<std::string> known_jobs, const Taxonomy& taxonomy);

  // Throws InvalidArgument for an unknown job, a NULL template or a
  // parameter that does not fit the template. Returns the row offset.
  std::size_t record(const FeedbackTriple& triple);

  std::size_t rows() const;
  std::vector<FeedbackTriple> deduped() const;
  std::optional<FeedbackLabel> decision(const std::string& job_id, const ScreeningQuestion& q) const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::set<std::string> known_jobs_;
  const Taxonomy* taxonomy_;
  mutable std::mutex mu_;
  std::vector<FeedbackTriple> log_;
  std::map<std::pair<std::string, ScreeningQuestion>, FeedbackLabel> latest_;
};

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

// Request handlers over an immutable model bundle and a fixed job list.
// Handlers are callable directly; mount() wires them to HTTP routes:
//   GET  /health
//   POST /suggest               job document -> ranked questions
//   POST /feedback              triple -> {"offset": n}
//   GET  /jobs/pending          jobs with undecided suggestions
//   GET  /jobs/{id}/suggestions suggestions with current decisions
class SqgService {
 public:
  SqgService(SqgModels models, std::vector<JobPosting> jobs, std::filesystem::path feedback_path);

  HttpReply health() const;
  HttpReply suggest(std::string_view body) const;
  HttpReply feedback(std::string_view body);
  HttpReply pending() const;
  HttpReply job_suggestions(const std::string& job_id) const;

  void mount(httplib::Server& server);
  const FeedbackStore& store() const { return store_; }

 private:
  SqgModels models_;
  std::vector<JobPosting> jobs_;
  std::map<std::string, std::size_t> job_index_;
  std::vector<std::vector<RankedQuestion>> suggestions_;  // per job, computed once
  FeedbackStore store_;
};

// Blocks serving until the server stops. Throws IoError on bind failure.
void serve(SqgService& service, const std::string& host, int port);

}  // namespace sqgen
