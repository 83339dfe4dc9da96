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
#include <string>
#include <string_view>
#include <vector>

namespace sqgen {

using Tokens = std::vector<std::string>;

// Lower-cased runs of alphanumerics (ASCII letters, digits and any non-ASCII
// byte). Inside a run, '.' and '\'' are kept when both neighbours are
// alphanumeric ("node.js", "bachelor's"); a run of '+' or '#' directly after
// an alphanumeric is kept and closes the token ("c++", "c#", "4+").
// Everything else delimits.
Tokens tokenize(std::string_view text);

struct Sentence {
  std::string job_id;
  std::size_t position = 0;
  std::string text;
  Tokens tokens;
};

// Breaks a posting body into sentences. Boundaries are newlines and any of
// ". ! ? ;" followed by whitespace; the terminator stays with its sentence.
// Sentence text is whitespace-trimmed and empty sentences are dropped.
std::vector<Sentence> split_sentences(std::string_view body, std::string_view job_id = {});

// Removes <...> markup, replacing each tag with a space; block-level closing
// tags (</p>, <br>, </li>, </div>) become newlines.
std::string strip_tags(std::string_view html);

std::string join(const Tokens& tokens, std::string_view sep = " ");

// 64-bit FNV-1a over the raw bytes.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace sqgen
