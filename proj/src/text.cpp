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

#include "sqgen/text.hpp"

#include <cctype>

namespace sqgen {
namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

char lower(unsigned char c) {
  return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (!is_word_byte(c)) {
      ++i;
      continue;
    }
    std::string tok;
    while (i < n) {
      const auto ch = static_cast<unsigned char>(text[i]);
      if (is_word_byte(ch)) {
        tok.push_back(lower(ch));
        ++i;
      } else if ((ch == '.' || ch == '\'') && i + 1 < n &&
                 is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
        tok.push_back(static_cast<char>(ch));
        ++i;
      } else if (ch == '+' || ch == '#') {
        while (i < n && (text[i] == '+' || text[i] == '#')) tok.push_back(text[i++]);
        break;
      } else {
        break;
      }
    }
    out.push_back(std::move(tok));
  }
  return out;
}

std::vector<Sentence> split_sentences(std::string_view body, std::string_view job_id) {
  std::vector<Sentence> out;
  auto emit = [&](std::string_view piece) {
    piece = trim(piece);
    if (piece.empty()) return;
    Sentence s;
    s.job_id = std::string(job_id);
    s.position = out.size();
    s.text = std::string(piece);
    s.tokens = tokenize(s.text);
    out.push_back(std::move(s));
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c == '\n') {
      emit(body.substr(start, i - start));
      start = i + 1;
    } else if ((c == '.' || c == '!' || c == '?' || c == ';') && i + 1 < body.size() &&
               is_space(body[i + 1])) {
      emit(body.substr(start, i + 1 - start));
      start = i + 1;
    }
  }
  if (start < body.size()) emit(body.substr(start));
  return out;
}

std::string strip_tags(std::string_view html) {
  std::string out;
  out.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      out.push_back(html[i++]);
      continue;
    }
    const auto close = html.find('>', i);
    if (close == std::string_view::npos) {
      out.append(html.substr(i));
      break;
    }
    std::string tag;
    for (char c : html.substr(i + 1, close - i - 1)) {
      if (is_space(c)) break;
      tag.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    const bool block = tag == "br" || tag == "br/" || tag == "/p" || tag == "/li" ||
                       tag == "/div" || tag == "li" || tag == "p";
    out.push_back(block ? '\n' : ' ');
    i = close + 1;
  }
  return out;
}

std::string join(const Tokens& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

}  // namespace sqgen
