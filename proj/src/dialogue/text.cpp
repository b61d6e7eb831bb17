//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "convmol/dialogue.hpp"
#include "convmol/fingerprint.hpp"

namespace convmol::dialogue {
namespace {

constexpr std::string_view kAbbreviations[] = { "e.g.", "i.e.", "approx." };
constexpr std::string_view kReplacement = "the molecule";

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

bool is_space(unsigned char c) {
  return std::isspace(c) != 0;
}

char lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) {
    s.remove_prefix(1);
  }
  while (!s.empty() && is_space(s.back())) {
    s.remove_suffix(1);
  }
  return s;
}

// Does `text` end at `end` (exclusive) with an exempt abbreviation?
bool ends_with_abbreviation(std::string_view text, std::size_t end) {
  for (std::string_view abbr: kAbbreviations) {
    if (end < abbr.size()) {
      continue;
    }
    const std::size_t start = end - abbr.size();
    if (lowercase(text.substr(start, abbr.size())) != abbr) {
      continue;
    }
    if (start == 0 || !is_word_byte(text[start - 1])) {
      return true;
    }
  }
  return false;
}

bool matches_at(std::string_view text, std::size_t i, std::string_view name) {
  if (i + name.size() > text.size()) {
    return false;
  }
  if (i > 0 && is_word_byte(text[i - 1])) {
    return false;
  }
  for (std::size_t k = 0; k < name.size(); ++k) {
    if (lower(text[i + k]) != name[k]) {
      return false;
    }
  }
  const std::size_t end = i + name.size();
  return end == text.size() || !is_word_byte(text[end]);
}

std::vector<std::string> normalized_names(const std::vector<std::string> &names) {
  std::vector<std::string> out;
  for (const std::string &name: names) {
    std::string n = lowercase(trim(name));
    if (!n.empty()) {
      out.push_back(std::move(n));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Rng Rng::for_item(std::uint64_t seed, std::string_view id) {
  std::string bytes;
  for (int i = 0; i < 8; ++i) {
    bytes += static_cast<char>((seed >> (8 * i)) & 0xffU);
  }
  bytes += id;
  return Rng(fp::fnv1a(bytes));
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  const auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
  return std::min(i, n - 1);
}

int Rng::geometric(double mean) {
  const double p = 1.0 / std::max(1.0, mean);
  int k = 1;
  while (uniform01() >= p) {
    ++k;
  }
  return k;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') {
      continue;
    }
    if (i + 1 >= n || !is_space(text[i + 1])) {
      continue;
    }
    std::size_t j = i + 1;
    while (j < n && is_space(text[j])) {
      ++j;
    }
    if (j >= n) {
      continue;
    }
    const auto next = static_cast<unsigned char>(text[j]);
    if (std::isupper(next) == 0 && std::isdigit(next) == 0) {
      continue;
    }
    if (c == '.' && ends_with_abbreviation(text, i + 1)) {
      continue;
    }
    const std::string_view sentence = trim(text.substr(start, i + 1 - start));
    if (!sentence.empty()) {
      sentences.emplace_back(sentence);
    }
    start = j;
  }
  const std::string_view rest = trim(text.substr(std::min(start, n)));
  if (!rest.empty()) {
    sentences.emplace_back(rest);
  }
  return sentences;
}

std::vector<std::string>
build_turns(const std::vector<std::string> &sentences) {
  std::vector<std::string> turns;
  std::string text;
  for (auto it = sentences.rbegin(); it != sentences.rend(); ++it) {
    if (!text.empty()) {
      text += ' ';
    }
    text += *it;
    turns.push_back(text);
  }
  return turns;
}

std::string replace_synonyms(std::string_view text,
                             const std::vector<std::string> &names) {
  const std::vector<std::string> sorted = normalized_names(names);
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool replaced = false;
    for (const std::string &name: sorted) {
      if (matches_at(text, i, name)) {
        out += kReplacement;
        i += name.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      out += text[i++];
    }
  }
  return out;
}

bool contains_name(std::string_view text, std::string_view name) {
  const std::string n = lowercase(trim(name));
  if (n.empty()) {
    return false;
  }
  for (std::size_t i = 0; i + n.size() <= text.size(); ++i) {
    if (matches_at(text, i, n)) {
      return true;
    }
  }
  return false;
}

}  // namespace convmol::dialogue
