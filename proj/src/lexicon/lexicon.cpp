//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "convmol/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "convmol/smiles.hpp"

namespace convmol::lexicon {
namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_word(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

char lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

// Normalized text plus the source offset of every normalized byte.
struct NormalizedText {
  std::string text;
  std::vector<std::size_t> source;
};

NormalizedText normalize_with_offsets(std::string_view raw) {
  NormalizedText out;
  bool pending_space = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (is_space(raw[i])) {
      pending_space = !out.text.empty();
      continue;
    }
    if (pending_space) {
      out.text += ' ';
      out.source.push_back(i - 1);
      pending_space = false;
    }
    out.text += lower(raw[i]);
    out.source.push_back(i);
  }
  return out;
}

}  // namespace

std::string normalize_name(std::string_view name) {
  return normalize_with_offsets(name).text;
}

Lexicon::Lexicon(): nodes_(1) { }

AddStatus Lexicon::add(std::string_view name, std::string_view smiles,
                       std::string_view preferred_name) {
  std::string key = normalize_name(name);
  if (key.empty()) {
    return AddStatus::kEmptyName;
  }
  auto canon = smiles::canonical_smiles(smiles);
  if (!canon) {
    return AddStatus::kInvalidSmiles;
  }

  int node = 0;
  for (char c: key) {
    auto it = nodes_[node].next.find(c);
    if (it == nodes_[node].next.end()) {
      nodes_.emplace_back();
      const int child = static_cast<int>(nodes_.size()) - 1;
      nodes_[node].next.emplace(c, child);
      node = child;
    } else {
      node = it->second;
    }
  }
  if (nodes_[node].entry >= 0) {
    return AddStatus::kDuplicate;
  }
  nodes_[node].entry = static_cast<int>(entries_.size());
  std::string preferred =
      preferred_name.empty() ? std::string(name) : std::string(preferred_name);
  entries_.push_back({ std::move(key), std::move(*canon), std::move(preferred) });
  return AddStatus::kAdded;
}

const Entry *Lexicon::find(std::string_view name) const {
  const std::string key = normalize_name(name);
  int node = 0;
  for (char c: key) {
    auto it = nodes_[node].next.find(c);
    if (it == nodes_[node].next.end()) {
      return nullptr;
    }
    node = it->second;
  }
  const int entry = nodes_[node].entry;
  return entry >= 0 ? &entries_[entry] : nullptr;
}

std::vector<std::pair<std::size_t, int>>
Lexicon::prefix_matches(std::string_view text, std::size_t pos) const {
  std::vector<std::pair<std::size_t, int>> out;
  int node = 0;
  for (std::size_t i = pos; i < text.size(); ++i) {
    auto it = nodes_[node].next.find(text[i]);
    if (it == nodes_[node].next.end()) {
      break;
    }
    node = it->second;
    if (nodes_[node].entry >= 0) {
      out.emplace_back(i + 1, nodes_[node].entry);
    }
  }
  return out;
}

Lexicon load_kb(const std::filesystem::path &path, LoadReport *report) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  Lexicon lex;
  LoadReport local;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const std::string where = path.string() + ":" + std::to_string(line_no);
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    auto string_field = [&](const char *key, bool required) -> std::string {
      auto it = row.find(key);
      if (it == row.end() || it->is_null()) {
        if (required) {
          throw std::runtime_error(where + ": missing \"" + key + "\"");
        }
        return {};
      }
      if (!it->is_string()) {
        throw std::runtime_error(where + ": \"" + key + "\" must be a string");
      }
      return it->get<std::string>();
    };
    if (!row.is_object()) {
      throw std::runtime_error(where + ": row is not an object");
    }
    const std::string name = string_field("name", true);
    const std::string smiles = string_field("smiles", true);
    const std::string preferred = string_field("preferred_name", false);

    switch (lex.add(name, smiles, preferred)) {
    case AddStatus::kAdded:
      ++local.loaded;
      break;
    case AddStatus::kEmptyName:
      local.rejected.push_back({ line_no, name, "empty name" });
      break;
    case AddStatus::kInvalidSmiles:
      local.rejected.push_back({ line_no, name, "unparseable SMILES " + smiles });
      break;
    case AddStatus::kDuplicate:
      local.rejected.push_back({ line_no, name, "duplicate name" });
      break;
    }
  }
  if (report != nullptr) {
    *report = std::move(local);
  }
  return lex;
}

std::vector<EntityMention> recognize(std::string_view text,
                                     const Lexicon &lex) {
  const NormalizedText norm = normalize_with_offsets(text);
  const std::string &t = norm.text;

  struct Candidate {
    std::size_t start, end;
    int entry;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && is_word(t[i - 1]) && is_word(t[i])) {
      continue;
    }
    for (auto [end, entry]: lex.prefix_matches(t, i)) {
      if (end < t.size() && is_word(t[end - 1]) && is_word(t[end])) {
        continue;
      }
      candidates.push_back({ i, end, entry });
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate &x, const Candidate &y) {
                     if (x.end - x.start != y.end - y.start) {
                       return x.end - x.start > y.end - y.start;
                     }
                     return x.start < y.start;
                   });

  std::vector<Candidate> chosen;
  for (const Candidate &c: candidates) {
    const bool overlaps =
        std::any_of(chosen.begin(), chosen.end(), [&](const Candidate &o) {
          return c.start < o.end && o.start < c.end;
        });
    if (!overlaps) {
      chosen.push_back(c);
    }
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const Candidate &x, const Candidate &y) {
              return x.start < y.start;
            });

  std::vector<EntityMention> out;
  out.reserve(chosen.size());
  for (const Candidate &c: chosen) {
    const Entry &e = lex.entries()[c.entry];
    EntityMention m;
    m.start = norm.source[c.start];
    m.end = norm.source[c.end - 1] + 1;
    m.surface = std::string(text.substr(m.start, m.end - m.start));
    m.smiles = e.smiles;
    m.preferred_name = e.preferred_name;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace convmol::lexicon
