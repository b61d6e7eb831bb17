//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_LEXICON_HPP_
#define CONVMOL_LEXICON_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace convmol::lexicon {

// Lowercases ASCII letters, collapses whitespace runs to one space, trims.
std::string normalize_name(std::string_view name);

struct Entry {
  std::string name;  // normalized
  std::string smiles;  // canonical
  std::string preferred_name;
};

enum class AddStatus { kAdded, kEmptyName, kInvalidSmiles, kDuplicate };

/// Name to molecule dictionary with a character trie over normalized
/// names. Immutable after loading; concurrent lookups are safe.
class Lexicon {
public:
  Lexicon();

  // The first entry for a name wins.
  AddStatus add(std::string_view name, std::string_view smiles,
                std::string_view preferred_name = {});

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry> &entries() const { return entries_; }

  // nullptr when absent; `name` is normalized first.
  const Entry *find(std::string_view name) const;

  // Entry indices of every name that is a prefix of `text` at `pos`,
  // reported as (end position, entry index).
  std::vector<std::pair<std::size_t, int>>
  prefix_matches(std::string_view text, std::size_t pos) const;

private:
  struct Node {
    std::map<char, int> next;
    int entry = -1;
  };

  std::vector<Node> nodes_;
  std::vector<Entry> entries_;
};

struct RejectedRow {
  int line;
  std::string name;
  std::string reason;
};

struct LoadReport {
  int loaded = 0;
  std::vector<RejectedRow> rejected;
};

/// Reads {"name","smiles","preferred_name"?} lines. Rows with unparseable
/// SMILES or a repeated name are skipped and reported. Throws
/// std::runtime_error for a missing file or a schema violation.
Lexicon load_kb(const std::filesystem::path &path,
                LoadReport *report = nullptr);

struct EntityMention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::string smiles;
  std::string preferred_name;
};

/// Dictionary matches bounded by non-word characters. Overlapping
/// candidates are resolved longest first, then leftmost; the result is
/// sorted by start offset.
std::vector<EntityMention> recognize(std::string_view text,
                                     const Lexicon &lex);

}  // namespace convmol::lexicon

#endif  // CONVMOL_LEXICON_HPP_
