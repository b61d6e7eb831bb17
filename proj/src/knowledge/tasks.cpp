//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "convmol/knowledge.hpp"

namespace convmol::knowledge {

std::string sentinel(int i) {
  return "<" + std::to_string(i) + ">";
}

int sentinel_index(std::string_view token) {
  if (token.size() < 3 || token.front() != '<' || token.back() != '>') {
    return -1;
  }
  int value = 0;
  for (char c: token.substr(1, token.size() - 2)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      return -1;
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

CorruptedSpans span_corrupt(const std::vector<std::string> &tokens,
                            dialogue::Rng &rng, double corrupt_ratio,
                            double mean_span) {
  if (!(corrupt_ratio > 0 && corrupt_ratio < 1)) {
    throw std::invalid_argument("corrupt ratio must lie in (0, 1)");
  }
  const int n = static_cast<int>(tokens.size());
  if (n < 2) {
    throw std::invalid_argument("span corruption needs at least two tokens");
  }
  const int noise = std::min(n - 1, static_cast<int>(std::lround(corrupt_ratio * n)));
  if (noise == 0) {
    return { tokens, {} };
  }

  std::vector<int> lengths;
  int covered = 0;
  while (covered < noise) {
    const int len = std::min(rng.geometric(mean_span), noise - covered);
    lengths.push_back(len);
    covered += len;
  }
  const int kept = n - noise;
  while (static_cast<int>(lengths.size()) - 1 > kept) {
    const int last = lengths.back();
    lengths.pop_back();
    lengths.back() += last;
  }

  const int spans = static_cast<int>(lengths.size());
  std::vector<int> gaps(spans + 1, 0);
  for (int i = 1; i < spans; ++i) {
    gaps[i] = 1;
  }
  for (int r = kept - (spans - 1); r > 0; --r) {
    ++gaps[rng.index(gaps.size())];
  }

  CorruptedSpans out;
  int pos = 0;
  for (int i = 0; i <= spans; ++i) {
    for (int g = 0; g < gaps[i]; ++g) {
      out.input.push_back(tokens[pos++]);
    }
    if (i == spans) {
      break;
    }
    out.input.push_back(sentinel(i));
    out.target.push_back(sentinel(i));
    for (int t = 0; t < lengths[i]; ++t) {
      out.target.push_back(tokens[pos++]);
    }
  }
  return out;
}

std::vector<std::string> reconstruct(const CorruptedSpans &spans) {
  std::vector<std::vector<std::string>> fills;
  for (const std::string &tok: spans.target) {
    const int s = sentinel_index(tok);
    if (s >= 0) {
      if (s != static_cast<int>(fills.size())) {
        throw std::invalid_argument("target sentinels out of order");
      }
      fills.emplace_back();
    } else if (fills.empty()) {
      throw std::invalid_argument("target does not start with a sentinel");
    } else {
      fills.back().push_back(tok);
    }
  }
  std::vector<std::string> out;
  for (const std::string &tok: spans.input) {
    const int s = sentinel_index(tok);
    if (s < 0) {
      out.push_back(tok);
      continue;
    }
    if (s >= static_cast<int>(fills.size())) {
      throw std::invalid_argument("input sentinel missing from target");
    }
    out.insert(out.end(), fills[s].begin(), fills[s].end());
  }
  return out;
}

std::vector<std::string> smiles_tokens(std::string_view smiles) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < smiles.size()) {
    std::size_t len = 1;
    const char c = smiles[i];
    if (c == '[') {
      const std::size_t close = smiles.find(']', i);
      len = close == std::string_view::npos ? smiles.size() - i : close - i + 1;
    } else if ((c == 'C' || c == 'B') && i + 1 < smiles.size()
               && smiles[i + 1] == (c == 'C' ? 'l' : 'r')) {
      len = 2;
    } else if (c == '%' && i + 2 < smiles.size()) {
      len = 3;
    }
    out.emplace_back(smiles.substr(i, len));
    i += len;
  }
  return out;
}

std::vector<std::string> text_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i > start) {
      out.emplace_back(text.substr(start, i - start));
    }
  }
  return out;
}

TaskRecord make_mlm_record(TaskKind kind, std::string_view source,
                           dialogue::Rng &rng, double corrupt_ratio,
                           double mean_span) {
  if (kind != TaskKind::kMlmText && kind != TaskKind::kMlmSmiles) {
    throw std::invalid_argument("not a masked-language task");
  }
  const bool smiles = kind == TaskKind::kMlmSmiles;
  const auto tokens = smiles ? smiles_tokens(source) : text_tokens(source);
  const CorruptedSpans spans = span_corrupt(tokens, rng, corrupt_ratio, mean_span);
  const std::string sep = smiles ? "" : " ";
  auto join = [&](const std::vector<std::string> &toks) {
    std::string s;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (i > 0) {
        s += sep;
      }
      s += toks[i];
    }
    return s;
  };
  return { kind, std::string(kFillPrefix), join(spans.input), join(spans.target), {} };
}

std::vector<TaskRecord> make_property_records(std::string_view smiles,
                                              const std::vector<PropertyItem> &items) {
  if (!smiles::is_valid(smiles)) {
    throw std::invalid_argument("invalid SMILES: " + std::string(smiles));
  }
  std::vector<TaskRecord> out;
  for (const PropertyItem &item: items) {
    if (!is_property_name(item.property_name)) {
      throw std::invalid_argument("unknown property: " + item.property_name);
    }
    out.push_back({ TaskKind::kProperty, "Predict " + item.property_name + ":",
                    std::string(smiles), item.value_text,
                    { { "property", item.property_name } } });
  }
  return out;
}

std::string spatial_target(const smiles::MolecularGraph &g, int atom) {
  std::vector<std::string> nbrs;
  for (const smiles::Neighbor &n: smiles::neighbors(g, atom)) {
    nbrs.push_back(std::string(smiles::element_symbol(g.atoms()[n.atom].element))
                   + "(" + std::string(smiles::bond_order_name(n.order)) + ")");
  }
  std::sort(nbrs.begin(), nbrs.end());
  std::string out = "neighbors: ";
  if (nbrs.empty()) {
    out += "none";
  }
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    out += (i > 0 ? ", " : "") + nbrs[i];
  }
  out += "; aromatic: ";
  out += g.atoms()[atom].aromatic ? "yes" : "no";
  out += "; ring: ";
  std::vector<int> sizes;
  for (const auto &ring: g.rings()) {
    if (std::find(ring.begin(), ring.end(), atom) != ring.end()) {
      sizes.push_back(static_cast<int>(ring.size()));
    }
  }
  std::sort(sizes.begin(), sizes.end());
  if (sizes.empty()) {
    out += "no";
  } else {
    out += "yes(";
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      out += (i > 0 ? "," : "") + std::to_string(sizes[i]);
    }
    out += ")";
  }
  return out;
}

std::string spatial_input(std::string_view smiles, int atom) {
  return std::string(smiles) + " [atom " + std::to_string(atom) + "]";
}

int spatial_mark_count(int atoms, double mark_ratio) {
  if (atoms <= 0) {
    return 0;
  }
  const int count = static_cast<int>(std::ceil(mark_ratio * atoms - 1e-9));
  return std::clamp(count, 1, atoms);
}

std::vector<TaskRecord> make_spatial_records(const smiles::MolecularGraph &g,
                                             dialogue::Rng &rng,
                                             double mark_ratio) {
  const int n = g.num_atoms();
  const int count = spatial_mark_count(n, mark_ratio);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(rng.index(n - i));
    std::swap(order[i], order[j]);
  }
  order.resize(count);
  std::sort(order.begin(), order.end());

  std::vector<TaskRecord> out;
  for (int atom: order) {
    out.push_back({ TaskKind::kSpatial, std::string(kSpatialPrefix),
                    spatial_input(g.source(), atom), spatial_target(g, atom),
                    { { "atom", std::to_string(atom) } } });
  }
  return out;
}

std::vector<EntityRef> entities_from_mentions(
    const std::vector<lexicon::EntityMention> &mentions) {
  std::vector<EntityRef> out;
  out.reserve(mentions.size());
  for (const lexicon::EntityMention &m: mentions) {
    out.push_back({ m.surface, m.smiles, m.preferred_name });
  }
  return out;
}

std::vector<TaskRecord> make_mapping_records(std::string_view text,
                                             const std::vector<EntityRef> &entities) {
  std::vector<TaskRecord> out;
  if (entities.empty()) {
    return out;
  }
  std::string joined;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    joined += (i > 0 ? " " : "") + entities[i].smiles;
  }
  out.push_back({ TaskKind::kMapText2Smiles, std::string(kText2SmilesPrefix),
                  std::string(text), joined, {} });
  for (const EntityRef &e: entities) {
    out.push_back({ TaskKind::kMapSmiles2Name, std::string(kSmiles2NamePrefix),
                    e.smiles, e.name, {} });
  }
  return out;
}

TaskRecord make_name_record(std::string_view name, std::string_view smiles) {
  return { TaskKind::kMapName2Smiles, std::string(kName2SmilesPrefix),
           std::string(name), std::string(smiles), {} };
}

std::string make_prompt(std::string_view text,
                        const std::vector<EntityRef> &entities,
                        const std::vector<std::string> &answer_smiles) {
  std::set<std::string> answers;
  for (const std::string &a: answer_smiles) {
    if (auto c = smiles::canonical_smiles(a)) {
      answers.insert(*c);
    }
  }
  std::string listed;
  for (const EntityRef &e: entities) {
    auto c = smiles::canonical_smiles(e.smiles);
    if (c && answers.count(*c) > 0) {
      continue;
    }
    listed += (listed.empty() ? "" : "; ") + e.mention + "=" + e.smiles;
  }
  std::string out(text);
  if (!listed.empty()) {
    out += kPromptSeparator;
    out += kEntitiesLabel;
    out += listed;
  }
  return out;
}

namespace {

std::string join_ids(const std::vector<std::string> &ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    s += (i > 0 ? ", " : "") + ids[i];
  }
  return s;
}

}  // namespace

OverlapError::OverlapError(const std::vector<std::string> &ids)
    : std::runtime_error("augmentation pool overlaps references: " + join_ids(ids)),
      ids_(ids) { }

AugmentResult dual_augment(const std::vector<std::string> &pool,
                           const UnderstandingFn &understand,
                           const std::vector<dialogue::MoleculeDescriptionPair> &held_out) {
  std::set<std::string> pool_canon;
  for (const std::string &s: pool) {
    if (auto c = smiles::canonical_smiles(s)) {
      pool_canon.insert(*c);
    }
  }
  std::vector<std::string> overlap;
  std::set<std::string> reference_texts;
  for (const auto &ref: held_out) {
    auto c = smiles::canonical_smiles(ref.smiles);
    if (c && pool_canon.count(*c) > 0) {
      overlap.push_back(ref.id);
    }
    reference_texts.insert(ref.description);
  }
  if (!overlap.empty()) {
    std::sort(overlap.begin(), overlap.end());
    throw OverlapError(overlap);
  }

  AugmentResult result;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!smiles::is_valid(pool[i])) {
      ++result.skipped;
      continue;
    }
    std::string description;
    try {
      description = understand(pool[i]);
    } catch (const std::exception &) {
      ++result.skipped;
      continue;
    }
    if (description.empty() || reference_texts.count(description) > 0) {
      ++result.skipped;
      continue;
    }
    dialogue::MoleculeDescriptionPair pair;
    pair.id = "aug-" + std::to_string(i);
    pair.smiles = pool[i];
    pair.description = std::move(description);
    pair.tags = { "augmented" };
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

}  // namespace convmol::knowledge
