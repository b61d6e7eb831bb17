//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_KNOWLEDGE_HPP_
#define CONVMOL_KNOWLEDGE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "convmol/dialogue.hpp"
#include "convmol/lexicon.hpp"
#include "convmol/smiles.hpp"

namespace convmol::knowledge {

enum class TaskKind {
  kMlmText,
  kMlmSmiles,
  kProperty,
  kSpatial,
  kMapName2Smiles,
  kMapSmiles2Name,
  kMapText2Smiles,
};

std::string_view task_kind_name(TaskKind kind);
// Throws std::invalid_argument for unknown names.
TaskKind task_kind_from_name(std::string_view name);

struct TaskRecord {
  TaskKind task = TaskKind::kMlmText;
  std::string prefix;
  std::string input;
  std::string target;
  std::map<std::string, std::string> meta;

  friend bool operator==(const TaskRecord &, const TaskRecord &) = default;
};

std::string record_to_json(const TaskRecord &record);
// Throws std::runtime_error on schema violations or an invalid prefix.
TaskRecord parse_task_record(std::string_view json_line);
std::vector<TaskRecord> read_task_records(const std::filesystem::path &path);

inline constexpr std::string_view kFillPrefix = "Fill:";
inline constexpr std::string_view kSpatialPrefix = "Spatial:";
inline constexpr std::string_view kName2SmilesPrefix = "Name to SMILES:";
inline constexpr std::string_view kSmiles2NamePrefix = "SMILES to name:";
inline constexpr std::string_view kText2SmilesPrefix = "Text to SMILES:";

// The 15 property types in a fixed order.
const std::vector<std::string_view> &property_names();
bool is_property_name(std::string_view name);

// True when `prefix` is the one the prefix table assigns to `kind`.
bool prefix_matches(TaskKind kind, std::string_view prefix);

// ---- span corruption -----------------------------------------------------

// "<0>", "<1>", ...
std::string sentinel(int i);
// Index of a sentinel token, or -1.
int sentinel_index(std::string_view token);

struct CorruptedSpans {
  std::vector<std::string> input;
  std::vector<std::string> target;
};

/// T5-style span corruption. round(ratio * n) tokens (at most n - 1) are
/// covered by non-adjacent spans whose lengths are geometric with mean
/// `mean_span`. Throws std::invalid_argument unless 0 < ratio < 1 and
/// there are at least two tokens.
CorruptedSpans span_corrupt(const std::vector<std::string> &tokens,
                            dialogue::Rng &rng, double corrupt_ratio = 0.15,
                            double mean_span = 3.0);

// Inverse of span_corrupt.
std::vector<std::string> reconstruct(const CorruptedSpans &spans);

// Bracket atoms, two-letter halogens and %nn ring labels are single tokens.
std::vector<std::string> smiles_tokens(std::string_view smiles);
std::vector<std::string> text_tokens(std::string_view text);

// Fill: record; SMILES tokens are joined without spaces, text with spaces.
TaskRecord make_mlm_record(TaskKind kind, std::string_view source,
                           dialogue::Rng &rng, double corrupt_ratio = 0.15,
                           double mean_span = 3.0);

// ---- property and spatial records ---------------------------------------

struct PropertyItem {
  std::string property_name;
  std::string value_text;
};

// Throws std::invalid_argument for an invalid SMILES or unknown property.
std::vector<TaskRecord> make_property_records(std::string_view smiles,
                                              const std::vector<PropertyItem> &items);

/// "neighbors: C(single), O(double); aromatic: no; ring: yes(5,6)".
std::string spatial_target(const smiles::MolecularGraph &g, int atom);
std::string spatial_input(std::string_view smiles, int atom);
// max(1, ceil(mark_ratio * atoms)), capped at the atom count.
int spatial_mark_count(int atoms, double mark_ratio = 0.15);

/// One Spatial: record per randomly marked atom, in atom order.
std::vector<TaskRecord> make_spatial_records(const smiles::MolecularGraph &g,
                                             dialogue::Rng &rng,
                                             double mark_ratio = 0.15);

// ---- mapping and prompting ----------------------------------------------

struct EntityRef {
  std::string mention;
  std::string smiles;
  std::string name;
};

std::vector<EntityRef> entities_from_mentions(
    const std::vector<lexicon::EntityMention> &mentions);

/// A Text to SMILES: record plus one SMILES to name: record per entity.
/// Empty when there are no entities.
std::vector<TaskRecord> make_mapping_records(std::string_view text,
                                             const std::vector<EntityRef> &entities);

TaskRecord make_name_record(std::string_view name, std::string_view smiles);

inline constexpr std::string_view kPromptSeparator = "\n";
inline constexpr std::string_view kEntitiesLabel = "Entities: ";

/// text + "\nEntities: m1=SMILES1; m2=SMILES2", leaving out entities that
/// are canonical-equal to an answer. Returns text alone when none survive.
std::string make_prompt(std::string_view text,
                        const std::vector<EntityRef> &entities,
                        const std::vector<std::string> &answer_smiles);

// ---- dual augmentation ---------------------------------------------------

class OverlapError: public std::runtime_error {
public:
  OverlapError(const std::vector<std::string> &ids);
  const std::vector<std::string> &ids() const { return ids_; }

private:
  std::vector<std::string> ids_;
};

using UnderstandingFn = std::function<std::string(std::string_view smiles)>;

struct AugmentResult {
  std::vector<dialogue::MoleculeDescriptionPair> pairs;
  std::int64_t skipped = 0;
};

/// One "augmented" pair per pool molecule, described by `understand`.
/// Throws OverlapError naming the reference ids whose molecules are in the
/// pool. Molecules that fail to parse, whose description call throws, or
/// whose description equals a reference text are skipped and counted.
AugmentResult dual_augment(const std::vector<std::string> &pool,
                           const UnderstandingFn &understand,
                           const std::vector<dialogue::MoleculeDescriptionPair> &held_out = {});

// ---- pre-training mix ----------------------------------------------------

struct PretrainSources {
  std::optional<std::filesystem::path> text;  // one document per line
  std::optional<std::filesystem::path> smiles;  // one SMILES per line
  std::optional<std::filesystem::path> properties;  // {"smiles","properties":{}}
  std::optional<std::filesystem::path> lexicon;  // knowledge base
  std::optional<std::filesystem::path> descriptions;  // pair JSONL
};

// Reads {"text":..., "smiles":..., ...}; relative paths resolve against the
// manifest's directory.
PretrainSources read_sources_manifest(const std::filesystem::path &path);

struct PretrainConfig {
  std::uint64_t seed = 0;
  double corrupt_ratio = 0.15;
  double mean_span = 3.0;
  double mark_ratio = 0.15;
  bool spatial = true;
};

/// Builds every record the sources support and shuffles them by seed.
std::vector<TaskRecord> generate_pretraining(const PretrainSources &sources,
                                             const PretrainConfig &config);

}  // namespace convmol::knowledge

#endif  // CONVMOL_KNOWLEDGE_HPP_
