//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_DIALOGUE_HPP_
#define CONVMOL_DIALOGUE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace convmol::dialogue {

struct MoleculeDescriptionPair {
  std::string id;
  std::string smiles;
  std::string description;
  std::vector<std::string> names;
  // Free-form labels such as "augmented"; serialized only when present.
  std::vector<std::string> tags;
};

// Throws std::runtime_error naming the line on schema violations.
std::vector<MoleculeDescriptionPair>
read_pairs(const std::filesystem::path &path);
MoleculeDescriptionPair parse_pair(std::string_view json_line);
std::string pair_to_json(const MoleculeDescriptionPair &pair);

struct DialogueTurn {
  int k = 0;
  std::string text;
  std::string expected_molecule;
  double sim_to_final = 0;
  bool low_sim_retained = false;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string provider;
  // Path fingerprint of each turn's expected molecule, hex encoded.
  std::vector<std::string> candidate_fingerprints;
};

struct Dialogue {
  std::string id;
  std::vector<DialogueTurn> turns;
  Provenance provenance;
};

std::string dialogue_to_json(const Dialogue &d);
Dialogue parse_dialogue(std::string_view json_line);

/// Deterministic per-item random source. Draws are defined bit-exactly
/// from mt19937_64 so builds agree across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed): engine_(seed) { }

  // Seed derived from a global seed and an item id.
  static Rng for_item(std::uint64_t seed, std::string_view id);

  double uniform01();
  // Uniform index in [0, n); n must be positive.
  std::size_t index(std::size_t n);
  // Geometric draw on {1, 2, ...} with the given mean (>= 1).
  int geometric(double mean);
  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

/// Sentence boundary: '.', '!' or '?' followed by whitespace and then an
/// uppercase letter or digit. "e.g.", "i.e." and "approx." never end a
/// sentence.
std::vector<std::string> split_sentences(std::string_view text);

/// Reverses the sentences; turn k is the first k reversed sentences joined
/// by single spaces.
std::vector<std::string> build_turns(const std::vector<std::string> &sentences);

/// Case-insensitive, word-bounded replacement of every name by
/// "the molecule", longest name first.
std::string replace_synonyms(std::string_view text,
                             const std::vector<std::string> &names);

// True when `name` occurs in `text` under the replace_synonyms rules.
bool contains_name(std::string_view text, std::string_view name);

struct GateConfig {
  double lower = 0.5;
  double upper = 1.0;
};

struct Selection {
  std::string smiles;
  double sim = 0;
  bool retained = false;
};

struct SelectionTrace {
  // Set when no candidate passed the gate but a valid one lay below it.
  bool low_sim_opportunity = false;
};

/// Picks an intermediate molecule with path-fingerprint similarity to
/// `final_smiles` in [gate.lower, gate.upper). Failing that, with
/// probability retain_prob keeps the most similar valid candidate below
/// the gate and flags it retained.
std::optional<Selection>
select_intermediate(const std::vector<std::string> &candidates,
                    std::string_view final_smiles, Rng &rng,
                    double retain_prob, const GateConfig &gate = {},
                    SelectionTrace *trace = nullptr);

enum class FilterReason { kNone, kSingleTurn, kDash };

FilterReason filter_reason(const Dialogue &d);
std::optional<Dialogue> apply_filters(Dialogue d);

class ProviderError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ProposalRequest {
  std::string_view pair_id;
  std::string_view text;
  int k = 5;
};

/// Source of intermediate candidates. Implementations must be safe to call
/// concurrently; failures throw ProviderError.
class CandidateProvider {
public:
  virtual ~CandidateProvider() = default;
  virtual std::string id() const = 0;
  virtual std::vector<std::string> propose(const ProposalRequest &req) = 0;
};

/// Always proposes the pair's own molecule.
class EchoProvider: public CandidateProvider {
public:
  explicit EchoProvider(const std::vector<MoleculeDescriptionPair> &pairs);
  std::string id() const override { return "echo"; }
  std::vector<std::string> propose(const ProposalRequest &req) override;

private:
  std::map<std::string, std::string, std::less<>> answers_;
};

/// Replays candidates recorded in a JSONL file of
/// {"id": pair id, "text": turn text, "candidates": [...]}.
class ReplayProvider: public CandidateProvider {
public:
  explicit ReplayProvider(const std::filesystem::path &path);
  std::string id() const override { return "replay"; }
  std::vector<std::string> propose(const ProposalRequest &req) override;

private:
  std::map<std::pair<std::string, std::string>, std::vector<std::string>>
      table_;
};

struct BuildConfig {
  std::uint64_t seed = 0;
  double retain_prob = 0.05;
  GateConfig gate;
  int candidates = 5;
  int threads = 1;
};

struct BuildStats {
  std::int64_t input = 0;
  std::int64_t emitted = 0;
  std::int64_t filtered_single_turn = 0;
  std::int64_t filtered_dash = 0;
  std::int64_t filtered_invalid = 0;
  std::int64_t provider_failed = 0;
  std::map<int, std::int64_t> turn_histogram;
  std::int64_t low_sim_opportunities = 0;
  std::int64_t low_sim_retained = 0;

  std::int64_t filtered() const {
    return filtered_single_turn + filtered_dash + filtered_invalid;
  }
  std::string to_json() const;
};

struct BuildResult {
  // Sorted by id.
  std::vector<Dialogue> dialogues;
  BuildStats stats;
};

BuildResult build_dataset(const std::vector<MoleculeDescriptionPair> &pairs,
                          CandidateProvider &provider,
                          const BuildConfig &config);

// Every invariant an emitted dialogue must satisfy; empty when clean.
std::vector<std::string> check_dialogue(const Dialogue &d,
                                        const MoleculeDescriptionPair &pair,
                                        const GateConfig &gate = {});

}  // namespace convmol::dialogue

#endif  // CONVMOL_DIALOGUE_HPP_
