//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_METRICS_HPP_
#define CONVMOL_METRICS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace convmol::metrics {

using Tokens = std::vector<std::string>;

// Lowercased words; every punctuation character is its own token.
Tokens word_tokens(std::string_view text);
Tokens char_tokens(std::string_view text);

inline constexpr double kBleuEpsilon = 0.1;

/// Clipped n-gram statistics; merging is associative and commutative.
class BleuStats {
public:
  void add(const Tokens &reference, const Tokens &hypothesis);
  void merge(const BleuStats &other);

  // Orders for which the hypotheses hold no n-grams are left out and the
  // remaining weights renormalized. Empty hypotheses score 0.
  double score(int max_n) const;

  std::int64_t matches(int n) const { return matches_[n - 1]; }
  std::int64_t totals(int n) const { return totals_[n - 1]; }
  std::int64_t hypothesis_length() const { return hyp_len_; }
  std::int64_t reference_length() const { return ref_len_; }

private:
  std::array<std::int64_t, 4> matches_ {};
  std::array<std::int64_t, 4> totals_ {};
  std::int64_t hyp_len_ = 0;
  std::int64_t ref_len_ = 0;
};

/// Sentence BLEU with brevity penalty and epsilon smoothing of zero-match
/// orders. Throws std::invalid_argument unless 1 <= max_n <= 4.
double bleu(const Tokens &reference, const Tokens &hypothesis, int max_n);

double corpus_bleu(const std::vector<Tokens> &references,
                   const std::vector<Tokens> &hypotheses, int max_n);

struct RougeScores {
  double rouge1 = 0;
  double rouge2 = 0;
  double rougeL = 0;
};

/// F1 of unigram, bigram and longest-common-subsequence overlap.
RougeScores rouge(const Tokens &reference, const Tokens &hypothesis);

/// Unit-cost edit distance over bytes.
int levenshtein(std::string_view a, std::string_view b);

/// Canonical SMILES equality; false when either side does not parse.
bool exact_match(std::string_view prediction, std::string_view reference);

bool hit_at_k(const std::vector<std::string> &candidates,
              std::string_view reference, int k);

class EvalError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One line of a prediction or reference file.
struct Record {
  std::string id;
  std::optional<int> turn;
  std::vector<std::string> candidates;
  std::optional<std::string> text;
};

// Throws EvalError on malformed input, naming the line.
Record parse_record(std::string_view json_line);
std::string record_to_json(const Record &record);
std::vector<Record> read_records(const std::filesystem::path &path);
std::vector<Record> parse_records(std::string_view jsonl);

enum class Task { kUnderstanding, kGeneration };

std::string_view task_name(Task task);
Task task_from_name(std::string_view name);

struct GenerationMetrics {
  std::int64_t n = 0;
  double em = 0;
  double hit3 = 0;
  double bleu_char = 0;
  double levenshtein_mean = 0;
  double fts_rdk = 0;
  double fts_maccs = 0;
  double fts_morgan = 0;
  double validity = 0;
  std::int64_t valid_count = 0;
};

struct TextMetrics {
  double bleu2 = 0;
  double bleu4 = 0;
  double rouge1 = 0;
  double rouge2 = 0;
  double rougeL = 0;
};

struct EvalReport {
  Task task = Task::kGeneration;
  std::int64_t n = 0;
  std::int64_t reference_invalid = 0;
  std::optional<TextMetrics> text_metrics;
  std::optional<GenerationMetrics> gen_metrics;
  // Keyed by turn number; filled when records carry turns.
  std::map<int, GenerationMetrics> per_turn;

  // Pretty-printed JSON document; METEOR is always null.
  std::string to_json() const;
};

/// Scores rank-1 candidates (and top-3 for hit@3) against references
/// aligned by id. The reference molecule is the first candidate of the
/// reference record, or its text. Throws EvalError on id mismatch or
/// duplicate ids.
EvalReport evaluate_generation(const std::vector<Record> &predictions,
                               const std::vector<Record> &references);

/// Corpus BLEU-2/4 and mean ROUGE over word tokens of the text fields.
EvalReport evaluate_understanding(const std::vector<Record> &predictions,
                                  const std::vector<Record> &references);

}  // namespace convmol::metrics

#endif  // CONVMOL_METRICS_HPP_
