//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "convmol/metrics.hpp"
#include "convmol/smiles.hpp"

namespace convmol::metrics {
namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

using NgramCounts = std::map<std::vector<std::string_view>, int>;

NgramCounts count_ngrams(const Tokens &tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) {
    return counts;
  }
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> gram(tokens.begin() + i,
                                       tokens.begin() + i + n);
    ++counts[gram];
  }
  return counts;
}

int clipped_overlap(const NgramCounts &ref, const NgramCounts &hyp) {
  int overlap = 0;
  for (const auto &[gram, count]: hyp) {
    auto it = ref.find(gram);
    if (it != ref.end()) {
      overlap += std::min(count, it->second);
    }
  }
  return overlap;
}

void check_order(int max_n) {
  if (max_n < 1 || max_n > 4) {
    throw std::invalid_argument("BLEU order must be in 1..4");
  }
}

double f1(int overlap, int ref_total, int hyp_total) {
  if (overlap == 0 || ref_total == 0 || hyp_total == 0) {
    return 0.0;
  }
  const double p = static_cast<double>(overlap) / hyp_total;
  const double r = static_cast<double>(overlap) / ref_total;
  return 2 * p * r / (p + r);
}

int lcs_length(const Tokens &a, const Tokens &b) {
  std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

Tokens word_tokens(std::string_view text) {
  Tokens tokens;
  std::string word;
  for (unsigned char c: text) {
    if (is_word_byte(c)) {
      word += static_cast<char>(std::tolower(c));
      continue;
    }
    if (!word.empty()) {
      tokens.push_back(std::move(word));
      word.clear();
    }
    if (std::isspace(c) == 0) {
      tokens.emplace_back(1, static_cast<char>(c));
    }
  }
  if (!word.empty()) {
    tokens.push_back(std::move(word));
  }
  return tokens;
}

Tokens char_tokens(std::string_view text) {
  Tokens tokens;
  tokens.reserve(text.size());
  for (char c: text) {
    tokens.emplace_back(1, c);
  }
  return tokens;
}

void BleuStats::add(const Tokens &reference, const Tokens &hypothesis) {
  hyp_len_ += static_cast<std::int64_t>(hypothesis.size());
  ref_len_ += static_cast<std::int64_t>(reference.size());
  for (int n = 1; n <= 4; ++n) {
    const NgramCounts hyp = count_ngrams(hypothesis, n);
    const NgramCounts ref = count_ngrams(reference, n);
    matches_[n - 1] += clipped_overlap(ref, hyp);
    totals_[n - 1] +=
        std::max<std::int64_t>(0, static_cast<std::int64_t>(hypothesis.size())
                                      - n + 1);
  }
}

void BleuStats::merge(const BleuStats &other) {
  for (int i = 0; i < 4; ++i) {
    matches_[i] += other.matches_[i];
    totals_[i] += other.totals_[i];
  }
  hyp_len_ += other.hyp_len_;
  ref_len_ += other.ref_len_;
}

double BleuStats::score(int max_n) const {
  check_order(max_n);
  if (hyp_len_ == 0) {
    return 0.0;
  }
  double log_sum = 0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    const std::int64_t total = totals_[n - 1];
    if (total == 0) {
      continue;
    }
    const std::int64_t match = matches_[n - 1];
    const double p = match > 0 ? static_cast<double>(match) / total
                               : kBleuEpsilon / static_cast<double>(total);
    log_sum += std::log(p);
    ++orders;
  }
  const double precision = std::exp(log_sum / orders);
  const double bp =
      hyp_len_ > ref_len_
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len_) / hyp_len_);
  return bp * precision;
}

double bleu(const Tokens &reference, const Tokens &hypothesis, int max_n) {
  check_order(max_n);
  BleuStats stats;
  stats.add(reference, hypothesis);
  return stats.score(max_n);
}

double corpus_bleu(const std::vector<Tokens> &references,
                   const std::vector<Tokens> &hypotheses, int max_n) {
  check_order(max_n);
  if (references.size() != hypotheses.size()) {
    throw std::invalid_argument("corpus_bleu: reference and hypothesis "
                                "counts differ");
  }
  BleuStats stats;
  for (std::size_t i = 0; i < references.size(); ++i) {
    stats.add(references[i], hypotheses[i]);
  }
  return stats.score(max_n);
}

RougeScores rouge(const Tokens &reference, const Tokens &hypothesis) {
  RougeScores scores;
  for (int n = 1; n <= 2; ++n) {
    const NgramCounts ref = count_ngrams(reference, n);
    const NgramCounts hyp = count_ngrams(hypothesis, n);
    const int ref_total = std::max(0, static_cast<int>(reference.size()) - n + 1);
    const int hyp_total =
        std::max(0, static_cast<int>(hypothesis.size()) - n + 1);
    const double f = f1(clipped_overlap(ref, hyp), ref_total, hyp_total);
    (n == 1 ? scores.rouge1 : scores.rouge2) = f;
  }
  scores.rougeL = f1(lcs_length(reference, hypothesis),
                     static_cast<int>(reference.size()),
                     static_cast<int>(hypothesis.size()));
  return scores;
}

int levenshtein(std::string_view a, std::string_view b) {
  while (!a.empty() && !b.empty() && a.front() == b.front()) {
    a.remove_prefix(1);
    b.remove_prefix(1);
  }
  while (!a.empty() && !b.empty() && a.back() == b.back()) {
    a.remove_suffix(1);
    b.remove_suffix(1);
  }
  if (a.size() < b.size()) {
    std::swap(a, b);
  }
  std::vector<int> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) {
    row[j] = static_cast<int>(j);
  }
  for (std::size_t i = 1; i <= a.size(); ++i) {
    int diagonal = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int above = row[j];
      row[j] = std::min({ above + 1, row[j - 1] + 1,
                          diagonal + (a[i - 1] == b[j - 1] ? 0 : 1) });
      diagonal = above;
    }
  }
  return row[b.size()];
}

bool exact_match(std::string_view prediction, std::string_view reference) {
  const auto p = smiles::canonical_smiles(prediction);
  if (!p) {
    return false;
  }
  const auto r = smiles::canonical_smiles(reference);
  return r && *p == *r;
}

bool hit_at_k(const std::vector<std::string> &candidates,
              std::string_view reference, int k) {
  if (k < 1) {
    throw std::invalid_argument("hit_at_k: k must be >= 1");
  }
  const auto r = smiles::canonical_smiles(reference);
  if (!r) {
    return false;
  }
  const std::size_t limit = std::min<std::size_t>(k, candidates.size());
  for (std::size_t i = 0; i < limit; ++i) {
    const auto c = smiles::canonical_smiles(candidates[i]);
    if (c && *c == *r) {
      return true;
    }
  }
  return false;
}

}  // namespace convmol::metrics
