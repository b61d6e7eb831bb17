//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Straight-line reference computations for the evaluation harness. Text
// metrics are re-derived from their textbook formulas with full DP tables;
// molecule equality and similarity reuse the chemistry modules, which are
// checked separately.

#ifndef CONVMOL_TESTS_ORACLES_EVAL_ORACLE_HPP_
#define CONVMOL_TESTS_ORACLES_EVAL_ORACLE_HPP_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "convmol/fingerprint.hpp"
#include "convmol/metrics.hpp"
#include "convmol/smiles.hpp"

namespace convmol::oracle {

inline int edit_distance(const std::string &a, const std::string &b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) {
    d[i][0] = static_cast<int>(i);
  }
  for (std::size_t j = 0; j <= b.size(); ++j) {
    d[0][j] = static_cast<int>(j);
  }
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({ d[i - 1][j] + 1, d[i][j - 1] + 1,
                           d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1) });
    }
  }
  return d[a.size()][b.size()];
}

using Seq = std::vector<std::string>;

inline Seq words(const std::string &text) {
  Seq out;
  std::string w;
  for (unsigned char c: text) {
    if (std::isalnum(c) || c >= 0x80) {
      w += static_cast<char>(std::tolower(c));
      continue;
    }
    if (!w.empty()) {
      out.push_back(w);
      w.clear();
    }
    if (!std::isspace(c)) {
      out.push_back(std::string(1, static_cast<char>(c)));
    }
  }
  if (!w.empty()) {
    out.push_back(w);
  }
  return out;
}

inline Seq chars(const std::string &text) {
  Seq out;
  for (char c: text) {
    out.push_back(std::string(1, c));
  }
  return out;
}

inline std::map<Seq, int> grams(const Seq &s, int n) {
  std::map<Seq, int> out;
  for (int i = 0; i + n <= static_cast<int>(s.size()); ++i) {
    ++out[Seq(s.begin() + i, s.begin() + i + n)];
  }
  return out;
}

inline int overlap(const std::map<Seq, int> &a, const std::map<Seq, int> &b) {
  int total = 0;
  for (const auto &[g, c]: a) {
    auto it = b.find(g);
    total += it == b.end() ? 0 : std::min(c, it->second);
  }
  return total;
}

// Corpus BLEU: clipped counts summed over pairs, epsilon for zero-match
// orders, orders without hypothesis n-grams dropped, brevity penalty.
inline double corpus_bleu(const std::vector<std::pair<Seq, Seq>> &pairs, int max_n) {
  double hyp_len = 0, ref_len = 0;
  std::vector<double> match(max_n + 1, 0), total(max_n + 1, 0);
  for (const auto &[ref, hyp]: pairs) {
    hyp_len += hyp.size();
    ref_len += ref.size();
    for (int n = 1; n <= max_n; ++n) {
      match[n] += overlap(grams(hyp, n), grams(ref, n));
      total[n] += std::max(0, static_cast<int>(hyp.size()) - n + 1);
    }
  }
  if (hyp_len == 0) {
    return 0;
  }
  double log_p = 0;
  int used = 0;
  for (int n = 1; n <= max_n; ++n) {
    if (total[n] == 0) {
      continue;
    }
    log_p += std::log(match[n] > 0 ? match[n] / total[n] : metrics::kBleuEpsilon / total[n]);
    ++used;
  }
  const double bp = hyp_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / hyp_len);
  return bp * std::exp(log_p / used);
}

inline double f_measure(double hits, double ref_total, double hyp_total) {
  if (hits == 0 || ref_total == 0 || hyp_total == 0) {
    return 0;
  }
  const double p = hits / hyp_total, r = hits / ref_total;
  return 2 * p * r / (p + r);
}

inline int lcs(const Seq &a, const Seq &b) {
  std::vector<std::vector<int>> t(a.size() + 1, std::vector<int>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1
                                     : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t[a.size()][b.size()];
}

struct RougeTriple {
  double r1, r2, rl;
};

inline RougeTriple rouge(const Seq &ref, const Seq &hyp) {
  RougeTriple out {};
  for (int n = 1; n <= 2; ++n) {
    const double f = f_measure(overlap(grams(hyp, n), grams(ref, n)),
                               std::max(0, static_cast<int>(ref.size()) - n + 1),
                               std::max(0, static_cast<int>(hyp.size()) - n + 1));
    (n == 1 ? out.r1 : out.r2) = f;
  }
  out.rl = f_measure(lcs(ref, hyp), ref.size(), hyp.size());
  return out;
}

inline std::map<std::string, const metrics::Record *>
by_id(const std::vector<metrics::Record> &records) {
  std::map<std::string, const metrics::Record *> out;
  for (const auto &r: records) {
    out[r.id] = &r;
  }
  return out;
}

inline metrics::GenerationMetrics
generation(const std::vector<metrics::Record> &preds,
           const std::vector<metrics::Record> &refs,
           std::optional<int> only_turn = std::nullopt) {
  metrics::GenerationMetrics m;
  auto p = by_id(preds);
  std::vector<std::pair<Seq, Seq>> bleu_pairs;
  double lev = 0;
  for (const auto &[id, ref]: by_id(refs)) {
    const metrics::Record &pred = *p.at(id);
    if (only_turn && pred.turn != only_turn) {
      continue;
    }
    const std::string answer = ref->candidates.at(0);
    const std::string guess = pred.candidates.at(0);
    const auto answer_canon = smiles::canonical_smiles(answer);
    if (!answer_canon) {
      continue;
    }
    ++m.n;
    auto g = smiles::parse(guess);
    if (g) {
      ++m.valid_count;
      const auto s = fp::similarity(*g, smiles::parse_or_throw(answer));
      m.fts_rdk += s.rdk;
      m.fts_maccs += s.maccs;
      m.fts_morgan += s.morgan;
    }
    bool hit = false;
    for (std::size_t i = 0; i < std::min<std::size_t>(3, pred.candidates.size()); ++i) {
      const auto c = smiles::canonical_smiles(pred.candidates[i]);
      const bool eq = c && *c == *answer_canon;
      if (i == 0 && eq) {
        m.em += 1;
      }
      hit = hit || eq;
    }
    m.hit3 += hit ? 1 : 0;
    bleu_pairs.emplace_back(chars(answer), chars(guess));
    lev += edit_distance(guess, answer);
  }
  if (m.n > 0) {
    const double n = static_cast<double>(m.n);
    m.em /= n;
    m.hit3 /= n;
    m.validity = m.valid_count / n;
    m.levenshtein_mean = lev / n;
    m.fts_rdk /= n;
    m.fts_maccs /= n;
    m.fts_morgan /= n;
    m.bleu_char = corpus_bleu(bleu_pairs, 4);
  }
  return m;
}

inline metrics::TextMetrics understanding(const std::vector<metrics::Record> &preds,
                                          const std::vector<metrics::Record> &refs) {
  metrics::TextMetrics m;
  auto p = by_id(preds);
  std::vector<std::pair<Seq, Seq>> pairs;
  for (const auto &[id, ref]: by_id(refs)) {
    const Seq r = words(*ref->text);
    const Seq h = words(p.at(id)->text.value_or(""));
    pairs.emplace_back(r, h);
    const RougeTriple rg = rouge(r, h);
    m.rouge1 += rg.r1;
    m.rouge2 += rg.r2;
    m.rougeL += rg.rl;
  }
  if (!pairs.empty()) {
    const double n = static_cast<double>(pairs.size());
    m.rouge1 /= n;
    m.rouge2 /= n;
    m.rougeL /= n;
    m.bleu2 = corpus_bleu(pairs, 2);
    m.bleu4 = corpus_bleu(pairs, 4);
  }
  return m;
}

// Largest absolute field difference.
inline double max_diff(const metrics::GenerationMetrics &a,
                       const metrics::GenerationMetrics &b) {
  if (a.n != b.n || a.valid_count != b.valid_count) {
    return 1e9;
  }
  return std::max({ std::abs(a.em - b.em), std::abs(a.hit3 - b.hit3),
                    std::abs(a.bleu_char - b.bleu_char),
                    std::abs(a.levenshtein_mean - b.levenshtein_mean),
                    std::abs(a.fts_rdk - b.fts_rdk), std::abs(a.fts_maccs - b.fts_maccs),
                    std::abs(a.fts_morgan - b.fts_morgan),
                    std::abs(a.validity - b.validity) });
}

inline double max_diff(const metrics::TextMetrics &a, const metrics::TextMetrics &b) {
  return std::max({ std::abs(a.bleu2 - b.bleu2), std::abs(a.bleu4 - b.bleu4),
                    std::abs(a.rouge1 - b.rouge1), std::abs(a.rouge2 - b.rouge2),
                    std::abs(a.rougeL - b.rougeL) });
}

}  // namespace convmol::oracle

#endif  // CONVMOL_TESTS_ORACLES_EVAL_ORACLE_HPP_
