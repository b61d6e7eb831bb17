//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

#include "convmol/chat.hpp"
#include "convmol/smiles.hpp"

namespace convmol::chat {

const std::vector<std::string_view> &stop_words() {
  static const std::vector<std::string_view> words = {
    "a",     "about", "also",  "an",   "and",   "are",  "as",    "at",
    "be",    "been",  "being", "but",  "by",    "can",  "did",   "do",
    "does",  "for",   "from",  "had",  "has",   "have", "if",    "in",
    "into",  "is",    "it",    "its",  "no",    "not",  "of",    "on",
    "or",    "so",    "such",  "than", "that",  "the",  "then",  "there",
    "these", "this",  "those", "to",   "was",   "were", "which", "who",
    "will",  "with",
  };
  return words;
}

std::vector<std::string> retrieval_terms(std::string_view text) {
  const auto &stops = stop_words();
  std::vector<std::string> terms;
  std::string word;
  auto flush = [&]() {
    if (!word.empty()
        && !std::binary_search(stops.begin(), stops.end(), std::string_view(word))) {
      terms.push_back(word);
    }
    word.clear();
  };
  for (char c: text) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x80 || std::isalnum(u)) {
      word += static_cast<char>(std::tolower(u));
    } else {
      flush();
    }
  }
  flush();
  return terms;
}

namespace {

std::map<std::string, int> term_counts(std::string_view text) {
  const auto terms = retrieval_terms(text);
  std::map<std::string, int> counts;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    ++counts[terms[i]];
    if (i + 1 < terms.size()) {
      ++counts[terms[i] + " " + terms[i + 1]];
    }
  }
  return counts;
}

}  // namespace

RetrievalBackend::RetrievalBackend(
    std::vector<dialogue::MoleculeDescriptionPair> corpus)
    : corpus_(std::move(corpus)) {
  if (corpus_.empty()) {
    throw std::invalid_argument("retrieval corpus is empty");
  }
  for (const auto &pair: corpus_) {
    auto parsed = smiles::parse(pair.smiles);
    if (!parsed) {
      throw std::invalid_argument("corpus entry " + pair.id
                                  + " has an invalid SMILES: "
                                  + parsed.error().message());
    }
    canonical_.push_back(smiles::canonical(*parsed));
    fingerprints_.push_back(fp::morgan(*parsed));
  }

  std::vector<std::map<std::string, int>> counts;
  for (const auto &pair: corpus_) {
    counts.push_back(term_counts(pair.description));
    for (const auto &[term, c]: counts.back()) {
      vocabulary_.emplace(term, static_cast<int>(vocabulary_.size()));
    }
  }
  std::vector<int> df(vocabulary_.size(), 0);
  for (const auto &doc: counts) {
    for (const auto &[term, c]: doc) {
      ++df[vocabulary_.at(term)];
    }
  }
  const double n = static_cast<double>(corpus_.size());
  idf_.resize(df.size());
  for (std::size_t t = 0; t < df.size(); ++t) {
    idf_[t] = std::log((1.0 + n) / (1.0 + df[t])) + 1.0;
  }
  for (const auto &pair: corpus_) {
    documents_.push_back(vectorize(pair.description));
  }
}

RetrievalBackend::Vector
RetrievalBackend::vectorize(std::string_view text) const {
  Vector v;
  for (const auto &[term, c]: term_counts(text)) {
    auto it = vocabulary_.find(term);
    if (it == vocabulary_.end()) {
      continue;
    }
    v.emplace_back(it->second, (1.0 + std::log(c)) * idf_[it->second]);
  }
  std::sort(v.begin(), v.end());
  double norm = 0;
  for (auto [t, w]: v) {
    norm += w * w;
  }
  norm = std::sqrt(norm);
  if (norm > 0) {
    for (auto &entry: v) {
      entry.second /= norm;
    }
  }
  return v;
}

std::vector<double> RetrievalBackend::scores(std::string_view query) const {
  const Vector q = vectorize(query);
  std::vector<double> out(documents_.size(), 0.0);
  for (std::size_t d = 0; d < documents_.size(); ++d) {
    const Vector &doc = documents_[d];
    std::size_t i = 0, j = 0;
    double dot = 0;
    while (i < q.size() && j < doc.size()) {
      if (q[i].first < doc[j].first) {
        ++i;
      } else if (doc[j].first < q[i].first) {
        ++j;
      } else {
        dot += q[i++].second * doc[j++].second;
      }
    }
    out[d] = dot;
  }
  return out;
}

std::vector<int> RetrievalBackend::rank(std::string_view query) const {
  const std::vector<double> s = scores(query);
  std::vector<int> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return s[x] > s[y]; });
  return order;
}

Generation RetrievalBackend::generate(std::string_view query, int k) {
  if (k < 1) {
    throw BackendError("k must be positive");
  }
  std::vector<std::string> out;
  for (int idx: rank(query)) {
    if (static_cast<int>(out.size()) == k) {
      break;
    }
    out.push_back(corpus_[idx].smiles);
  }
  return normalize_generation(std::move(out), k);
}

int RetrievalBackend::nearest(std::string_view smiles) const {
  auto parsed = smiles::parse(smiles);
  if (!parsed) {
    throw BackendError("invalid SMILES: " + parsed.error().message());
  }
  const std::string canon = smiles::canonical(*parsed);
  for (std::size_t i = 0; i < canonical_.size(); ++i) {
    if (canonical_[i] == canon) {
      return static_cast<int>(i);
    }
  }
  const fp::Fingerprint query = fp::morgan(*parsed);
  int best = 0;
  double best_sim = -1;
  for (std::size_t i = 0; i < fingerprints_.size(); ++i) {
    const double sim = fp::tanimoto(query, fingerprints_[i]);
    if (sim > best_sim) {
      best_sim = sim;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::string RetrievalBackend::understand(std::string_view smiles) {
  return corpus_[nearest(smiles)].description;
}

Generation normalize_generation(std::vector<std::string> candidates, int k) {
  if (k < 1) {
    throw BackendError("k must be positive");
  }
  if (candidates.empty()) {
    throw BackendError("backend returned no candidates");
  }
  Generation g;
  if (static_cast<int>(candidates.size()) > k) {
    candidates.resize(k);
  }
  while (static_cast<int>(candidates.size()) < k) {
    candidates.push_back(candidates.front());
    g.padded = true;
  }
  g.candidates = std::move(candidates);
  return g;
}

std::vector<std::string>
BackendCandidateProvider::propose(const dialogue::ProposalRequest &req) {
  try {
    return backend_.generate(req.text, req.k).candidates;
  } catch (const BackendError &e) {
    throw dialogue::ProviderError(e.what());
  }
}

}  // namespace convmol::chat
