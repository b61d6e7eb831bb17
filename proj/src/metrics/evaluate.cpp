//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "convmol/fingerprint.hpp"
#include "convmol/metrics.hpp"
#include "convmol/smiles.hpp"

namespace convmol::metrics {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Aligned {
  const Record *prediction;
  const Record *reference;
};

// Pairs records by id in id order.
std::vector<Aligned> align(const std::vector<Record> &predictions,
                           const std::vector<Record> &references) {
  std::map<std::string, const Record *> preds, refs;
  for (const Record &r: predictions) {
    if (!preds.emplace(r.id, &r).second) {
      throw EvalError("duplicate prediction id: " + r.id);
    }
  }
  for (const Record &r: references) {
    if (!refs.emplace(r.id, &r).second) {
      throw EvalError("duplicate reference id: " + r.id);
    }
  }
  for (const auto &[id, rec]: preds) {
    if (!refs.count(id)) {
      throw EvalError("prediction id without reference: " + id);
    }
  }
  std::vector<Aligned> out;
  for (const auto &[id, rec]: refs) {
    auto it = preds.find(id);
    if (it == preds.end()) {
      throw EvalError("reference id without prediction: " + id);
    }
    out.push_back({ it->second, rec });
  }
  return out;
}

std::string reference_smiles(const Record &r) {
  if (!r.candidates.empty()) {
    return r.candidates.front();
  }
  if (r.text) {
    return *r.text;
  }
  throw EvalError("reference " + r.id + " has neither candidates nor text");
}

class GenerationAccumulator {
public:
  void add(const std::string &prediction,
           const std::vector<std::string> &candidates,
           const std::string &reference,
           const smiles::MolecularGraph &ref_graph) {
    ++n_;
    const smiles::ParseResult pred = smiles::parse(prediction);
    const std::string ref_canon = smiles::canonical(ref_graph);
    bool em = false;
    if (pred) {
      ++valid_;
      em = smiles::canonical(*pred) == ref_canon;
      const fp::SimilarityTriple sim = fp::similarity(*pred, ref_graph);
      rdk_ += sim.rdk;
      maccs_ += sim.maccs;
      morgan_ += sim.morgan;
    }
    em_ += em ? 1 : 0;
    bool hit = em;
    for (std::size_t i = 1; i < std::min<std::size_t>(3, candidates.size())
                            && !hit;
         ++i) {
      const auto c = smiles::canonical_smiles(candidates[i]);
      hit = c && *c == ref_canon;
    }
    hit3_ += hit ? 1 : 0;
    bleu_.add(char_tokens(reference), char_tokens(prediction));
    lev_ += levenshtein(prediction, reference);
  }

  GenerationMetrics finish() const {
    GenerationMetrics m;
    m.n = n_;
    m.valid_count = valid_;
    if (n_ == 0) {
      return m;
    }
    const double n = static_cast<double>(n_);
    m.em = em_ / n;
    m.hit3 = hit3_ / n;
    m.bleu_char = bleu_.score(4);
    m.levenshtein_mean = lev_ / n;
    m.fts_rdk = rdk_ / n;
    m.fts_maccs = maccs_ / n;
    m.fts_morgan = morgan_ / n;
    m.validity = valid_ / n;
    return m;
  }

private:
  std::int64_t n_ = 0;
  std::int64_t valid_ = 0;
  double em_ = 0;
  double hit3_ = 0;
  double lev_ = 0;
  double rdk_ = 0;
  double maccs_ = 0;
  double morgan_ = 0;
  BleuStats bleu_;
};

ordered_json generation_json(const GenerationMetrics &m) {
  ordered_json j;
  j["n"] = m.n;
  j["em"] = m.em;
  j["hit3"] = m.hit3;
  j["bleu_char"] = m.bleu_char;
  j["levenshtein_mean"] = m.levenshtein_mean;
  j["fts_rdk"] = m.fts_rdk;
  j["fts_maccs"] = m.fts_maccs;
  j["fts_morgan"] = m.fts_morgan;
  j["validity"] = m.validity;
  j["valid_count"] = m.valid_count;
  return j;
}

}  // namespace

std::string_view task_name(Task task) {
  return task == Task::kUnderstanding ? "understanding" : "generation";
}

Task task_from_name(std::string_view name) {
  if (name == "understanding") {
    return Task::kUnderstanding;
  }
  if (name == "generation") {
    return Task::kGeneration;
  }
  throw EvalError("unknown task: " + std::string(name));
}

std::string EvalReport::to_json() const {
  ordered_json j;
  j["task"] = task_name(task);
  j["n"] = n;
  j["reference_invalid"] = reference_invalid;
  if (text_metrics) {
    ordered_json t;
    t["bleu2"] = text_metrics->bleu2;
    t["bleu4"] = text_metrics->bleu4;
    t["rouge1"] = text_metrics->rouge1;
    t["rouge2"] = text_metrics->rouge2;
    t["rougeL"] = text_metrics->rougeL;
    t["meteor"] = nullptr;
    j["text_metrics"] = t;
  } else {
    j["text_metrics"] = nullptr;
  }
  if (gen_metrics) {
    j["gen_metrics"] = generation_json(*gen_metrics);
  } else {
    j["gen_metrics"] = nullptr;
  }
  if (per_turn.empty()) {
    j["per_turn"] = nullptr;
  } else {
    ordered_json turns = ordered_json::object();
    for (const auto &[turn, m]: per_turn) {
      turns[std::to_string(turn)] = generation_json(m);
    }
    j["per_turn"] = turns;
  }
  return j.dump(2) + "\n";
}

EvalReport evaluate_generation(const std::vector<Record> &predictions,
                               const std::vector<Record> &references) {
  EvalReport report;
  report.task = Task::kGeneration;
  GenerationAccumulator all;
  std::map<int, GenerationAccumulator> turns;

  for (const Aligned &pair: align(predictions, references)) {
    const Record &pred = *pair.prediction;
    const Record &ref = *pair.reference;
    if (pred.candidates.empty()) {
      throw EvalError("prediction " + pred.id + " has no candidates");
    }
    const std::string ref_smiles = reference_smiles(ref);
    const smiles::ParseResult ref_graph = smiles::parse(ref_smiles);
    if (!ref_graph) {
      ++report.reference_invalid;
      continue;
    }
    all.add(pred.candidates.front(), pred.candidates, ref_smiles, *ref_graph);
    const std::optional<int> turn = pred.turn ? pred.turn : ref.turn;
    if (turn) {
      turns[*turn].add(pred.candidates.front(), pred.candidates, ref_smiles,
                       *ref_graph);
    }
  }

  report.gen_metrics = all.finish();
  report.n = report.gen_metrics->n;
  for (const auto &[turn, acc]: turns) {
    report.per_turn[turn] = acc.finish();
  }
  return report;
}

EvalReport evaluate_understanding(const std::vector<Record> &predictions,
                                  const std::vector<Record> &references) {
  EvalReport report;
  report.task = Task::kUnderstanding;
  BleuStats stats;
  double r1 = 0, r2 = 0, rl = 0;
  for (const Aligned &pair: align(predictions, references)) {
    if (!pair.reference->text) {
      throw EvalError("reference " + pair.reference->id + " has no text");
    }
    const Tokens ref = word_tokens(*pair.reference->text);
    const Tokens hyp = word_tokens(pair.prediction->text.value_or(""));
    stats.add(ref, hyp);
    const RougeScores r = rouge(ref, hyp);
    r1 += r.rouge1;
    r2 += r.rouge2;
    rl += r.rougeL;
    ++report.n;
  }
  TextMetrics m;
  if (report.n > 0) {
    const double n = static_cast<double>(report.n);
    m.bleu2 = stats.score(2);
    m.bleu4 = stats.score(4);
    m.rouge1 = r1 / n;
    m.rouge2 = r2 / n;
    m.rougeL = rl / n;
  }
  report.text_metrics = m;
  return report;
}

}  // namespace convmol::metrics
