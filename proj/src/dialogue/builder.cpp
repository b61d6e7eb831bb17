//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <atomic>
#include <thread>
#include <utility>
#include <vector>

#include "convmol/dialogue.hpp"
#include "convmol/fingerprint.hpp"
#include "convmol/smiles.hpp"

namespace convmol::dialogue {
namespace {

enum class Outcome {
  kEmitted,
  kSingleTurn,
  kDash,
  kInvalid,
  kProviderFailed,
};

struct PairResult {
  Outcome outcome = Outcome::kInvalid;
  Dialogue dialogue;
  std::int64_t opportunities = 0;
  std::int64_t retained = 0;
};

PairResult process_pair(const MoleculeDescriptionPair &pair,
                        CandidateProvider &provider,
                        const BuildConfig &config) {
  PairResult result;
  const smiles::ParseResult final_graph = smiles::parse(pair.smiles);
  if (!final_graph || pair.description.empty()) {
    result.outcome = Outcome::kInvalid;
    return result;
  }

  std::vector<std::string> sentences = split_sentences(pair.description);
  for (std::string &s: sentences) {
    s = replace_synonyms(s, pair.names);
  }
  const std::vector<std::string> texts = build_turns(sentences);
  if (texts.empty()) {
    result.outcome = Outcome::kInvalid;
    return result;
  }
  if (texts.back().find('-') != std::string::npos) {
    result.outcome = Outcome::kDash;
    return result;
  }

  Rng rng = Rng::for_item(config.seed, pair.id);
  Dialogue &d = result.dialogue;
  d.id = pair.id;
  d.provenance.seed = config.seed;
  d.provenance.provider = provider.id();

  for (std::size_t t = 0; t + 1 < texts.size(); ++t) {
    std::vector<std::string> candidates;
    try {
      candidates =
          provider.propose({ pair.id, texts[t], config.candidates });
    } catch (const ProviderError &) {
      result.outcome = Outcome::kProviderFailed;
      return result;
    }
    if (static_cast<int>(candidates.size()) > config.candidates) {
      candidates.resize(config.candidates);
    }
    SelectionTrace trace;
    const std::optional<Selection> pick = select_intermediate(
        candidates, pair.smiles, rng, config.retain_prob, config.gate, &trace);
    result.opportunities += trace.low_sim_opportunity ? 1 : 0;
    if (!pick) {
      continue;
    }
    result.retained += pick->retained ? 1 : 0;
    d.turns.push_back({ 0, texts[t], pick->smiles, pick->sim, pick->retained });
  }
  d.turns.push_back({ 0, texts.back(), pair.smiles, 1.0, false });

  for (std::size_t k = 0; k < d.turns.size(); ++k) {
    DialogueTurn &turn = d.turns[k];
    turn.k = static_cast<int>(k) + 1;
    const fp::Fingerprint fp =
        fp::path_fp(smiles::parse_or_throw(turn.expected_molecule));
    d.provenance.candidate_fingerprints.push_back(fp.to_hex());
  }

  switch (filter_reason(d)) {
  case FilterReason::kSingleTurn:
    result.outcome = Outcome::kSingleTurn;
    break;
  case FilterReason::kDash:
    result.outcome = Outcome::kDash;
    break;
  case FilterReason::kNone:
    result.outcome = Outcome::kEmitted;
    break;
  }
  return result;
}

bool is_sentence_prefix(const std::string &shorter, const std::string &longer) {
  return longer.size() > shorter.size()
         && longer.compare(0, shorter.size(), shorter) == 0
         && longer[shorter.size()] == ' ';
}

}  // namespace

std::optional<Selection>
select_intermediate(const std::vector<std::string> &candidates,
                    std::string_view final_smiles, Rng &rng,
                    double retain_prob, const GateConfig &gate,
                    SelectionTrace *trace) {
  const fp::Fingerprint target =
      fp::path_fp(smiles::parse_or_throw(final_smiles));
  std::vector<Selection> eligible;
  std::optional<Selection> best_below;
  for (const std::string &c: candidates) {
    const smiles::ParseResult g = smiles::parse(c);
    if (!g) {
      continue;
    }
    const double sim = fp::tanimoto(fp::path_fp(*g), target);
    if (sim >= gate.lower && sim < gate.upper) {
      eligible.push_back({ c, sim, false });
    } else if (sim < gate.lower && (!best_below || sim > best_below->sim)) {
      best_below = Selection { c, sim, true };
    }
  }
  if (!eligible.empty()) {
    return eligible[rng.index(eligible.size())];
  }
  if (!best_below) {
    return std::nullopt;
  }
  if (trace != nullptr) {
    trace->low_sim_opportunity = true;
  }
  if (rng.uniform01() < retain_prob) {
    return best_below;
  }
  return std::nullopt;
}

FilterReason filter_reason(const Dialogue &d) {
  if (d.turns.size() < 2) {
    return FilterReason::kSingleTurn;
  }
  for (const DialogueTurn &turn: d.turns) {
    if (turn.text.find('-') != std::string::npos) {
      return FilterReason::kDash;
    }
  }
  return FilterReason::kNone;
}

std::optional<Dialogue> apply_filters(Dialogue d) {
  if (filter_reason(d) != FilterReason::kNone) {
    return std::nullopt;
  }
  return d;
}

BuildResult build_dataset(const std::vector<MoleculeDescriptionPair> &pairs,
                          CandidateProvider &provider,
                          const BuildConfig &config) {
  std::vector<PairResult> results(pairs.size());
  const int threads =
      std::max(1, std::min<int>(config.threads, static_cast<int>(pairs.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      results[i] = process_pair(pairs[i], provider, config);
    }
  } else {
    std::atomic<std::size_t> next { 0 };
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < pairs.size(); i = next++) {
          results[i] = process_pair(pairs[i], provider, config);
        }
      });
    }
    for (std::thread &w: workers) {
      w.join();
    }
  }

  BuildResult out;
  BuildStats &stats = out.stats;
  stats.input = static_cast<std::int64_t>(pairs.size());
  for (PairResult &r: results) {
    stats.low_sim_opportunities += r.opportunities;
    stats.low_sim_retained += r.retained;
    switch (r.outcome) {
    case Outcome::kEmitted:
      ++stats.emitted;
      ++stats.turn_histogram[static_cast<int>(r.dialogue.turns.size())];
      out.dialogues.push_back(std::move(r.dialogue));
      break;
    case Outcome::kSingleTurn:
      ++stats.filtered_single_turn;
      break;
    case Outcome::kDash:
      ++stats.filtered_dash;
      break;
    case Outcome::kInvalid:
      ++stats.filtered_invalid;
      break;
    case Outcome::kProviderFailed:
      ++stats.provider_failed;
      break;
    }
  }
  std::stable_sort(out.dialogues.begin(), out.dialogues.end(),
                   [](const Dialogue &a, const Dialogue &b) {
                     return a.id < b.id;
                   });
  return out;
}

std::vector<std::string> check_dialogue(const Dialogue &d,
                                        const MoleculeDescriptionPair &pair,
                                        const GateConfig &gate) {
  std::vector<std::string> problems;
  if (d.turns.size() < 2) {
    problems.push_back("fewer than two turns");
  }
  for (std::size_t i = 0; i < d.turns.size(); ++i) {
    const DialogueTurn &turn = d.turns[i];
    if (turn.k != static_cast<int>(i) + 1) {
      problems.push_back("turn numbering broken at " + std::to_string(i));
    }
    if (turn.text.find('-') != std::string::npos) {
      problems.push_back("turn " + std::to_string(turn.k) + " contains '-'");
    }
    for (const std::string &name: pair.names) {
      if (contains_name(turn.text, name)) {
        problems.push_back("turn " + std::to_string(turn.k)
                           + " mentions " + name);
      }
    }
    if (i + 1 < d.turns.size()) {
      if (!is_sentence_prefix(turn.text, d.turns[i + 1].text)) {
        problems.push_back("turn " + std::to_string(turn.k)
                           + " is not a prefix of the next turn");
      }
      if (!turn.low_sim_retained
          && !(turn.sim_to_final >= gate.lower && turn.sim_to_final < gate.upper)) {
        problems.push_back("turn " + std::to_string(turn.k)
                           + " similarity outside the gate");
      }
    }
  }
  if (!d.turns.empty()) {
    const DialogueTurn &last = d.turns.back();
    if (smiles::canonical_smiles(last.expected_molecule)
            != smiles::canonical_smiles(pair.smiles)
        || last.sim_to_final != 1.0) {
      problems.push_back("final turn does not carry the answer");
    }
  }
  return problems;
}

}  // namespace convmol::dialogue
