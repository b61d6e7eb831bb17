//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <fstream>
#include <numeric>

#include <doctest.h>

#include "convmol/dialogue.hpp"
#include "convmol/fingerprint.hpp"
#include "convmol/smiles.hpp"
#include "unit/support.hpp"

using namespace convmol;
using namespace convmol::dialogue;

namespace {

std::vector<MoleculeDescriptionPair> toy_pairs() {
  return read_pairs(test::source_dir() / "data" / "toy_pairs.jsonl");
}

// Proposes every other molecule of the corpus, most similar first.
class AnalogProvider: public CandidateProvider {
public:
  explicit AnalogProvider(const std::vector<MoleculeDescriptionPair> &pairs) {
    for (const auto &p: pairs) {
      smiles_[p.id] = p.smiles;
    }
  }
  std::string id() const override { return "analog"; }
  std::vector<std::string> propose(const ProposalRequest &req) override {
    const auto it = smiles_.find(std::string(req.pair_id));
    if (it == smiles_.end()) {
      throw ProviderError("unknown pair");
    }
    const auto target = fp::path_fp(smiles::parse_or_throw(it->second));
    std::vector<std::pair<double, std::string>> ranked;
    for (const auto &[id, s]: smiles_) {
      if (id != it->first) {
        ranked.emplace_back(-fp::tanimoto(fp::path_fp(smiles::parse_or_throw(s)), target), s);
      }
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::string> out;
    for (int i = 0; i < req.k && i < static_cast<int>(ranked.size()); ++i) {
      out.push_back(ranked[i].second);
    }
    return out;
  }

private:
  std::map<std::string, std::string> smiles_;
};

class FailingProvider: public CandidateProvider {
public:
  std::string id() const override { return "failing"; }
  std::vector<std::string> propose(const ProposalRequest &) override {
    throw ProviderError("down");
  }
};

std::string dump(const BuildResult &r) {
  std::string out = r.stats.to_json();
  for (const auto &d: r.dialogues) {
    out += dialogue_to_json(d) + "\n";
  }
  return out;
}

double path_sim(const std::string &a, const std::string &b) {
  return fp::tanimoto(fp::path_fp(smiles::parse_or_throw(a)),
                      fp::path_fp(smiles::parse_or_throw(b)));
}

}  // namespace

TEST_SUITE("dialogue") {
  TEST_CASE("sentence splitting") {
    CHECK(split_sentences("Flash point 126 F. Corrosive to metals.")
          == std::vector<std::string> { "Flash point 126 F.", "Corrosive to metals." });
    CHECK(split_sentences("It boils at 78.4 C. It is clear.").size() == 2);
    CHECK(split_sentences("Used in dyes, e.g. Aniline black.").size() == 1);
    CHECK(split_sentences("Approx. Ten grams. Done").size() == 2);
    CHECK(split_sentences("Is it toxic? Yes! 3 isomers exist.").size() == 3);
    CHECK(split_sentences("lower case. follows").size() == 1);
    CHECK(split_sentences("   ").empty());
  }

  TEST_CASE("turns are growing reversed prefixes") {
    const auto turns = build_turns({ "A a.", "B b.", "C c." });
    CHECK(turns == std::vector<std::string> { "C c.", "C c. B b.", "C c. B b. A a." });
    CHECK(build_turns({}).empty());
  }

  TEST_CASE("synonym replacement") {
    CHECK(replace_synonyms("Acetic acid is an acid.", { "acid", "acetic acid" })
          == "the molecule is an the molecule.");
    CHECK(replace_synonyms("Acetic acidity rises.", { "acetic acid" })
          == "Acetic acidity rises.");
    CHECK(replace_synonyms("ETHANOL, ethanol.", { " Ethanol " })
          == "the molecule, the molecule.");
    CHECK(replace_synonyms("No names here.", {}) == "No names here.");
    CHECK(contains_name("Made from Benzene.", "benzene"));
    CHECK_FALSE(contains_name("Made from benzenes.", "benzene"));
    CHECK_FALSE(contains_name("anything", "  "));
  }

  TEST_CASE("random source is reproducible per item") {
    Rng a = Rng::for_item(7, "toy-01"), b = Rng::for_item(7, "toy-01");
    Rng c = Rng::for_item(7, "toy-02"), d = Rng::for_item(8, "toy-01");
    bool c_differs = false, d_differs = false;
    for (int i = 0; i < 10; ++i) {
      const auto x = a.next();
      CHECK(x == b.next());
      c_differs = c_differs || x != c.next();
      d_differs = d_differs || x != d.next();
    }
    CHECK(c_differs);
    CHECK(d_differs);
    Rng r(1);
    for (int i = 0; i < 1000; ++i) {
      const double u = r.uniform01();
      CHECK((u >= 0 && u < 1));
      CHECK(r.index(7) < 7);
      CHECK(r.geometric(3) >= 1);
    }
  }

  TEST_CASE("intermediate selection honours the gate") {
    const std::string final_smiles = "CCCC(=O)O";
    const std::vector<std::string> candidates { "CCCC(=O)O", "C(", "CCC(=O)O", "c1ccccc1" };
    const double propanoic = path_sim("CCC(=O)O", final_smiles);
    const double benzene = path_sim("c1ccccc1", final_smiles);
    REQUIRE(propanoic >= 0.5);
    REQUIRE(benzene < 0.5);
    Rng rng(1);
    SelectionTrace trace;
    const auto pick = select_intermediate(candidates, final_smiles, rng, 0.0, {}, &trace);
    REQUIRE(pick);
    CHECK(pick->smiles == "CCC(=O)O");
    CHECK(pick->sim == doctest::Approx(propanoic));
    CHECK_FALSE(pick->retained);
    CHECK_FALSE(trace.low_sim_opportunity);
  }

  TEST_CASE("below-gate candidates are retained only by chance") {
    const std::vector<std::string> candidates { "c1ccccc1", "O", "C(" };
    Rng rng(1);
    SelectionTrace never;
    CHECK_FALSE(select_intermediate(candidates, "CCCC(=O)O", rng, 0.0, {}, &never));
    CHECK(never.low_sim_opportunity);
    SelectionTrace always;
    const auto pick = select_intermediate(candidates, "CCCC(=O)O", rng, 1.0, {}, &always);
    REQUIRE(pick);
    CHECK(pick->retained);
    const double best = std::max(path_sim("c1ccccc1", "CCCC(=O)O"), path_sim("O", "CCCC(=O)O"));
    CHECK(pick->sim == doctest::Approx(best));
    SelectionTrace none;
    CHECK_FALSE(select_intermediate({ "C(" }, "CCO", rng, 1.0, {}, &none));
    CHECK_FALSE(none.low_sim_opportunity);
  }

  TEST_CASE("filters") {
    Dialogue d;
    d.turns = { { 1, "One.", "C", 1.0, false } };
    CHECK(filter_reason(d) == FilterReason::kSingleTurn);
    CHECK_FALSE(apply_filters(d));
    d.turns.push_back({ 2, "One. Two-three.", "C", 1.0, false });
    CHECK(filter_reason(d) == FilterReason::kDash);
    d.turns.back().text = "One. Two.";
    CHECK(filter_reason(d) == FilterReason::kNone);
    CHECK(apply_filters(d));
  }

  TEST_CASE("echo provider yields no multi-turn dialogues") {
    const auto pairs = toy_pairs();
    EchoProvider echo(pairs);
    const auto result = build_dataset(pairs, echo, { 7 });
    CHECK(result.dialogues.empty());
    CHECK(result.stats.emitted == 0);
    CHECK(result.stats.low_sim_opportunities == 0);
    CHECK_THROWS_AS(echo.propose({ "nope", "text", 3 }), ProviderError);
    CHECK(echo.propose({ "toy-01", "text", 3 }).size() == 3);
  }

  TEST_CASE("analog provider builds clean dialogues") {
    const auto pairs = toy_pairs();
    AnalogProvider analog(pairs);
    BuildConfig config;
    config.seed = 7;
    const auto result = build_dataset(pairs, analog, config);
    REQUIRE_FALSE(result.dialogues.empty());
    std::map<std::string, MoleculeDescriptionPair> by_id;
    for (const auto &p: pairs) {
      by_id[p.id] = p;
    }
    for (const auto &d: result.dialogues) {
      CHECK(check_dialogue(d, by_id.at(d.id)).empty());
      CHECK(d.provenance.candidate_fingerprints.size() == d.turns.size());
      CHECK(d.provenance.provider == "analog");
    }
    CHECK(std::is_sorted(result.dialogues.begin(), result.dialogues.end(),
                         [](const auto &a, const auto &b) { return a.id < b.id; }));
    const auto &s = result.stats;
    CHECK(s.emitted + s.filtered() + s.provider_failed == s.input);
    std::int64_t hist = 0;
    for (const auto &[turns, count]: s.turn_histogram) {
      CHECK(turns >= 2);
      hist += count;
    }
    CHECK(hist == s.emitted);
    CHECK(s.filtered_dash >= 1);
    CHECK(s.filtered_single_turn >= 1);
  }

  TEST_CASE("builds are deterministic and thread-count independent") {
    const auto pairs = toy_pairs();
    AnalogProvider analog(pairs);
    BuildConfig one;
    one.seed = 3;
    one.retain_prob = 0.5;
    BuildConfig four = one;
    four.threads = 4;
    const std::string a = dump(build_dataset(pairs, analog, one));
    CHECK(a == dump(build_dataset(pairs, analog, one)));
    CHECK(a == dump(build_dataset(pairs, analog, four)));
    BuildConfig other = one;
    other.seed = 4;
    CHECK(a != dump(build_dataset(pairs, analog, other)));
  }

  TEST_CASE("provider failures and invalid pairs are counted") {
    auto pairs = toy_pairs();
    pairs.push_back({ "bad", "C(", "Broken. Really broken.", {}, {} });
    FailingProvider failing;
    const auto result = build_dataset(pairs, failing, {});
    CHECK(result.stats.filtered_invalid == 1);
    CHECK(result.stats.emitted == 0);
    CHECK(result.stats.provider_failed > 0);
    CHECK(result.stats.emitted + result.stats.filtered() + result.stats.provider_failed
          == result.stats.input);
  }

  TEST_CASE("replay provider") {
    const auto dir = test::scratch("replay");
    {
      std::ofstream out(dir / "replay.jsonl");
      out << R"({"id": "p1", "text": "Hello.", "candidates": ["C", "CC", "CCC"]})" << "\n";
    }
    ReplayProvider replay(dir / "replay.jsonl");
    CHECK(replay.propose({ "p1", "Hello.", 2 }) == std::vector<std::string> { "C", "CC" });
    CHECK_THROWS_AS(replay.propose({ "p1", "Other.", 2 }), ProviderError);
  }

  TEST_CASE("pair and dialogue JSON round trip") {
    const auto pair = parse_pair(
        R"({"id": "x", "smiles": "CCO", "description": "Text.", "names": ["ethanol"]})");
    CHECK(pair.names == std::vector<std::string> { "ethanol" });
    CHECK(pair.tags.empty());
    const auto again = parse_pair(pair_to_json(pair));
    CHECK(again.id == pair.id);
    CHECK(again.description == pair.description);
    CHECK_THROWS(parse_pair(R"({"id": "x", "smiles": 3, "description": ""})"));

    Dialogue d;
    d.id = "x";
    d.turns = { { 1, "B.", "CC", 0.6, false }, { 2, "B. A.", "CCO", 1.0, false } };
    d.provenance = { 9, "analog", { "aa", "bb" } };
    const Dialogue back = parse_dialogue(dialogue_to_json(d));
    CHECK(back.turns.size() == 2);
    CHECK(back.turns[0].sim_to_final == 0.6);
    CHECK(back.provenance.seed == 9);
    CHECK(back.provenance.candidate_fingerprints == d.provenance.candidate_fingerprints);
    CHECK(dialogue_to_json(back) == dialogue_to_json(d));
  }

  TEST_CASE("read_pairs names the failing line") {
    const auto dir = test::scratch("pairs");
    {
      std::ofstream out(dir / "pairs.jsonl");
      out << R"({"id": "a", "smiles": "C", "description": "D."})" << "\n" << "{oops\n";
    }
    try {
      read_pairs(dir / "pairs.jsonl");
      FAIL("expected an exception");
    } catch (const std::runtime_error &e) {
      CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    CHECK_THROWS(read_pairs(dir / "absent.jsonl"));
  }
}
