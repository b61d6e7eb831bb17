//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <fstream>
#include <set>

#include <doctest.h>

#include "convmol/knowledge.hpp"
#include "convmol/lexicon.hpp"
#include "convmol/smiles.hpp"
#include "oracles/spatial_oracle.hpp"
#include "unit/support.hpp"

using namespace convmol;
using namespace convmol::knowledge;
using dialogue::Rng;

namespace {

std::vector<std::string> numbered(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    out.push_back("t" + std::to_string(i));
  }
  return out;
}

}  // namespace

TEST_SUITE("knowledge") {
  TEST_CASE("sentinels") {
    CHECK(sentinel(0) == "<0>");
    CHECK(sentinel(12) == "<12>");
    CHECK(sentinel_index("<3>") == 3);
    CHECK(sentinel_index("<x>") == -1);
    CHECK(sentinel_index("3") == -1);
    CHECK(sentinel_index("<>") == -1);
  }

  TEST_CASE("span corruption masks the expected share") {
    Rng rng(42);
    const auto tokens = numbered(20);
    const auto spans = span_corrupt(tokens, rng);
    int masked = 0, sentinels = 0;
    for (const auto &t: spans.target) {
      if (sentinel_index(t) >= 0) {
        ++sentinels;
      } else {
        ++masked;
      }
    }
    CHECK(masked == 3);
    CHECK(sentinels >= 1);
    CHECK(spans.input.size() == tokens.size() - masked + sentinels);
    CHECK(reconstruct(spans) == tokens);
    for (std::size_t i = 1; i < spans.input.size(); ++i) {
      CHECK_FALSE((sentinel_index(spans.input[i]) >= 0
                   && sentinel_index(spans.input[i - 1]) >= 0));
    }
  }

  TEST_CASE("span corruption edge cases") {
    Rng rng(1);
    const auto tiny = span_corrupt({ "a", "b" }, rng, 0.2);
    CHECK(tiny.target.empty());
    CHECK(tiny.input == std::vector<std::string> { "a", "b" });
    CHECK_THROWS_AS(span_corrupt({ "a" }, rng), std::invalid_argument);
    CHECK_THROWS_AS(span_corrupt(numbered(5), rng, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(span_corrupt(numbered(5), rng, 1.0), std::invalid_argument);
    const auto most = span_corrupt(numbered(4), rng, 0.99);
    CHECK(reconstruct(most) == numbered(4));
    CHECK(std::count_if(most.input.begin(), most.input.end(),
                        [](const auto &t) { return sentinel_index(t) < 0; }) >= 1);
  }

  TEST_CASE("span corruption always inverts") {
    for (int i = 0; i < 1000; ++i) {
      Rng rng = Rng::for_item(9, "case" + std::to_string(i));
      const int n = 2 + static_cast<int>(rng.index(60));
      const double ratio = 0.05 + 0.9 * rng.uniform01();
      const double mean = 1.0 + 4 * rng.uniform01();
      const auto tokens = numbered(n);
      const auto spans = span_corrupt(tokens, rng, ratio, mean);
      REQUIRE(reconstruct(spans) == tokens);
      const int noise = std::min<int>(n - 1, static_cast<int>(std::lround(ratio * n)));
      CHECK(static_cast<int>(std::count_if(spans.target.begin(), spans.target.end(),
                                           [](const auto &t) { return sentinel_index(t) < 0; }))
            == noise);
    }
  }

  TEST_CASE("tokenizers") {
    CHECK(smiles_tokens("ClCC(Br)[NH3+]C%12")
          == std::vector<std::string> { "Cl", "C", "C", "(", "Br", ")", "[NH3+]", "C", "%12" });
    CHECK(smiles_tokens("c1ccccc1").size() == 8);
    CHECK(text_tokens("  a  bb c ") == std::vector<std::string> { "a", "bb", "c" });
  }

  TEST_CASE("fill records") {
    Rng rng(3);
    const auto r = make_mlm_record(TaskKind::kMlmSmiles, "CC(=O)Oc1ccccc1C(=O)O", rng);
    CHECK(r.prefix == "Fill:");
    CHECK(r.input.find('<') != std::string::npos);
    CHECK(r.input.find(' ') == std::string::npos);
    Rng rng2(3);
    const auto t = make_mlm_record(TaskKind::kMlmText,
                                   "one two three four five six seven eight nine ten", rng2);
    CHECK(t.task == TaskKind::kMlmText);
    CHECK(t.input.find(" <0>") != std::string::npos);
  }

  TEST_CASE("property records") {
    const auto recs = make_property_records("CCO", { { "Boiling Point", "78.4 C" }, { "pH", "7" } });
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].prefix == "Predict Boiling Point:");
    CHECK(recs[0].input == "CCO");
    CHECK(recs[0].target == "78.4 C");
    CHECK(recs[0].meta.at("property") == "Boiling Point");
    CHECK(property_names().size() == 15);
    CHECK_THROWS_AS(make_property_records("C(", { { "pH", "7" } }), std::invalid_argument);
    CHECK_THROWS_AS(make_property_records("C", { { "Colour", "red" } }), std::invalid_argument);
  }

  TEST_CASE("spatial descriptions") {
    const auto g = smiles::parse_or_throw("CC(=O)O");
    CHECK(spatial_target(g, 1) == "neighbors: C(single), O(double), O(single); aromatic: no; ring: no");
    CHECK(spatial_target(smiles::parse_or_throw("C"), 0) == "neighbors: none; aromatic: no; ring: no");
    const auto naph = smiles::parse_or_throw("c1ccc2ccccc2c1");
    CHECK(spatial_target(naph, 3).find("ring: yes(6,6)") != std::string::npos);
    CHECK(spatial_input("CCO", 2) == "CCO [atom 2]");
    CHECK(spatial_mark_count(1) == 1);
    CHECK(spatial_mark_count(20) == 3);
    CHECK(spatial_mark_count(20, 0.1) == 2);
    CHECK(spatial_mark_count(7, 1.0) == 7);
    CHECK(spatial_mark_count(0) == 0);
  }

  TEST_CASE("spatial records agree with the bond list") {
    int checked = 0;
    for (const auto &s: test::corpus()) {
      const auto g = smiles::parse(s);
      if (!g) {
        continue;
      }
      Rng rng = Rng::for_item(1, s);
      const auto recs = make_spatial_records(*g, rng);
      CHECK(static_cast<int>(recs.size()) == spatial_mark_count(g->num_atoms()));
      int prev = -1;
      for (const auto &r: recs) {
        const int atom = std::stoi(r.meta.at("atom"));
        CHECK(atom > prev);
        prev = atom;
        CHECK(r.target == oracle::spatial_target(*g, atom));
        CHECK(r.input == spatial_input(s, atom));
      }
      if (++checked == 100) {
        break;
      }
    }
    CHECK(checked == 100);
  }

  TEST_CASE("mapping records and prompts") {
    const std::vector<EntityRef> ents { { "ethanol", "CCO", "ethanol" },
                                        { "acetic acid", "CC(=O)O", "acetic acid" } };
    const auto recs = make_mapping_records("Ethanol oxidizes to acetic acid.", ents);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].task == TaskKind::kMapText2Smiles);
    CHECK(recs[0].target == "CCO CC(=O)O");
    CHECK(recs[1].prefix == "SMILES to name:");
    CHECK(recs[2].target == "acetic acid");
    CHECK(make_mapping_records("nothing", {}).empty());
    const auto name = make_name_record("ethanol", "CCO");
    CHECK(name.prefix == "Name to SMILES:");
    CHECK(name.input == "ethanol");

    CHECK(make_prompt("Ethanol oxidizes.", ents, {})
          == "Ethanol oxidizes.\nEntities: ethanol=CCO; acetic acid=CC(=O)O");
    CHECK(make_prompt("Ethanol oxidizes.", ents, { "OC(C)=O" })
          == "Ethanol oxidizes.\nEntities: ethanol=CCO");
    CHECK(make_prompt("Plain.", ents, { "OCC", "CC(O)=O" }) == "Plain.");
  }

  TEST_CASE("lexicon mentions feed prompts without leaking the answer") {
    lexicon::Lexicon lex;
    lex.add("ethanol", "CCO");
    lex.add("water", "O");
    const std::string text = "Ethanol mixes with water.";
    const auto ents = entities_from_mentions(lexicon::recognize(text, lex));
    REQUIRE(ents.size() == 2);
    CHECK(ents[0].mention == "Ethanol");
    const std::string prompt = make_prompt(text, ents, { "CCO" });
    CHECK(prompt == "Ethanol mixes with water.\nEntities: water=O");
  }

  TEST_CASE("dual augmentation refuses overlapping pools") {
    std::vector<dialogue::MoleculeDescriptionPair> held {
      { "r2", "OCC", "Ethanol text.", {}, {} },
      { "r1", "c1ccccc1", "Benzene text.", {}, {} },
      { "r3", "N", "Ammonia text.", {}, {} },
    };
    const std::vector<std::string> pool { "CCO", "C1=CC=CC=C1", "CC" };
    // Set intersection of canonical forms.
    std::set<std::string> pool_canon, expected_ids;
    for (const auto &s: pool) {
      pool_canon.insert(*smiles::canonical_smiles(s));
    }
    for (const auto &r: held) {
      if (pool_canon.count(*smiles::canonical_smiles(r.smiles))) {
        expected_ids.insert(r.id);
      }
    }
    try {
      dual_augment(pool, [](std::string_view) { return std::string("x"); }, held);
      FAIL("expected OverlapError");
    } catch (const OverlapError &e) {
      CHECK(std::vector<std::string>(expected_ids.begin(), expected_ids.end()) == e.ids());
      CHECK(e.ids() == std::vector<std::string> { "r1", "r2" });
    }
  }

  TEST_CASE("dual augmentation skips bad molecules") {
    std::vector<dialogue::MoleculeDescriptionPair> held { { "r", "N", "Leaked.", {}, {} } };
    const std::vector<std::string> pool { "CCO", "C(", "CC", "CCC", "CCCC" };
    auto understand = [](std::string_view s) -> std::string {
      if (s == "CC") {
        throw std::runtime_error("backend down");
      }
      if (s == "CCC") {
        return "";
      }
      if (s == "CCCC") {
        return "Leaked.";
      }
      return "Described " + std::string(s) + ".";
    };
    const auto result = dual_augment(pool, understand, held);
    CHECK(result.skipped == 4);
    REQUIRE(result.pairs.size() == 1);
    CHECK(result.pairs[0].id == "aug-0");
    CHECK(result.pairs[0].tags == std::vector<std::string> { "augmented" });
    CHECK(result.pairs[0].description == "Described CCO.");
  }

  TEST_CASE("task records round trip") {
    const TaskRecord r { TaskKind::kProperty, "Predict pH:", "CCO", "7", { { "property", "pH" } } };
    CHECK(parse_task_record(record_to_json(r)) == r);
    for (auto kind: { TaskKind::kMlmText, TaskKind::kMlmSmiles, TaskKind::kProperty,
                      TaskKind::kSpatial, TaskKind::kMapName2Smiles, TaskKind::kMapSmiles2Name,
                      TaskKind::kMapText2Smiles }) {
      CHECK(task_kind_from_name(task_kind_name(kind)) == kind);
    }
    CHECK_THROWS_AS(task_kind_from_name("bogus"), std::invalid_argument);
    TaskRecord wrong = r;
    wrong.prefix = "Fill:";
    CHECK_THROWS(parse_task_record(record_to_json(wrong)));
    CHECK_FALSE(prefix_matches(TaskKind::kProperty, "Predict Colour:"));
    CHECK(prefix_matches(TaskKind::kSpatial, "Spatial:"));
  }

  TEST_CASE("pre-training mix covers every task and is seeded") {
    const auto sources = read_sources_manifest(test::fixture("pretrain/manifest.json"));
    REQUIRE(sources.lexicon);
    PretrainConfig config;
    config.seed = 5;
    const auto a = generate_pretraining(sources, config);
    const auto b = generate_pretraining(sources, config);
    CHECK(a == b);
    config.seed = 6;
    const auto c = generate_pretraining(sources, config);
    CHECK(a != c);
    CHECK(a.size() == c.size());
    std::map<TaskKind, int> counts;
    for (const auto &r: a) {
      ++counts[r.task];
      CHECK(prefix_matches(r.task, r.prefix));
    }
    CHECK(counts.size() == 7);
    CHECK(counts[TaskKind::kMlmText] == 4);
    CHECK(counts[TaskKind::kMlmSmiles] == 6);
    CHECK(counts[TaskKind::kProperty] == 7);
    for (const auto &r: a) {
      if (r.task == TaskKind::kMapText2Smiles && r.meta.count("id")) {
        // The answer never appears among the listed entities.
        const auto pos = r.input.find("\nEntities: ");
        if (pos != std::string::npos) {
          const auto answer = smiles::canonical_smiles(r.target);
          const std::string listed = r.input.substr(pos + 11);
          std::size_t start = 0;
          while (start < listed.size()) {
            std::size_t end = listed.find("; ", start);
            if (end == std::string::npos) {
              end = listed.size();
            }
            const std::string item = listed.substr(start, end - start);
            CHECK(smiles::canonical_smiles(item.substr(item.find('=') + 1)) != answer);
            start = end + 2;
          }
        }
      }
    }
  }

  TEST_CASE("manifest errors") {
    const auto dir = test::scratch("manifest");
    {
      std::ofstream(dir / "m.json") << R"({"text": 3})";
    }
    CHECK_THROWS(read_sources_manifest(dir / "m.json"));
    CHECK_THROWS(read_sources_manifest(dir / "absent.json"));
  }
}
