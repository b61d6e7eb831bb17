//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>
#include <json.hpp>

#include "convmol/metrics.hpp"
#include "oracles/eval_oracle.hpp"
#include "unit/support.hpp"

using namespace convmol;
using metrics::Record;

namespace {

std::vector<Record> load(const std::string &name) {
  return metrics::read_records(test::fixture("eval/" + name));
}

std::string random_string(std::mt19937 &rng, int max_len) {
  static constexpr std::string_view alphabet = "CNO()=#123cn[]+-";
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> pick(0, alphabet.size() - 1);
  std::string s(len(rng), ' ');
  for (char &c: s) {
    c = alphabet[pick(rng)];
  }
  return s;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("tokenizers") {
    CHECK(metrics::word_tokens("The cat, sat.")
          == metrics::Tokens { "the", "cat", ",", "sat", "." });
    CHECK(metrics::word_tokens("  ").empty());
    CHECK(metrics::char_tokens("C=O") == metrics::Tokens { "C", "=", "O" });
  }

  TEST_CASE("sentence BLEU worked example") {
    const metrics::Tokens ref { "the", "cat", "sat" };
    const metrics::Tokens hyp { "the", "cat" };
    // p1 = 2/2, p2 = 1/1, BP = exp(1 - 3/2).
    CHECK(metrics::bleu(ref, hyp, 2) == doctest::Approx(std::exp(-0.5)));
    CHECK(metrics::bleu(ref, hyp, 4) == doctest::Approx(std::exp(-0.5)));
    CHECK(metrics::bleu(ref, ref, 4) == doctest::Approx(1.0));
    CHECK(metrics::bleu(ref, {}, 4) == 0.0);
    // p1 = 3/3; no bigram overlap, so p2 = 0.1 / 2.
    const double expected = std::sqrt(0.05);
    CHECK(metrics::bleu(ref, { "sat", "cat", "the" }, 2) == doctest::Approx(expected));
    CHECK_THROWS_AS(metrics::bleu(ref, hyp, 5), std::invalid_argument);
    CHECK_THROWS_AS(metrics::bleu(ref, hyp, 0), std::invalid_argument);
  }

  TEST_CASE("ROUGE worked example") {
    const auto r = metrics::rouge({ "a", "b", "c", "d" }, { "a", "c" });
    CHECK(r.rouge1 == doctest::Approx(2.0 / 3));
    CHECK(r.rouge2 == 0.0);
    CHECK(r.rougeL == doctest::Approx(2.0 / 3));
    const auto same = metrics::rouge({ "x", "y" }, { "x", "y" });
    CHECK(same.rouge1 == 1.0);
    CHECK(same.rouge2 == 1.0);
    CHECK(same.rougeL == 1.0);
  }

  TEST_CASE("edit distance examples") {
    CHECK(metrics::levenshtein("kitten", "sitting") == 3);
    CHECK(metrics::levenshtein("", "CCO") == 3);
    CHECK(metrics::levenshtein("CCO", "CCO") == 0);
    CHECK(metrics::levenshtein("CCO", "OCC") == 2);
  }

  TEST_CASE("edit distance agrees with the full table and is a metric") {
    std::mt19937 rng(11);
    for (int i = 0; i < 500; ++i) {
      const std::string a = random_string(rng, 12);
      const std::string b = random_string(rng, 12);
      const std::string c = random_string(rng, 12);
      const int ab = metrics::levenshtein(a, b);
      CHECK(ab == oracle::edit_distance(a, b));
      CHECK(ab == metrics::levenshtein(b, a));
      CHECK(ab <= metrics::levenshtein(a, c) + metrics::levenshtein(c, b));
      CHECK((ab == 0) == (a == b));
    }
  }

  TEST_CASE("BLEU agrees with the reference computation") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<metrics::Tokens> refs, hyps;
      std::vector<std::pair<oracle::Seq, oracle::Seq>> pairs;
      for (int i = 0; i < 4; ++i) {
        refs.push_back(metrics::char_tokens(random_string(rng, 10)));
        hyps.push_back(metrics::char_tokens(random_string(rng, 10)));
        pairs.emplace_back(refs.back(), hyps.back());
      }
      for (int n = 1; n <= 4; ++n) {
        CHECK(metrics::corpus_bleu(refs, hyps, n)
              == doctest::Approx(oracle::corpus_bleu(pairs, n)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("BLEU statistics merge like a single pass") {
    metrics::BleuStats a, b, all;
    a.add({ "a", "b", "c" }, { "a", "b" });
    b.add({ "x", "y" }, { "x", "y", "z" });
    all.add({ "a", "b", "c" }, { "a", "b" });
    all.add({ "x", "y" }, { "x", "y", "z" });
    a.merge(b);
    for (int n = 1; n <= 4; ++n) {
      CHECK(a.matches(n) == all.matches(n));
      CHECK(a.totals(n) == all.totals(n));
      CHECK(a.score(n) == all.score(n));
    }
  }

  TEST_CASE("exact match and hit@k") {
    CHECK(metrics::exact_match("OCC", "CCO"));
    CHECK(metrics::exact_match("C1=CC=CC=C1", "c1ccccc1"));
    CHECK_FALSE(metrics::exact_match("C(", "C("));
    CHECK_FALSE(metrics::exact_match("CCC", "CCO"));
    CHECK(metrics::hit_at_k({ "C", "N", "OCC" }, "CCO", 3));
    CHECK_FALSE(metrics::hit_at_k({ "C", "N", "OCC" }, "CCO", 2));
    CHECK_FALSE(metrics::hit_at_k({ "C(", "C(" }, "C(", 3));
    CHECK_THROWS_AS(metrics::hit_at_k({ "C" }, "C", 0), std::invalid_argument);
  }

  TEST_CASE("generation fixture matches hand labels") {
    const auto report = metrics::evaluate_generation(load("gen_predictions.jsonl"),
                                                     load("gen_references.jsonl"));
    REQUIRE(report.gen_metrics);
    const auto &m = *report.gen_metrics;
    CHECK(m.n == 10);
    CHECK(m.em == doctest::Approx(0.3));
    CHECK(m.hit3 == doctest::Approx(0.8));
    CHECK(m.validity == doctest::Approx(0.8));
    CHECK(m.valid_count == 8);
    CHECK(report.per_turn.size() == 3);
    CHECK(report.per_turn.at(1).n == 3);
    CHECK(report.per_turn.at(3).n == 4);
    CHECK(report.per_turn.at(1).em == doctest::Approx(2.0 / 3));
  }

  TEST_CASE("generation fixture matches the reference computation") {
    const auto preds = load("gen_predictions.jsonl");
    const auto refs = load("gen_references.jsonl");
    const auto report = metrics::evaluate_generation(preds, refs);
    CHECK(oracle::max_diff(*report.gen_metrics, oracle::generation(preds, refs)) < 1e-9);
    for (const auto &[turn, m]: report.per_turn) {
      CHECK(oracle::max_diff(m, oracle::generation(preds, refs, turn)) < 1e-9);
    }
  }

  TEST_CASE("understanding fixture matches the reference computation") {
    const auto preds = load("und_predictions.jsonl");
    const auto refs = load("und_references.jsonl");
    const auto report = metrics::evaluate_understanding(preds, refs);
    REQUIRE(report.text_metrics);
    CHECK(report.n == 5);
    CHECK(oracle::max_diff(*report.text_metrics, oracle::understanding(preds, refs)) < 1e-9);
    CHECK(report.text_metrics->bleu4 > 0);
    CHECK(report.text_metrics->bleu4 < 1);
  }

  TEST_CASE("reports match the stored golden documents") {
    const auto gen = metrics::evaluate_generation(load("gen_predictions.jsonl"),
                                                  load("gen_references.jsonl"));
    const auto und = metrics::evaluate_understanding(load("und_predictions.jsonl"),
                                                     load("und_references.jsonl"));
    for (const auto &[report, name]:
         { std::pair { gen, "gen_report.json" }, std::pair { und, "und_report.json" } }) {
      const auto got = nlohmann::json::parse(report.to_json());
      const auto want = nlohmann::json::parse(test::slurp(test::fixture("eval/" + std::string(name))));
      CHECK(got["task"] == want["task"]);
      CHECK(got["n"] == want["n"]);
      CHECK(got["text_metrics"].is_null() == want["text_metrics"].is_null());
      auto compare = [](const nlohmann::json &a, const nlohmann::json &b) {
        REQUIRE(a.size() == b.size());
        for (auto it = b.begin(); it != b.end(); ++it) {
          if (it.value().is_null()) {
            CHECK(a.at(it.key()).is_null());
          } else {
            CHECK(a.at(it.key()).get<double>()
                  == doctest::Approx(it.value().get<double>()).epsilon(1e-9));
          }
        }
      };
      if (!want["gen_metrics"].is_null()) {
        compare(got["gen_metrics"], want["gen_metrics"]);
        for (auto it = want["per_turn"].begin(); it != want["per_turn"].end(); ++it) {
          compare(got["per_turn"][it.key()], it.value());
        }
      } else {
        compare(got["text_metrics"], want["text_metrics"]);
      }
    }
  }

  TEST_CASE("self evaluation is perfect") {
    const auto refs = load("gen_references.jsonl");
    const auto m = *metrics::evaluate_generation(refs, refs).gen_metrics;
    CHECK(m.em == 1.0);
    CHECK(m.hit3 == 1.0);
    CHECK(m.validity == 1.0);
    CHECK(m.levenshtein_mean == 0.0);
    CHECK(m.bleu_char == doctest::Approx(1.0));
    CHECK(m.fts_morgan == doctest::Approx(1.0));
    CHECK(m.fts_rdk == doctest::Approx(1.0));
    CHECK(m.fts_maccs == doctest::Approx(1.0));
  }

  TEST_CASE("all invalid predictions") {
    const auto refs = load("gen_references.jsonl");
    auto preds = refs;
    for (auto &p: preds) {
      p.candidates = { "C(" };
    }
    const auto m = *metrics::evaluate_generation(preds, refs).gen_metrics;
    CHECK(m.validity == 0.0);
    CHECK(m.em == 0.0);
    CHECK(m.hit3 == 0.0);
    CHECK(m.fts_morgan == 0.0);
    CHECK(m.levenshtein_mean > 0.0);
  }

  TEST_CASE("record order does not matter") {
    auto preds = load("gen_predictions.jsonl");
    auto refs = load("gen_references.jsonl");
    const std::string base = metrics::evaluate_generation(preds, refs).to_json();
    std::mt19937 rng(3);
    for (int i = 0; i < 5; ++i) {
      std::shuffle(preds.begin(), preds.end(), rng);
      std::shuffle(refs.begin(), refs.end(), rng);
      CHECK(metrics::evaluate_generation(preds, refs).to_json() == base);
    }
  }

  TEST_CASE("a single substitution costs one edit") {
    const auto refs = load("gen_references.jsonl");
    for (const auto &r: refs) {
      std::string s = r.candidates.front();
      s[0] = s[0] == 'C' ? 'N' : 'C';
      std::vector<Record> preds { { r.id, r.turn, { s }, std::nullopt } };
      const auto m = *metrics::evaluate_generation(preds, { r }).gen_metrics;
      CHECK(m.levenshtein_mean == 1.0);
    }
  }

  TEST_CASE("misaligned and duplicate ids are rejected") {
    const auto refs = load("gen_references.jsonl");
    CHECK_THROWS_AS(metrics::evaluate_generation(load("gen_misaligned.jsonl"), refs),
                    metrics::EvalError);
    auto dup = refs;
    dup.push_back(refs.front());
    CHECK_THROWS_AS(metrics::evaluate_generation(dup, refs), metrics::EvalError);
    auto missing = refs;
    missing.pop_back();
    CHECK_THROWS_AS(metrics::evaluate_generation(missing, refs), metrics::EvalError);
  }

  TEST_CASE("invalid references are counted and skipped") {
    std::vector<Record> refs { { "a", 1, { "CCO" }, std::nullopt },
                               { "b", 1, { "C(" }, std::nullopt } };
    const auto report = metrics::evaluate_generation(refs, refs);
    CHECK(report.reference_invalid == 1);
    CHECK(report.n == 1);
  }

  TEST_CASE("record parsing") {
    const auto r = metrics::parse_record(R"({"id": "x", "turn": 2, "candidates": ["C"]})");
    CHECK(r.id == "x");
    CHECK(r.turn == 2);
    CHECK(metrics::parse_record(metrics::record_to_json(r)).candidates == r.candidates);
    CHECK_THROWS_AS(metrics::parse_record("{"), metrics::EvalError);
    CHECK_THROWS_AS(metrics::parse_record(R"({"turn": 1})"), metrics::EvalError);
    CHECK_THROWS_AS(metrics::parse_records("{\"id\": \"a\", \"text\": \"t\"}\nnot json\n"),
                    metrics::EvalError);
  }

  TEST_CASE("report document shape") {
    const auto j = nlohmann::json::parse(
        metrics::evaluate_understanding(load("und_predictions.jsonl"),
                                        load("und_references.jsonl"))
            .to_json());
    CHECK(j["task"] == "understanding");
    CHECK(j["text_metrics"]["meteor"].is_null());
    CHECK(j["gen_metrics"].is_null());
    CHECK(j["per_turn"].is_null());
  }
}
