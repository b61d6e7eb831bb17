//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <chrono>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <thread>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include "convmol/chat.hpp"
#include "convmol/service.hpp"
#include "convmol/smiles.hpp"
#include "unit/support.hpp"

using namespace convmol;
using namespace convmol::service;
using nlohmann::json;

namespace {

std::filesystem::path toy() {
  return test::source_dir() / "data" / "toy_pairs.jsonl";
}

chat::Clock fixed_clock() {
  return [] { return std::string("2026-01-01T00:00:00.000Z"); };
}

class SlowBackend: public chat::Backend {
public:
  std::string id() const override { return "slow"; }
  std::string understand(std::string_view) override { return "slow"; }
  chat::Generation generate(std::string_view, int k) override {
    std::this_thread::sleep_for(std::chrono::milliseconds(800));
    return chat::normalize_generation({ "CCO" }, k);
  }
};

struct Running {
  Server server;
  int port;
  std::thread thread;

  explicit Running(ServiceOptions options): server(std::move(options)) {
    port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen(); });
  }
  ~Running() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port);
    c.set_read_timeout(10, 0);
    return c;
  }
};

ServiceOptions toy_options(const std::filesystem::path &log_dir = {}) {
  ServiceOptions o;
  o.backends["retrieval"] =
      std::make_shared<chat::RetrievalBackend>(dialogue::read_pairs(toy()));
  o.backends["slow"] = std::make_shared<SlowBackend>();
  o.log_dir = log_dir;
  o.clock = fixed_clock();
  return o;
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("config parsing and validation") {
    const auto c = parse_config(R"({"seed": 4, "builder": {"retain_prob": 0.1, "threads": 2},
                                    "chat": {"k": 5}})");
    CHECK(c.seed == 4);
    CHECK(c.builder.seed == 4);
    CHECK(c.pretrain.seed == 4);
    CHECK(c.builder.retain_prob == 0.1);
    CHECK(c.chat.k == 5);
    CHECK_THROWS_AS(parse_config(R"({"sed": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"builder": {"retain_prob": 1.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"builder": {"gate_lower": 0.9, "gate_upper": 0.5}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"chat": {"k": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": "x"})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"backend": {"retrieval": "absent.jsonl"}})"), ConfigError);

    const auto dir = test::scratch("config");
    std::filesystem::copy_file(toy(), dir / "pairs.jsonl");
    std::ofstream(dir / "c.json") << R"({"backend": {"retrieval": "pairs.jsonl"}})";
    const auto loaded = load_config(dir / "c.json");
    REQUIRE(loaded.backend.retrieval);
    CHECK(*loaded.backend.retrieval == dir / "pairs.jsonl");
    CHECK(make_backends(loaded).count("retrieval") == 1);
    CHECK_THROWS_AS(load_config(dir / "absent.json"), ConfigError);

    Config seeded;
    apply_seed(seeded, 99);
    CHECK(seeded.builder.seed == 99);
    CHECK(seeded.pretrain.seed == 99);
  }

  TEST_CASE("graph and error JSON") {
    const auto g = json::parse(graph_json(smiles::parse_or_throw("c1ccccc1O")));
    CHECK(g["atoms"].size() == 7);
    CHECK(g["bonds"].size() == 7);
    CHECK(g["atoms"][0]["element"] == "C");
    CHECK(g["atoms"][0]["aromatic"] == true);
    CHECK(g["atoms"][6]["ring"] == false);
    CHECK(g["bonds"][0]["order"] == "aromatic");
    const auto e = json::parse(parse_error_json(smiles::parse("C(").error()));
    CHECK(e["error"].contains("kind"));
    CHECK(e["error"].contains("position"));
    CHECK(e["error"].contains("message"));
  }

  TEST_CASE("build-dialogues is deterministic and atomic") {
    const auto dir = test::scratch("build");
    Config config;
    config.backend.retrieval = toy();
    apply_seed(config, 7);
    std::ostringstream out, err;
    BuildOptions opts { toy(), dir / "a.jsonl", dir / "a.stats.json", ProviderKind::kBackend, {} };
    REQUIRE(cmd_build_dialogues(config, opts, { out, err }) == 0);
    opts.output = dir / "b.jsonl";
    opts.stats = dir / "b.stats.json";
    REQUIRE(cmd_build_dialogues(config, opts, { out, err }) == 0);
    CHECK(test::slurp(dir / "a.jsonl") == test::slurp(dir / "b.jsonl"));
    CHECK(test::slurp(dir / "a.stats.json") == test::slurp(dir / "b.stats.json"));
    const auto stats = json::parse(test::slurp(dir / "a.stats.json"));
    CHECK(stats["input"] == 28);
    CHECK(stats["emitted"].get<int>() + stats["filtered"].get<int>()
              + stats["provider_failed"].get<int>()
          == 28);

    opts.input = dir / "absent.jsonl";
    opts.output = dir / "c.jsonl";
    CHECK(cmd_build_dialogues(config, opts, { out, err }) != 0);
    CHECK_FALSE(std::filesystem::exists(dir / "c.jsonl"));
    CHECK_FALSE(std::filesystem::exists(dir / "c.jsonl.tmp"));

    opts.input = toy();
    opts.provider = ProviderKind::kEcho;
    opts.output = dir / "echo.jsonl";
    REQUIRE(cmd_build_dialogues(config, opts, { out, err }) == 0);
    CHECK(test::slurp(dir / "echo.jsonl").empty());
  }

  TEST_CASE("gen-pretrain writes every task with valid prefixes") {
    const auto dir = test::scratch("pretrain");
    Config config;
    apply_seed(config, 2);
    std::ostringstream out, err;
    const auto manifest = test::fixture("pretrain/manifest.json");
    REQUIRE(cmd_gen_pretrain(config, manifest, dir / "a.jsonl", { out, err }) == 0);
    REQUIRE(cmd_gen_pretrain(config, manifest, dir / "b.jsonl", { out, err }) == 0);
    CHECK(test::slurp(dir / "a.jsonl") == test::slurp(dir / "b.jsonl"));
    const auto records = knowledge::read_task_records(dir / "a.jsonl");
    std::set<knowledge::TaskKind> kinds;
    for (const auto &r: records) {
      kinds.insert(r.task);
    }
    CHECK(kinds.size() == 7);
    CHECK(cmd_gen_pretrain(config, dir / "absent.json", dir / "c.jsonl", { out, err }) != 0);
    CHECK_FALSE(std::filesystem::exists(dir / "c.jsonl"));
  }

  TEST_CASE("evaluate command") {
    const auto dir = test::scratch("evaluate");
    std::ostringstream out, err;
    const auto preds = test::fixture("eval/gen_predictions.jsonl");
    const auto refs = test::fixture("eval/gen_references.jsonl");
    REQUIRE(cmd_evaluate("generation", preds, refs, dir / "r.json", { out, err }) == 0);
    const auto report = json::parse(test::slurp(dir / "r.json"));
    CHECK(report["gen_metrics"]["em"].get<double>() == doctest::Approx(0.3));
    std::ostringstream printed;
    REQUIRE(cmd_evaluate("generation", preds, refs, {}, { printed, err }) == 0);
    CHECK(printed.str() == test::slurp(dir / "r.json"));
    CHECK(cmd_evaluate("generation", test::fixture("eval/gen_misaligned.jsonl"), refs, {},
                       { out, err })
          != 0);
    CHECK(cmd_evaluate("translation", preds, refs, {}, { out, err }) != 0);
  }

  TEST_CASE("chat transcript matches the golden copy") {
    const auto dir = test::scratch("chat");
    Config config;
    chat::RetrievalBackend backend(dialogue::read_pairs(toy()));
    std::ifstream script(test::fixture("chat/script.txt"));
    std::ostringstream out, err;
    ChatOptions opts;
    opts.log = dir / "log.jsonl";
    opts.clock = fixed_clock();
    REQUIRE(cmd_chat(config, backend, script, opts, { out, err }) == 0);
    CHECK(out.str() == test::slurp(test::fixture("chat/transcript.txt")));
    CHECK(test::slurp(dir / "log.jsonl") == test::slurp(test::fixture("chat/log.jsonl")));
    CHECK(out.str().find("error: invalid SMILES") != std::string::npos);
  }

  TEST_CASE("HTTP API") {
    const auto logs = test::scratch("http");
    Running running(toy_options(logs));
    auto client = running.client();

    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");

    auto created = client.Post("/sessions", R"({"backend": "retrieval"})", "application/json");
    REQUIRE(created);
    CHECK(created->status == 200);
    const std::string id = json::parse(created->body)["id"];
    CHECK(id == "s000001");
    CHECK(client.Post("/sessions", R"({"backend": "nope"})", "application/json")->status == 404);

    const std::string turns = "/sessions/" + id + "/turns";
    auto gen = client.Post(turns, R"({"kind": "text", "content": "A pungent vinegar acid.", "k": 2})",
                           "application/json");
    REQUIRE(gen);
    CHECK(gen->status == 200);
    CHECK(json::parse(gen->body)["candidates"].size() == 2);
    auto und = client.Post(turns, R"({"kind": "molecule", "content": "CC(=O)O"})", "application/json");
    CHECK(und->status == 200);
    CHECK(json::parse(und->body).contains("description"));
    CHECK(client.Post(turns, R"({"kind": "molecule", "content": "C("})", "application/json")->status
          == 422);
    CHECK(client.Post(turns, "nope", "application/json")->status == 400);
    CHECK(client.Post(turns, R"({"kind": "audio", "content": "x"})", "application/json")->status
          == 400);
    CHECK(client.Post("/sessions/s999999/turns", R"({"kind": "text", "content": "x"})",
                      "application/json")
              ->status
          == 404);

    auto session = client.Get("/sessions/" + id);
    REQUIRE(session);
    const auto events = json::parse(session->body)["events"];
    CHECK(events.size() == 4);
    auto log = client.Get("/sessions/" + id + "/log");
    REQUIRE(log);
    CHECK(log->status == 200);
    std::istringstream lines(log->body);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
      ++count;
    }
    CHECK(count == 5);
    running.server.close_logs();
    CHECK(test::slurp(logs / (id + ".jsonl")) == log->body);

    auto parsed = client.Get("/molecules/parse?smiles=CCO");
    CHECK(parsed->status == 200);
    CHECK(json::parse(parsed->body)["atoms"].size() == 3);
    CHECK(client.Get("/molecules/parse?smiles=C(")->status == 422);
    CHECK(client.Get("/molecules/parse")->status == 400);

    auto sim = client.Post("/similarity", R"({"a": "CCO", "b": "OCC"})", "application/json");
    REQUIRE(sim);
    CHECK(json::parse(sim->body)["morgan"] == 1.0);
    CHECK(client.Post("/similarity", R"({"a": "CCO"})", "application/json")->status == 400);

    json eval;
    eval["task"] = "generation";
    eval["predictions_path"] = test::fixture("eval/gen_predictions.jsonl").string();
    eval["references_path"] = test::fixture("eval/gen_references.jsonl").string();
    auto report = client.Post("/evaluate", eval.dump(), "application/json");
    REQUIRE(report);
    CHECK(report->status == 200);
    CHECK(json::parse(report->body)["gen_metrics"]["em"].get<double>() == doctest::Approx(0.3));
    eval["references_path"] = test::fixture("eval/gen_misaligned.jsonl").string();
    CHECK(client.Post("/evaluate", eval.dump(), "application/json")->status == 422);
  }

  TEST_CASE("concurrent turns on one session are refused") {
    Running running(toy_options());
    auto client = running.client();
    auto created = client.Post("/sessions", R"({"backend": "slow"})", "application/json");
    REQUIRE(created);
    const std::string turns = "/sessions/" + json::parse(created->body)["id"].get<std::string>()
                              + "/turns";
    auto first = std::async(std::launch::async, [&] {
      auto c = running.client();
      return c.Post(turns, R"({"kind": "text", "content": "one"})", "application/json")->status;
    });
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    auto second = running.client().Post(turns, R"({"kind": "text", "content": "two"})",
                                        "application/json");
    REQUIRE(second);
    CHECK(second->status == 409);
    CHECK(first.get() == 200);
    auto session = client.Get(turns.substr(0, turns.size() - 6));
    CHECK(json::parse(session->body)["events"].size() == 2);
  }
}
