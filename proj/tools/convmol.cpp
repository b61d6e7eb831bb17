//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "convmol/service.hpp"

namespace {

using namespace convmol;

service::Config resolve_config(const std::string &path,
                               const std::optional<std::uint64_t> &seed) {
  service::Config config = path.empty() ? service::Config {}
                                        : service::load_config(path);
  if (seed) {
    service::apply_seed(config, *seed);
  }
  return config;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app { "Conversational molecular design toolkit" };
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Seed for every randomized step");

  auto *build = app.add_subcommand("build-dialogues",
                                   "Build multi-turn dialogues from description pairs");
  service::BuildOptions build_opts;
  std::string provider = "backend";
  std::string replay, stats;
  build->add_option("--input", build_opts.input, "Pair JSONL")->required();
  build->add_option("--output", build_opts.output, "Dialogue JSONL")->required();
  build->add_option("--stats", stats, "Also write build statistics here");
  build->add_option("--provider", provider, "backend, replay or echo")
      ->check(CLI::IsMember({ "backend", "replay", "echo" }));
  build->add_option("--replay", replay, "Recorded candidates for the replay provider");

  auto *pretrain = app.add_subcommand("gen-pretrain",
                                      "Generate multi-task pre-training records");
  std::string manifest, pretrain_out;
  pretrain->add_option("--sources", manifest, "Source manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  pretrain->add_option("--output", pretrain_out, "Record JSONL")->required();

  auto *evaluate = app.add_subcommand("evaluate", "Score predictions against references");
  std::string task, predictions, references, report;
  evaluate->add_option("--task", task, "generation or understanding")
      ->required()
      ->check(CLI::IsMember({ "generation", "understanding" }));
  evaluate->add_option("--predictions", predictions)->required();
  evaluate->add_option("--references", references)->required();
  evaluate->add_option("--report", report, "Report path (default: stdout)");

  auto *chat_cmd = app.add_subcommand("chat", "Interactive design session");
  std::string backend_name = "retrieval", chat_log, fixed_time;
  chat_cmd->add_option("--backend", backend_name, "retrieval or remote");
  chat_cmd->add_option("--log", chat_log, "Session log JSONL");
  chat_cmd->add_option("--fixed-time", fixed_time, "Timestamp for every event")
      ->group("");

  auto *serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string host;
  int port = -1;
  serve->add_option("--host", host);
  serve->add_option("--port", port);

  CLI11_PARSE(app, argc, argv);

  service::Config config;
  try {
    config = resolve_config(config_path, seed);
  } catch (const std::exception &e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  service::Streams io { std::cout, std::cerr };

  if (*build) {
    if (!stats.empty()) {
      build_opts.stats = stats;
    }
    if (!replay.empty()) {
      build_opts.replay = replay;
    }
    build_opts.provider = provider == "echo"     ? service::ProviderKind::kEcho
                          : provider == "replay" ? service::ProviderKind::kReplay
                                                 : service::ProviderKind::kBackend;
    return service::cmd_build_dialogues(config, build_opts, io);
  }
  if (*pretrain) {
    return service::cmd_gen_pretrain(config, manifest, pretrain_out, io);
  }
  if (*evaluate) {
    return service::cmd_evaluate(task, predictions, references, report, io);
  }
  if (*chat_cmd) {
    std::shared_ptr<chat::Backend> backend;
    try {
      auto backends = service::make_backends(config);
      auto it = backends.find(backend_name);
      if (it == backends.end()) {
        std::cerr << "chat: backend " << backend_name << " is not configured\n";
        return 2;
      }
      backend = it->second;
    } catch (const std::exception &e) {
      std::cerr << "chat: " << e.what() << "\n";
      return 2;
    }
    service::ChatOptions options;
    if (!chat_log.empty()) {
      options.log = chat_log;
    }
    if (!fixed_time.empty()) {
      options.clock = [fixed_time] { return fixed_time; };
    }
    return service::cmd_chat(config, *backend, std::cin, options, io);
  }
  if (*serve) {
    if (!host.empty()) {
      config.serve.host = host;
    }
    if (port >= 0) {
      config.serve.port = port;
    }
    return service::cmd_serve(config, io);
  }
  return 0;
}
