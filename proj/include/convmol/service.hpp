//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_SERVICE_HPP_
#define CONVMOL_SERVICE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "convmol/chat.hpp"
#include "convmol/dialogue.hpp"
#include "convmol/knowledge.hpp"
#include "convmol/metrics.hpp"

namespace convmol::service {

struct BackendConfig {
  // Description corpus for the retrieval backend.
  std::optional<std::filesystem::path> retrieval;
  std::optional<std::string> remote;
  double timeout = 10.0;
};

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path log_dir = "sessions";
};

struct ChatConfig {
  int k = chat::kDefaultCandidates;
  std::optional<std::filesystem::path> log;
};

struct Config {
  std::uint64_t seed = 0;
  dialogue::BuildConfig builder;
  knowledge::PretrainConfig pretrain;
  BackendConfig backend;
  ServeConfig serve;
  ChatConfig chat;
};

class ConfigError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Reads a JSON config. Relative paths resolve against the file's
/// directory; referenced input files must exist. Throws ConfigError.
Config load_config(const std::filesystem::path &path);
Config parse_config(std::string_view json_text,
                    const std::filesystem::path &base = {});

// Propagates config.seed into the builder and pretraining sections.
void apply_seed(Config &config, std::uint64_t seed);

// Backends named in the config; "retrieval" is built from `fallback`
// when no retrieval corpus is configured and `fallback` is non-empty.
std::map<std::string, std::shared_ptr<chat::Backend>>
make_backends(const Config &config,
              const std::vector<dialogue::MoleculeDescriptionPair> &fallback = {});

// ---- graph JSON ------------------------------------------------------------

// {"atoms":[{element,aromatic,charge,ring}],"bonds":[{a,b,order}]}.
std::string graph_json(const smiles::MolecularGraph &g);
std::string parse_error_json(const smiles::ParseError &error);

// ---- commands ----------------------------------------------------------------

struct Streams {
  std::ostream &out;
  std::ostream &err;
};

enum class ProviderKind { kBackend, kReplay, kEcho };

struct BuildOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::optional<std::filesystem::path> stats;
  ProviderKind provider = ProviderKind::kBackend;
  std::optional<std::filesystem::path> replay;
};

// Output files are written atomically; nothing is left behind on failure.
int cmd_build_dialogues(const Config &config, const BuildOptions &options,
                        Streams io);

int cmd_gen_pretrain(const Config &config,
                     const std::filesystem::path &manifest,
                     const std::filesystem::path &output, Streams io);

// Writes the report to `report_out`, or to io.out when it is empty.
int cmd_evaluate(std::string_view task, const std::filesystem::path &predictions,
                 const std::filesystem::path &references,
                 const std::filesystem::path &report_out, Streams io);

struct ChatOptions {
  std::optional<std::filesystem::path> log;
  chat::Clock clock = chat::system_time;
  std::string session_id = "cli";
};

/// Line-oriented REPL: text lines are generation turns, "mol: <SMILES>"
/// asks for a description, "choose <n>" picks candidate n of the last turn
/// for the next query, "quit" ends the session.
int cmd_chat(const Config &config, chat::Backend &backend, std::istream &in,
             const ChatOptions &options, Streams io);

// ---- HTTP service ------------------------------------------------------------

struct ServiceOptions {
  std::map<std::string, std::shared_ptr<chat::Backend>> backends;
  std::string default_backend = "retrieval";
  // Session logs go here as <id>.jsonl; empty disables file logs.
  std::filesystem::path log_dir;
  chat::Clock clock = chat::system_time;
};

/// HTTP API over sessions, parsing, similarity and evaluation.
class Server {
public:
  explicit Server(ServiceOptions options);
  ~Server();
  Server(const Server &) = delete;
  Server &operator=(const Server &) = delete;

  // Binds and returns the port (port 0 picks a free one), or -1.
  int bind(const std::string &host, int port);
  // Serves until stop(); returns false if the listener failed.
  bool listen();
  void stop();
  // Flushes and closes every session log.
  void close_logs();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

int cmd_serve(const Config &config, Streams io);

}  // namespace convmol::service

#endif  // CONVMOL_SERVICE_HPP_
