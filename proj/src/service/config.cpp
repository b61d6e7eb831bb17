//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "convmol/service.hpp"

namespace convmol::service {
namespace {

using nlohmann::json;

void check_keys(const json &j, std::string_view section,
                const std::set<std::string> &allowed) {
  if (!j.is_object()) {
    throw ConfigError(std::string(section) + " must be an object");
  }
  for (const auto &[key, value]: j.items()) {
    if (allowed.count(key) == 0) {
      throw ConfigError("unknown key " + std::string(section) + "." + key);
    }
  }
}

template <class T>
void read(const json &j, const char *key, T &slot, std::string_view section) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    return;
  }
  try {
    slot = it->get<T>();
  } catch (const json::exception &) {
    throw ConfigError("bad value for " + std::string(section) + "." + key);
  }
}

std::filesystem::path resolve(const std::filesystem::path &base,
                              const std::string &p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

Config parse_config(std::string_view json_text,
                    const std::filesystem::path &base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config", { "seed", "builder", "pretrain", "backend", "serve", "chat" });

  Config c;
  read(j, "seed", c.seed, "config");

  if (auto it = j.find("builder"); it != j.end()) {
    const json &b = *it;
    check_keys(b, "builder",
               { "retain_prob", "gate_lower", "gate_upper", "candidates", "threads" });
    read(b, "retain_prob", c.builder.retain_prob, "builder");
    read(b, "gate_lower", c.builder.gate.lower, "builder");
    read(b, "gate_upper", c.builder.gate.upper, "builder");
    read(b, "candidates", c.builder.candidates, "builder");
    read(b, "threads", c.builder.threads, "builder");
  }
  if (!(c.builder.retain_prob >= 0 && c.builder.retain_prob <= 1)) {
    throw ConfigError("builder.retain_prob must lie in [0, 1]");
  }
  if (!(c.builder.gate.lower >= 0 && c.builder.gate.lower < c.builder.gate.upper
        && c.builder.gate.upper <= 1)) {
    throw ConfigError("builder gate must satisfy 0 <= lower < upper <= 1");
  }
  if (c.builder.candidates < 1 || c.builder.threads < 1) {
    throw ConfigError("builder.candidates and builder.threads must be positive");
  }

  if (auto it = j.find("pretrain"); it != j.end()) {
    const json &p = *it;
    check_keys(p, "pretrain", { "corrupt_ratio", "mean_span", "mark_ratio", "spatial" });
    read(p, "corrupt_ratio", c.pretrain.corrupt_ratio, "pretrain");
    read(p, "mean_span", c.pretrain.mean_span, "pretrain");
    read(p, "mark_ratio", c.pretrain.mark_ratio, "pretrain");
    read(p, "spatial", c.pretrain.spatial, "pretrain");
  }
  if (!(c.pretrain.corrupt_ratio > 0 && c.pretrain.corrupt_ratio < 1)
      || !(c.pretrain.mean_span >= 1) || !(c.pretrain.mark_ratio > 0)) {
    throw ConfigError("pretrain parameters out of range");
  }

  if (auto it = j.find("backend"); it != j.end()) {
    const json &b = *it;
    check_keys(b, "backend", { "retrieval", "remote", "timeout" });
    std::string retrieval, remote;
    read(b, "retrieval", retrieval, "backend");
    read(b, "remote", remote, "backend");
    read(b, "timeout", c.backend.timeout, "backend");
    if (!retrieval.empty()) {
      c.backend.retrieval = resolve(base, retrieval);
      if (!std::filesystem::exists(*c.backend.retrieval)) {
        throw ConfigError("retrieval corpus not found: "
                          + c.backend.retrieval->string());
      }
    }
    if (!remote.empty()) {
      c.backend.remote = remote;
    }
  }

  if (auto it = j.find("serve"); it != j.end()) {
    const json &s = *it;
    check_keys(s, "serve", { "host", "port", "log_dir" });
    read(s, "host", c.serve.host, "serve");
    read(s, "port", c.serve.port, "serve");
    std::string log_dir;
    read(s, "log_dir", log_dir, "serve");
    if (!log_dir.empty()) {
      c.serve.log_dir = resolve(base, log_dir);
    }
  }

  if (auto it = j.find("chat"); it != j.end()) {
    const json &ch = *it;
    check_keys(ch, "chat", { "k", "log" });
    read(ch, "k", c.chat.k, "chat");
    std::string log;
    read(ch, "log", log, "chat");
    if (!log.empty()) {
      c.chat.log = resolve(base, log);
    }
  }
  if (c.chat.k < 1) {
    throw ConfigError("chat.k must be positive");
  }

  apply_seed(c, c.seed);
  return c;
}

Config load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

void apply_seed(Config &config, std::uint64_t seed) {
  config.seed = seed;
  config.builder.seed = seed;
  config.pretrain.seed = seed;
}

std::map<std::string, std::shared_ptr<chat::Backend>>
make_backends(const Config &config,
              const std::vector<dialogue::MoleculeDescriptionPair> &fallback) {
  std::map<std::string, std::shared_ptr<chat::Backend>> out;
  if (config.backend.retrieval) {
    out["retrieval"] = std::make_shared<chat::RetrievalBackend>(
        dialogue::read_pairs(*config.backend.retrieval));
  } else if (!fallback.empty()) {
    out["retrieval"] = std::make_shared<chat::RetrievalBackend>(fallback);
  }
  if (config.backend.remote) {
    out["remote"] = std::make_shared<chat::RemoteBackend>(*config.backend.remote,
                                                         config.backend.timeout);
  }
  return out;
}

}  // namespace convmol::service
