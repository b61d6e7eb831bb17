//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "convmol/chat.hpp"

namespace convmol::chat {

RemoteBackend::RemoteBackend(std::string endpoint_url, double timeout_seconds)
    : timeout_(timeout_seconds) {
  constexpr std::string_view scheme = "http://";
  if (endpoint_url.rfind(scheme, 0) != 0) {
    throw std::invalid_argument("endpoint must be an http:// URL: " + endpoint_url);
  }
  const std::size_t slash = endpoint_url.find('/', scheme.size());
  origin_ = endpoint_url.substr(0, slash);
  if (origin_.size() == scheme.size()) {
    throw std::invalid_argument("endpoint has no host: " + endpoint_url);
  }
  base_path_ = slash == std::string::npos ? "" : endpoint_url.substr(slash);
  while (!base_path_.empty() && base_path_.back() == '/') {
    base_path_.pop_back();
  }
  if (!(timeout_ > 0)) {
    throw std::invalid_argument("timeout must be positive");
  }
}

std::string RemoteBackend::post(const std::string &route,
                                const std::string &body) const {
  httplib::Client client(origin_);
  const auto sec = static_cast<time_t>(timeout_);
  const auto usec = static_cast<time_t>((timeout_ - std::floor(timeout_)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
  auto res = client.Post(base_path_ + route, body, "application/json");
  if (!res) {
    throw BackendError("remote backend " + origin_ + ": "
                       + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw BackendError("remote backend returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

Generation RemoteBackend::generate(std::string_view query, int k) {
  if (k < 1) {
    throw BackendError("k must be positive");
  }
  const nlohmann::json request = { { "query", query }, { "k", k } };
  const std::string body = post("/generate", request.dump());
  std::vector<std::string> candidates;
  try {
    candidates = nlohmann::json::parse(body).at("candidates").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception &e) {
    throw BackendError(std::string("remote backend protocol violation: ") + e.what());
  }
  return normalize_generation(std::move(candidates), k);
}

std::string RemoteBackend::understand(std::string_view smiles) {
  const nlohmann::json request = { { "smiles", smiles } };
  const std::string body = post("/understand", request.dump());
  try {
    return nlohmann::json::parse(body).at("description").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw BackendError(std::string("remote backend protocol violation: ") + e.what());
  }
}

}  // namespace convmol::chat
