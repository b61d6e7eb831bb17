//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <string>

#include <json.hpp>

#include "convmol/dialogue.hpp"

namespace convmol::dialogue {

EchoProvider::EchoProvider(const std::vector<MoleculeDescriptionPair> &pairs) {
  for (const MoleculeDescriptionPair &p: pairs) {
    answers_.emplace(p.id, p.smiles);
  }
}

std::vector<std::string> EchoProvider::propose(const ProposalRequest &req) {
  auto it = answers_.find(req.pair_id);
  if (it == answers_.end()) {
    throw ProviderError("echo provider: unknown pair " + std::string(req.pair_id));
  }
  return std::vector<std::string>(std::max(1, req.k), it->second);
}

ReplayProvider::ReplayProvider(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      table_[{ j.at("id").get<std::string>(), j.at("text").get<std::string>() }] =
          j.at("candidates").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception &e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no)
                               + ": " + e.what());
    }
  }
}

std::vector<std::string> ReplayProvider::propose(const ProposalRequest &req) {
  auto it = table_.find({ std::string(req.pair_id), std::string(req.text) });
  if (it == table_.end()) {
    throw ProviderError("replay provider: no candidates recorded for "
                        + std::string(req.pair_id));
  }
  std::vector<std::string> out = it->second;
  if (static_cast<int>(out.size()) > req.k) {
    out.resize(req.k);
  }
  return out;
}

}  // namespace convmol::dialogue
