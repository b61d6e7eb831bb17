//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "convmol/dialogue.hpp"

namespace convmol::dialogue {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string require_string(const json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw std::runtime_error(std::string("missing string field \"") + key
                             + "\"");
  }
  return it->get<std::string>();
}

}  // namespace

MoleculeDescriptionPair parse_pair(std::string_view json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error &e) {
    throw std::runtime_error(std::string("malformed pair: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::runtime_error("pair is not a JSON object");
  }
  MoleculeDescriptionPair pair;
  pair.id = require_string(j, "id");
  pair.smiles = require_string(j, "smiles");
  pair.description = require_string(j, "description");
  if (auto names = j.find("names"); names != j.end() && !names->is_null()) {
    if (!names->is_array()) {
      throw std::runtime_error("names must be a list");
    }
    for (const json &n: *names) {
      if (!n.is_string()) {
        throw std::runtime_error("names must be strings");
      }
      pair.names.push_back(n.get<std::string>());
    }
  }
  if (auto tags = j.find("tags"); tags != j.end() && !tags->is_null()) {
    if (!tags->is_array()) {
      throw std::runtime_error("tags must be a list");
    }
    for (const json &t: *tags) {
      if (!t.is_string()) {
        throw std::runtime_error("tags must be strings");
      }
      pair.tags.push_back(t.get<std::string>());
    }
  }
  return pair;
}

std::string pair_to_json(const MoleculeDescriptionPair &pair) {
  ordered_json j;
  j["id"] = pair.id;
  j["smiles"] = pair.smiles;
  j["description"] = pair.description;
  j["names"] = pair.names;
  if (!pair.tags.empty()) {
    j["tags"] = pair.tags;
  }
  return j.dump();
}

std::vector<MoleculeDescriptionPair>
read_pairs(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::vector<MoleculeDescriptionPair> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      pairs.push_back(parse_pair(line));
    } catch (const std::runtime_error &e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no)
                               + ": " + e.what());
    }
  }
  return pairs;
}

std::string dialogue_to_json(const Dialogue &d) {
  ordered_json j;
  j["id"] = d.id;
  ordered_json turns = ordered_json::array();
  for (const DialogueTurn &t: d.turns) {
    ordered_json turn;
    turn["k"] = t.k;
    turn["text"] = t.text;
    turn["expected_molecule"] = t.expected_molecule;
    turn["sim_to_final"] = t.sim_to_final;
    turn["low_sim_retained"] = t.low_sim_retained;
    turns.push_back(std::move(turn));
  }
  j["turns"] = std::move(turns);
  ordered_json prov;
  prov["seed"] = d.provenance.seed;
  prov["provider"] = d.provenance.provider;
  prov["candidate_fingerprints"] = d.provenance.candidate_fingerprints;
  j["provenance"] = std::move(prov);
  return j.dump();
}

Dialogue parse_dialogue(std::string_view json_line) {
  const json j = json::parse(json_line);
  Dialogue d;
  d.id = j.at("id").get<std::string>();
  for (const json &t: j.at("turns")) {
    DialogueTurn turn;
    turn.k = t.at("k").get<int>();
    turn.text = t.at("text").get<std::string>();
    turn.expected_molecule = t.at("expected_molecule").get<std::string>();
    turn.sim_to_final = t.at("sim_to_final").get<double>();
    turn.low_sim_retained = t.at("low_sim_retained").get<bool>();
    d.turns.push_back(std::move(turn));
  }
  const json &prov = j.at("provenance");
  d.provenance.seed = prov.at("seed").get<std::uint64_t>();
  d.provenance.provider = prov.at("provider").get<std::string>();
  d.provenance.candidate_fingerprints =
      prov.at("candidate_fingerprints").get<std::vector<std::string>>();
  return d;
}

std::string BuildStats::to_json() const {
  ordered_json j;
  j["input"] = input;
  j["emitted"] = emitted;
  j["filtered"] = filtered();
  j["filtered_single_turn"] = filtered_single_turn;
  j["filtered_dash"] = filtered_dash;
  j["filtered_invalid"] = filtered_invalid;
  j["provider_failed"] = provider_failed;
  ordered_json hist = ordered_json::object();
  for (const auto &[turns, count]: turn_histogram) {
    hist[std::to_string(turns) + "-turn"] = count;
  }
  j["turn_histogram"] = std::move(hist);
  j["low_sim_opportunities"] = low_sim_opportunities;
  j["low_sim_retained"] = low_sim_retained;
  return j.dump(2) + "\n";
}

}  // namespace convmol::dialogue
