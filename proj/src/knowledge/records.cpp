//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <fstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "convmol/knowledge.hpp"

namespace convmol::knowledge {
namespace {

constexpr std::array<std::pair<TaskKind, std::string_view>, 7> kKindNames = { {
  { TaskKind::kMlmText, "mlm_text" },
  { TaskKind::kMlmSmiles, "mlm_smiles" },
  { TaskKind::kProperty, "property" },
  { TaskKind::kSpatial, "spatial" },
  { TaskKind::kMapName2Smiles, "map_name2smiles" },
  { TaskKind::kMapSmiles2Name, "map_smiles2name" },
  { TaskKind::kMapText2Smiles, "map_text2smiles" },
} };

}  // namespace

std::string_view task_kind_name(TaskKind kind) {
  for (auto [k, name]: kKindNames) {
    if (k == kind) {
      return name;
    }
  }
  return "mlm_text";
}

TaskKind task_kind_from_name(std::string_view name) {
  for (auto [k, n]: kKindNames) {
    if (n == name) {
      return k;
    }
  }
  throw std::invalid_argument("unknown task: " + std::string(name));
}

const std::vector<std::string_view> &property_names() {
  static const std::vector<std::string_view> names = {
    "Solubility",
    "Color/Form",
    "Boiling Point",
    "Flash Point",
    "Density",
    "Vapor Density",
    "Decomposition",
    "Corrosivity",
    "Melting Point",
    "LogP",
    "Vapor Pressure",
    "Stability/Shelf Life",
    "Odor",
    "Taste",
    "pH",
  };
  return names;
}

bool is_property_name(std::string_view name) {
  const auto &names = property_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool prefix_matches(TaskKind kind, std::string_view prefix) {
  switch (kind) {
  case TaskKind::kMlmText:
  case TaskKind::kMlmSmiles:
    return prefix == kFillPrefix;
  case TaskKind::kProperty: {
    constexpr std::string_view head = "Predict ";
    if (prefix.size() < head.size() + 1 || prefix.substr(0, head.size()) != head
        || prefix.back() != ':') {
      return false;
    }
    return is_property_name(
        prefix.substr(head.size(), prefix.size() - head.size() - 1));
  }
  case TaskKind::kSpatial:
    return prefix == kSpatialPrefix;
  case TaskKind::kMapName2Smiles:
    return prefix == kName2SmilesPrefix;
  case TaskKind::kMapSmiles2Name:
    return prefix == kSmiles2NamePrefix;
  case TaskKind::kMapText2Smiles:
    return prefix == kText2SmilesPrefix;
  }
  return false;
}

std::string record_to_json(const TaskRecord &record) {
  nlohmann::ordered_json j;
  j["task"] = task_kind_name(record.task);
  j["prefix"] = record.prefix;
  j["input"] = record.input;
  j["target"] = record.target;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto &[k, v]: record.meta) {
    meta[k] = v;
  }
  j["meta"] = std::move(meta);
  return j.dump();
}

TaskRecord parse_task_record(std::string_view json_line) {
  TaskRecord record;
  try {
    const nlohmann::json j = nlohmann::json::parse(json_line);
    record.task = task_kind_from_name(j.at("task").get<std::string>());
    record.prefix = j.at("prefix").get<std::string>();
    record.input = j.at("input").get<std::string>();
    record.target = j.at("target").get<std::string>();
    if (auto it = j.find("meta"); it != j.end()) {
      record.meta = it->get<std::map<std::string, std::string>>();
    }
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("malformed task record: ") + e.what());
  } catch (const std::invalid_argument &e) {
    throw std::runtime_error(e.what());
  }
  if (!prefix_matches(record.task, record.prefix)) {
    throw std::runtime_error("prefix \"" + record.prefix + "\" does not match task "
                             + std::string(task_kind_name(record.task)));
  }
  return record;
}

std::vector<TaskRecord> read_task_records(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::vector<TaskRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      out.push_back(parse_task_record(line));
    } catch (const std::runtime_error &e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no)
                               + ": " + e.what());
    }
  }
  return out;
}

}  // namespace convmol::knowledge
