//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "convmol/metrics.hpp"

namespace convmol::metrics {

using nlohmann::json;

Record parse_record(std::string_view json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error &e) {
    throw EvalError(std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) {
    throw EvalError("record is not a JSON object");
  }
  Record record;
  auto id = j.find("id");
  if (id == j.end() || !id->is_string()) {
    throw EvalError("record without string id");
  }
  record.id = id->get<std::string>();
  if (auto turn = j.find("turn"); turn != j.end() && !turn->is_null()) {
    if (!turn->is_number_integer()) {
      throw EvalError("record " + record.id + ": turn must be an integer");
    }
    record.turn = turn->get<int>();
  }
  if (auto c = j.find("candidates"); c != j.end() && !c->is_null()) {
    if (!c->is_array()) {
      throw EvalError("record " + record.id + ": candidates must be a list");
    }
    for (const json &s: *c) {
      if (!s.is_string()) {
        throw EvalError("record " + record.id
                        + ": candidates must be strings");
      }
      record.candidates.push_back(s.get<std::string>());
    }
  }
  if (auto t = j.find("text"); t != j.end() && !t->is_null()) {
    if (!t->is_string()) {
      throw EvalError("record " + record.id + ": text must be a string");
    }
    record.text = t->get<std::string>();
  }
  return record;
}

std::string record_to_json(const Record &record) {
  json j;
  j["id"] = record.id;
  if (record.turn) {
    j["turn"] = *record.turn;
  }
  if (!record.candidates.empty()) {
    j["candidates"] = record.candidates;
  }
  if (record.text) {
    j["text"] = *record.text;
  }
  return j.dump();
}

std::vector<Record> parse_records(std::string_view jsonl) {
  std::vector<Record> records;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) {
      end = jsonl.size();
    }
    ++line_no;
    std::string_view line = jsonl.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.find_first_not_of(" \t") != std::string_view::npos) {
      try {
        records.push_back(parse_record(line));
      } catch (const EvalError &e) {
        throw EvalError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    start = end + 1;
  }
  return records;
}

std::vector<Record> read_records(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw EvalError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_records(buffer.str());
  } catch (const EvalError &e) {
    throw EvalError(path.string() + ": " + e.what());
  }
}

}  // namespace convmol::metrics
