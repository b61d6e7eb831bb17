//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <chrono>
#include <ctime>
#include <cstdio>

#include <json.hpp>

#include "convmol/chat.hpp"
#include "convmol/smiles.hpp"

namespace convmol::chat {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view role_name(Role role) {
  return role == Role::kUser ? "user" : "system";
}

std::string_view kind_name(Kind kind) {
  return kind == Kind::kMolecule ? "molecule" : "text";
}

namespace {

ordered_json candidate_set_json(const CandidateSet &set) {
  ordered_json j;
  ordered_json list = ordered_json::array();
  for (const Candidate &c: set.candidates) {
    ordered_json item;
    item["smiles"] = c.smiles;
    item["valid"] = c.valid;
    item["sim_to_prev"] = c.sim_to_prev ? ordered_json(*c.sim_to_prev) : ordered_json();
    list.push_back(std::move(item));
  }
  j["candidates"] = std::move(list);
  j["chosen"] = set.chosen ? ordered_json(*set.chosen) : ordered_json();
  j["padded"] = set.padded;
  return j;
}

CandidateSet parse_candidate_set(const json &j) {
  CandidateSet set;
  for (const json &item: j.at("candidates")) {
    Candidate c;
    c.smiles = item.at("smiles").get<std::string>();
    c.valid = item.at("valid").get<bool>();
    if (auto it = item.find("sim_to_prev"); it != item.end() && !it->is_null()) {
      c.sim_to_prev = it->get<double>();
    }
    set.candidates.push_back(std::move(c));
  }
  if (auto it = j.find("chosen"); it != j.end() && !it->is_null()) {
    set.chosen = it->get<int>();
  }
  set.padded = j.value("padded", false);
  return set;
}

}  // namespace

std::string candidate_set_to_json(const CandidateSet &set) {
  return candidate_set_json(set).dump();
}

std::string event_to_json(const Event &event) {
  ordered_json j;
  j["seq"] = event.seq;
  j["role"] = role_name(event.role);
  j["kind"] = kind_name(event.kind);
  j["content"] = event.content;
  if (event.valid) {
    j["valid"] = *event.valid;
  }
  if (event.tag) {
    j["tag"] = *event.tag;
  }
  if (event.query) {
    j["query"] = *event.query;
  }
  if (event.candidates) {
    j["candidates"] = candidate_set_json(*event.candidates);
  }
  j["time"] = event.time;
  return j.dump();
}

Event parse_event(std::string_view json_line) {
  const json j = json::parse(json_line);
  Event e;
  e.seq = j.at("seq").get<std::int64_t>();
  const std::string role = j.at("role").get<std::string>();
  const std::string kind = j.at("kind").get<std::string>();
  if ((role != "user" && role != "system") || (kind != "molecule" && kind != "text")) {
    throw std::runtime_error("bad event role or kind");
  }
  e.role = role == "user" ? Role::kUser : Role::kSystem;
  e.kind = kind == "molecule" ? Kind::kMolecule : Kind::kText;
  e.content = j.at("content").get<std::string>();
  if (auto it = j.find("valid"); it != j.end()) {
    e.valid = it->get<bool>();
  }
  if (auto it = j.find("tag"); it != j.end()) {
    e.tag = it->get<std::string>();
  }
  if (auto it = j.find("query"); it != j.end()) {
    e.query = it->get<std::string>();
  }
  if (auto it = j.find("candidates"); it != j.end()) {
    e.candidates = parse_candidate_set(*it);
  }
  e.time = j.value("time", "");
  return e;
}

std::string system_time() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()).count() % 1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm {};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

Session::Session(std::string id, std::string backend_id, Clock clock)
    : id_(std::move(id)), backend_id_(std::move(backend_id)),
      clock_(std::move(clock)), created_at_(clock_()) { }

std::string Session::header_json() const {
  ordered_json j;
  j["session"] = id_;
  j["backend"] = backend_id_;
  j["created_at"] = created_at_;
  return j.dump();
}

std::string Session::to_jsonl() const {
  std::string out = header_json() + "\n";
  for (const Event &e: events_) {
    out += event_to_json(e) + "\n";
  }
  return out;
}

void Session::attach_log(std::ostream *log) {
  log_ = log;
  if (log_ != nullptr) {
    *log_ << to_jsonl();
    log_->flush();
  }
}

void Session::commit(std::vector<Event> events) {
  events_.reserve(events_.size() + events.size());
  const std::string time = clock_();
  std::string lines;
  for (Event &e: events) {
    e.seq = static_cast<std::int64_t>(events_.size()) + 1;
    e.time = time;
    lines += event_to_json(e) + "\n";
    events_.push_back(std::move(e));
  }
  if (log_ != nullptr) {
    *log_ << lines;
    log_->flush();
  }
}

std::string compose_generation_query(const std::vector<Event> &history) {
  std::string text;
  const Event *molecule = nullptr;
  for (const Event &e: history) {
    if (e.role == Role::kUser && e.kind == Kind::kText) {
      text += (text.empty() ? "" : " ") + e.content;
    } else if (e.role == Role::kSystem && e.kind == Kind::kMolecule) {
      molecule = &e;
    }
  }
  if (text.empty()) {
    throw ChatError("history holds no user text");
  }
  if (molecule != nullptr) {
    text += " It looks like " + molecule->content + ".";
  }
  return text;
}

namespace {

const Event *last_generated(const std::vector<Event> &events) {
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    if (it->role == Role::kSystem && it->kind == Kind::kMolecule && it->candidates) {
      return &*it;
    }
  }
  return nullptr;
}

}  // namespace

CandidateSet generate_turn(Session &session, Backend &backend,
                           std::string_view text, int k,
                           std::optional<int> choose) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ChatError("turn text is empty");
  }
  if (k < 1) {
    throw ChatError("k must be positive");
  }

  std::vector<Event> staged;
  if (choose) {
    const Event *prev = last_generated(session.events());
    if (prev == nullptr) {
      throw ChatError("no earlier candidates to choose from");
    }
    const auto &cands = prev->candidates->candidates;
    if (*choose < 0 || *choose >= static_cast<int>(cands.size())) {
      throw ChatError("chosen candidate " + std::to_string(*choose) + " out of range");
    }
    if (*choose != prev->candidates->chosen.value_or(0)) {
      Event pick;
      pick.role = Role::kSystem;
      pick.kind = Kind::kMolecule;
      pick.content = cands[*choose].smiles;
      pick.valid = cands[*choose].valid;
      pick.tag = "choice";
      staged.push_back(std::move(pick));
    }
  }
  Event user;
  user.role = Role::kUser;
  user.kind = Kind::kText;
  user.content = std::string(text);
  staged.push_back(std::move(user));

  std::vector<Event> history = session.events();
  history.insert(history.end(), staged.begin(), staged.end());
  const std::string query = compose_generation_query(history);

  std::optional<fp::Fingerprint> prev_fp;
  bool has_prev = false;
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (it->role == Role::kSystem && it->kind == Kind::kMolecule) {
      has_prev = true;
      if (auto g = smiles::parse(it->content)) {
        prev_fp = fp::path_fp(*g);
      }
      break;
    }
  }

  Generation gen = backend.generate(query, k);
  if (static_cast<int>(gen.candidates.size()) != k) {
    const bool padded = gen.padded;
    gen = normalize_generation(std::move(gen.candidates), k);
    gen.padded = gen.padded || padded;
  }

  CandidateSet set;
  set.padded = gen.padded;
  set.chosen = 0;
  for (const std::string &s: gen.candidates) {
    Candidate c;
    c.smiles = s;
    auto g = smiles::parse(s);
    c.valid = g.ok();
    if (has_prev) {
      c.sim_to_prev = (g && prev_fp) ? fp::tanimoto(*prev_fp, fp::path_fp(*g)) : 0.0;
    }
    set.candidates.push_back(std::move(c));
  }

  Event system;
  system.role = Role::kSystem;
  system.kind = Kind::kMolecule;
  system.content = set.candidates.front().smiles;
  system.valid = set.candidates.front().valid;
  if (set.padded) {
    system.tag = "padded";
  }
  system.query = query;
  system.candidates = set;
  staged.push_back(std::move(system));
  session.commit(std::move(staged));
  return set;
}

std::string understand_turn(Session &session, Backend &backend,
                            std::string_view smiles) {
  auto parsed = smiles::parse(smiles);
  if (!parsed) {
    throw ChatError("invalid SMILES: " + parsed.error().message());
  }
  std::string description = backend.understand(smiles);

  Event user;
  user.role = Role::kUser;
  user.kind = Kind::kMolecule;
  user.content = std::string(smiles);
  user.valid = true;
  Event system;
  system.role = Role::kSystem;
  system.kind = Kind::kText;
  system.content = description;
  session.commit({ std::move(user), std::move(system) });
  return description;
}

}  // namespace convmol::chat
