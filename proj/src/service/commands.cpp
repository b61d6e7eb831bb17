//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "convmol/service.hpp"
#include "convmol/smiles.hpp"

namespace convmol::service {
namespace {

// Writes `content` next to `path` and renames it into place.
void write_atomically(const std::filesystem::path &path,
                      const std::string &content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string graph_json(const smiles::MolecularGraph &g) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
  for (const smiles::Atom &a: g.atoms()) {
    nlohmann::ordered_json atom;
    atom["element"] = smiles::element_symbol(a.element);
    atom["aromatic"] = a.aromatic;
    atom["charge"] = a.formal_charge;
    atom["ring"] = a.in_ring;
    atoms.push_back(std::move(atom));
  }
  nlohmann::ordered_json bonds = nlohmann::ordered_json::array();
  for (const smiles::Bond &b: g.bonds()) {
    nlohmann::ordered_json bond;
    bond["a"] = b.a;
    bond["b"] = b.b;
    bond["order"] = smiles::bond_order_name(b.order);
    bonds.push_back(std::move(bond));
  }
  j["atoms"] = std::move(atoms);
  j["bonds"] = std::move(bonds);
  return j.dump();
}

std::string parse_error_json(const smiles::ParseError &error) {
  nlohmann::ordered_json j;
  j["error"] = {
    { "kind", smiles::parse_error_kind_name(error.kind) },
    { "position", error.position },
    { "message", error.message() },
  };
  return j.dump();
}

int cmd_build_dialogues(const Config &config, const BuildOptions &options,
                        Streams io) {
  try {
    const auto pairs = dialogue::read_pairs(options.input);
    std::unique_ptr<dialogue::CandidateProvider> provider;
    std::shared_ptr<chat::Backend> backend;
    switch (options.provider) {
    case ProviderKind::kEcho:
      provider = std::make_unique<dialogue::EchoProvider>(pairs);
      break;
    case ProviderKind::kReplay:
      if (!options.replay) {
        throw std::runtime_error("the replay provider needs a candidate file");
      }
      provider = std::make_unique<dialogue::ReplayProvider>(*options.replay);
      break;
    case ProviderKind::kBackend: {
      auto backends = make_backends(config, pairs);
      auto it = backends.find(config.backend.remote ? "remote" : "retrieval");
      if (it == backends.end()) {
        throw std::runtime_error("no backend configured");
      }
      backend = it->second;
      provider = std::make_unique<chat::BackendCandidateProvider>(*backend);
      break;
    }
    }

    const dialogue::BuildResult result =
        dialogue::build_dataset(pairs, *provider, config.builder);
    std::string lines;
    for (const dialogue::Dialogue &d: result.dialogues) {
      lines += dialogue::dialogue_to_json(d) + "\n";
    }
    const std::string stats = result.stats.to_json();
    write_atomically(options.output, lines);
    if (options.stats) {
      write_atomically(*options.stats, stats);
    }
    io.out << stats;
    return 0;
  } catch (const std::exception &e) {
    io.err << "build-dialogues: " << e.what() << "\n";
    return 1;
  }
}

int cmd_gen_pretrain(const Config &config,
                     const std::filesystem::path &manifest,
                     const std::filesystem::path &output, Streams io) {
  try {
    const auto sources = knowledge::read_sources_manifest(manifest);
    const auto records = knowledge::generate_pretraining(sources, config.pretrain);
    std::string lines;
    std::map<std::string, int> counts;
    for (const auto &r: records) {
      lines += knowledge::record_to_json(r) + "\n";
      ++counts[std::string(knowledge::task_kind_name(r.task))];
    }
    write_atomically(output, lines);
    nlohmann::ordered_json summary;
    summary["records"] = records.size();
    summary["by_task"] = counts;
    io.out << summary.dump(2) << "\n";
    return 0;
  } catch (const std::exception &e) {
    io.err << "gen-pretrain: " << e.what() << "\n";
    return 1;
  }
}

int cmd_evaluate(std::string_view task, const std::filesystem::path &predictions,
                 const std::filesystem::path &references,
                 const std::filesystem::path &report_out, Streams io) {
  try {
    const metrics::Task t = metrics::task_from_name(task);
    const auto preds = metrics::read_records(predictions);
    const auto refs = metrics::read_records(references);
    const metrics::EvalReport report = t == metrics::Task::kGeneration
                                           ? metrics::evaluate_generation(preds, refs)
                                           : metrics::evaluate_understanding(preds, refs);
    const std::string json = report.to_json();
    if (report_out.empty()) {
      io.out << json;
    } else {
      write_atomically(report_out, json);
    }
    return 0;
  } catch (const std::exception &e) {
    io.err << "evaluate: " << e.what() << "\n";
    return 1;
  }
}

namespace {

void print_candidates(const chat::CandidateSet &set, std::ostream &out) {
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    const chat::Candidate &c = set.candidates[i];
    out << "  " << (i + 1) << ". " << c.smiles << "  "
        << (c.valid ? "valid" : "invalid");
    if (c.sim_to_prev) {
      out << "  sim=" << std::fixed << std::setprecision(3) << *c.sim_to_prev
          << std::defaultfloat;
    }
    out << "\n";
  }
  if (set.padded) {
    out << "  (padded)\n";
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

int cmd_chat(const Config &config, chat::Backend &backend, std::istream &in,
             const ChatOptions &options, Streams io) {
  chat::Session session(options.session_id, backend.id(), options.clock);
  std::ofstream log;
  const auto log_path = options.log ? options.log : config.chat.log;
  if (log_path) {
    log.open(*log_path, std::ios::binary | std::ios::trunc);
    if (!log) {
      io.err << "chat: cannot open log " << log_path->string() << "\n";
      return 1;
    }
    session.attach_log(&log);
  }

  std::optional<int> choice;
  std::size_t last_size = 0;
  std::string line;
  io.out << "> " << std::flush;
  while (std::getline(in, line)) {
    const std::string input = trim(line);
    if (input == "quit" || input == "exit") {
      break;
    }
    if (input.empty()) {
      io.out << "> " << std::flush;
      continue;
    }
    try {
      if (input.rfind("mol:", 0) == 0) {
        const std::string smiles = trim(std::string_view(input).substr(4));
        io.out << chat::understand_turn(session, backend, smiles) << "\n";
      } else if (input.rfind("choose ", 0) == 0) {
        const int n = std::stoi(input.substr(7));
        if (n < 1 || static_cast<std::size_t>(n) > last_size) {
          throw chat::ChatError("no candidate " + std::to_string(n) + " in the last turn");
        }
        choice = n - 1;
        io.out << "next query refines candidate " << n << "\n";
      } else {
        const chat::CandidateSet set =
            chat::generate_turn(session, backend, input, config.chat.k, choice);
        choice.reset();
        last_size = set.candidates.size();
        print_candidates(set, io.out);
      }
    } catch (const std::exception &e) {
      choice.reset();
      io.out << "error: " << e.what() << "\n";
    }
    io.out << "> " << std::flush;
  }
  io.out << "\n";
  if (log.is_open()) {
    log.close();
  }
  return 0;
}

}  // namespace convmol::service
