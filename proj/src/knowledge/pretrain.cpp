//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "convmol/knowledge.hpp"

namespace convmol::knowledge {
namespace {

std::vector<std::string> read_lines(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") != std::string::npos) {
      lines.push_back(std::move(line));
    }
  }
  return lines;
}

std::string item_key(std::string_view source, std::size_t index) {
  return std::string(source) + ":" + std::to_string(index);
}

void add_property_source(const std::filesystem::path &path,
                         std::vector<TaskRecord> &out) {
  int line_no = 0;
  for (const std::string &line: read_lines(path)) {
    ++line_no;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    std::string smiles;
    std::vector<PropertyItem> items;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      smiles = j.at("smiles").get<std::string>();
      for (const auto &[name, value]: j.at("properties").items()) {
        items.push_back({ name, value.get<std::string>() });
      }
    } catch (const nlohmann::json::exception &e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    try {
      for (TaskRecord &r: make_property_records(smiles, items)) {
        out.push_back(std::move(r));
      }
    } catch (const std::invalid_argument &e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  }
}

}  // namespace

PretrainSources read_sources_manifest(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  if (!j.is_object()) {
    throw std::runtime_error(path.string() + ": manifest must be an object");
  }
  const std::filesystem::path base = path.parent_path();
  PretrainSources sources;
  auto field = [&](const char *key, std::optional<std::filesystem::path> &slot) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      return;
    }
    if (!it->is_string()) {
      throw std::runtime_error(path.string() + ": \"" + key + "\" must be a path");
    }
    std::filesystem::path p = it->get<std::string>();
    slot = p.is_absolute() ? p : base / p;
  };
  field("text", sources.text);
  field("smiles", sources.smiles);
  field("properties", sources.properties);
  field("lexicon", sources.lexicon);
  field("descriptions", sources.descriptions);
  return sources;
}

std::vector<TaskRecord> generate_pretraining(const PretrainSources &sources,
                                             const PretrainConfig &config) {
  std::vector<TaskRecord> out;

  if (sources.text) {
    const auto docs = read_lines(*sources.text);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (text_tokens(docs[i]).size() < 2) {
        continue;
      }
      auto rng = dialogue::Rng::for_item(config.seed, item_key("text", i));
      out.push_back(make_mlm_record(TaskKind::kMlmText, docs[i], rng,
                                    config.corrupt_ratio, config.mean_span));
    }
  }

  if (sources.smiles) {
    const auto lines = read_lines(*sources.smiles);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string smiles = text_tokens(lines[i]).front();
      auto parsed = smiles::parse(smiles);
      if (!parsed) {
        throw std::runtime_error(sources.smiles->string() + ":"
                                 + std::to_string(i + 1) + ": "
                                 + parsed.error().message());
      }
      auto rng = dialogue::Rng::for_item(config.seed, item_key("smiles", i));
      if (smiles_tokens(smiles).size() >= 2) {
        out.push_back(make_mlm_record(TaskKind::kMlmSmiles, smiles, rng,
                                      config.corrupt_ratio, config.mean_span));
      }
      if (config.spatial) {
        for (TaskRecord &r: make_spatial_records(*parsed, rng, config.mark_ratio)) {
          out.push_back(std::move(r));
        }
      }
    }
  }

  if (sources.properties) {
    add_property_source(*sources.properties, out);
  }

  std::optional<lexicon::Lexicon> lex;
  if (sources.lexicon) {
    lex = lexicon::load_kb(*sources.lexicon);
    for (const lexicon::Entry &e: lex->entries()) {
      out.push_back(make_name_record(e.preferred_name, e.smiles));
      out.push_back({ TaskKind::kMapSmiles2Name, std::string(kSmiles2NamePrefix),
                      e.smiles, e.preferred_name, {} });
    }
  }

  if (sources.descriptions) {
    for (const auto &pair: dialogue::read_pairs(*sources.descriptions)) {
      std::vector<EntityRef> entities;
      if (lex) {
        entities = entities_from_mentions(lexicon::recognize(pair.description, *lex));
      }
      for (TaskRecord &r: make_mapping_records(pair.description, entities)) {
        out.push_back(std::move(r));
      }
      out.push_back({ TaskKind::kMapText2Smiles, std::string(kText2SmilesPrefix),
                      make_prompt(pair.description, entities, { pair.smiles }),
                      pair.smiles, { { "id", pair.id } } });
      for (const std::string &name: pair.names) {
        out.push_back(make_name_record(name, pair.smiles));
      }
    }
  }

  dialogue::Rng shuffle(config.seed);
  for (std::size_t i = out.size(); i > 1; --i) {
    std::swap(out[i - 1], out[shuffle.index(i)]);
  }
  return out;
}

}  // namespace convmol::knowledge
