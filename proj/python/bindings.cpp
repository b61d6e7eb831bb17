//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "convmol/chat.hpp"
#include "convmol/dialogue.hpp"
#include "convmol/fingerprint.hpp"
#include "convmol/knowledge.hpp"
#include "convmol/lexicon.hpp"
#include "convmol/metrics.hpp"
#include "convmol/service.hpp"
#include "convmol/smiles.hpp"

namespace py = pybind11;
using namespace convmol;

namespace {

fp::Fingerprint fingerprint(std::string_view smiles, std::string_view family) {
  const auto g = smiles::parse_or_throw(smiles);
  switch (fp::family_from_name(family)) {
  case fp::Family::kMorgan:
    return fp::morgan(g);
  case fp::Family::kKeys:
    return fp::structural_keys(g);
  case fp::Family::kPath:
    break;
  }
  return fp::path_fp(g);
}

}  // namespace

PYBIND11_MODULE(_convmol, m) {
  m.doc() = "Molecule-text dialogue toolkit";

  py::register_exception<smiles::SmilesError>(m, "SmilesError", PyExc_ValueError);
  py::register_exception<metrics::EvalError>(m, "EvalError", PyExc_ValueError);
  py::register_exception<chat::BackendError>(m, "BackendError", PyExc_RuntimeError);

  m.def("is_valid", &smiles::is_valid, py::arg("smiles"));
  m.def("canonical_smiles", &smiles::canonical_smiles, py::arg("smiles"));
  m.def(
      "graph_json",
      [](std::string_view s) { return service::graph_json(smiles::parse_or_throw(s)); },
      py::arg("smiles"));
  m.def(
      "parse_error_json",
      [](std::string_view s) -> std::optional<std::string> {
        const auto r = smiles::parse(s);
        if (r) {
          return std::nullopt;
        }
        return service::parse_error_json(r.error());
      },
      py::arg("smiles"));

  m.def(
      "fingerprint_hex",
      [](std::string_view s, std::string_view family) { return fingerprint(s, family).to_hex(); },
      py::arg("smiles"), py::arg("family") = "morgan");
  m.def(
      "tanimoto",
      [](std::string_view a, std::string_view b, std::string_view family) {
        return fp::tanimoto(fingerprint(a, family), fingerprint(b, family));
      },
      py::arg("a"), py::arg("b"), py::arg("family") = "morgan");
  m.def(
      "similarity",
      [](std::string_view a, std::string_view b) {
        const auto s = fp::similarity(smiles::parse_or_throw(a), smiles::parse_or_throw(b));
        return py::dict(py::arg("rdk") = s.rdk, py::arg("maccs") = s.maccs,
                        py::arg("morgan") = s.morgan);
      },
      py::arg("a"), py::arg("b"));

  m.def("levenshtein", &metrics::levenshtein, py::arg("a"), py::arg("b"));
  m.def("word_tokens", &metrics::word_tokens, py::arg("text"));
  m.def("bleu", &metrics::bleu, py::arg("reference"), py::arg("hypothesis"), py::arg("max_n") = 4);
  m.def(
      "rouge",
      [](const metrics::Tokens &ref, const metrics::Tokens &hyp) {
        const auto r = metrics::rouge(ref, hyp);
        return py::dict(py::arg("rouge1") = r.rouge1, py::arg("rouge2") = r.rouge2,
                        py::arg("rougeL") = r.rougeL);
      },
      py::arg("reference"), py::arg("hypothesis"));
  m.def("exact_match", &metrics::exact_match, py::arg("prediction"), py::arg("reference"));
  m.def(
      "evaluate_json",
      [](std::string_view task, const std::filesystem::path &predictions,
         const std::filesystem::path &references) {
        const auto preds = metrics::read_records(predictions);
        const auto refs = metrics::read_records(references);
        return metrics::task_from_name(task) == metrics::Task::kGeneration
                   ? metrics::evaluate_generation(preds, refs).to_json()
                   : metrics::evaluate_understanding(preds, refs).to_json();
      },
      py::arg("task"), py::arg("predictions"), py::arg("references"));

  m.def("split_sentences", &dialogue::split_sentences, py::arg("text"));
  m.def("replace_synonyms", &dialogue::replace_synonyms, py::arg("text"), py::arg("names"));

  m.def(
      "span_corrupt",
      [](const std::vector<std::string> &tokens, std::uint64_t seed, double ratio, double mean) {
        dialogue::Rng rng(seed);
        const auto s = knowledge::span_corrupt(tokens, rng, ratio, mean);
        return py::make_tuple(s.input, s.target);
      },
      py::arg("tokens"), py::arg("seed") = 0, py::arg("ratio") = 0.15, py::arg("mean_span") = 3.0);

  py::class_<lexicon::Lexicon>(m, "Lexicon")
      .def(py::init([](const std::filesystem::path &path) { return lexicon::load_kb(path); }),
           py::arg("path"))
      .def("__len__", &lexicon::Lexicon::size)
      .def("recognize", [](const lexicon::Lexicon &lex, std::string_view text) {
        py::list out;
        for (const auto &mtn: lexicon::recognize(text, lex)) {
          out.append(py::dict(py::arg("start") = mtn.start, py::arg("end") = mtn.end,
                              py::arg("surface") = mtn.surface, py::arg("smiles") = mtn.smiles,
                              py::arg("name") = mtn.preferred_name));
        }
        return out;
      });

  py::class_<chat::RetrievalBackend>(m, "RetrievalBackend")
      .def(py::init([](const std::filesystem::path &pairs) {
             return chat::RetrievalBackend(dialogue::read_pairs(pairs));
           }),
           py::arg("pairs_path"))
      .def("understand", &chat::RetrievalBackend::understand, py::arg("smiles"))
      .def(
          "generate",
          [](chat::RetrievalBackend &b, std::string_view query, int k) {
            return b.generate(query, k).candidates;
          },
          py::arg("query"), py::arg("k") = chat::kDefaultCandidates)
      .def("scores", &chat::RetrievalBackend::scores, py::arg("query"));

  m.def("compose_query", [](const std::vector<std::string> &texts,
                            std::optional<std::string> last_molecule) {
    std::vector<chat::Event> history;
    for (const auto &t: texts) {
      chat::Event e;
      e.content = t;
      history.push_back(e);
    }
    if (last_molecule) {
      chat::Event e;
      e.role = chat::Role::kSystem;
      e.kind = chat::Kind::kMolecule;
      e.content = *last_molecule;
      history.push_back(e);
    }
    return chat::compose_generation_query(history);
  }, py::arg("texts"), py::arg("last_molecule") = std::nullopt);
}
