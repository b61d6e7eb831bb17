//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "convmol/fingerprint.hpp"
#include "encode.hpp"

namespace convmol::fp {
namespace {

std::string atom_label(const smiles::Atom &a) {
  std::string s(a.symbol());
  if (a.aromatic) {
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  }
  return s;
}

char bond_label(smiles::BondOrder order) {
  switch (order) {
  case smiles::BondOrder::kSingle:
    return '-';
  case smiles::BondOrder::kDouble:
    return '=';
  case smiles::BondOrder::kTriple:
    return '#';
  case smiles::BondOrder::kAromatic:
    return ':';
  }
  return '-';
}

class PathWalker {
public:
  PathWalker(const smiles::MolecularGraph &g, int max_len)
      : g_(g), max_len_(max_len), on_path_(g.num_atoms(), false) {
    for (const smiles::Atom &a: g.atoms()) {
      labels_.push_back(atom_label(a));
    }
  }

  std::set<std::string> run() {
    for (int v = 0; v < g_.num_atoms(); ++v) {
      if (g_.degree(v) == 0) {
        found_.insert(labels_[v]);
        continue;
      }
      atoms_.assign(1, v);
      on_path_[v] = true;
      extend(v);
      on_path_[v] = false;
    }
    return std::move(found_);
  }

private:
  void extend(int v) {
    if (static_cast<int>(atoms_.size()) - 1 >= max_len_) {
      return;
    }
    for (auto [w, bi]: g_.adjacency(v)) {
      if (on_path_[w]) {
        continue;
      }
      atoms_.push_back(w);
      bonds_.push_back(bi);
      on_path_[w] = true;
      // Each path is seen from both ends; keep one.
      if (atoms_.front() < atoms_.back()) {
        record();
      }
      extend(w);
      on_path_[w] = false;
      atoms_.pop_back();
      bonds_.pop_back();
    }
  }

  std::string spell(bool reverse) const {
    const int n = static_cast<int>(atoms_.size());
    std::string s;
    for (int i = 0; i < n; ++i) {
      const int k = reverse ? n - 1 - i : i;
      if (i > 0) {
        const int b = reverse ? k : k - 1;
        s += bond_label(g_.bonds()[bonds_[b]].order);
      }
      s += labels_[atoms_[k]];
    }
    return s;
  }

  void record() {
    std::string forward = spell(false);
    std::string backward = spell(true);
    found_.insert(std::min(forward, backward));
  }

  const smiles::MolecularGraph &g_;
  int max_len_;
  std::vector<bool> on_path_;
  std::vector<std::string> labels_;
  std::vector<int> atoms_;
  std::vector<int> bonds_;
  std::set<std::string> found_;
};

}  // namespace

std::vector<std::string> path_labels(const smiles::MolecularGraph &g,
                                     int max_len) {
  if (max_len < 1) {
    throw std::invalid_argument("path length must be >= 1");
  }
  std::set<std::string> labels = PathWalker(g, max_len).run();
  return { labels.begin(), labels.end() };
}

Fingerprint path_fp(const smiles::MolecularGraph &g, int max_len, int width) {
  check_width(width);
  Fingerprint fp(Family::kPath, width, max_len);
  for (const std::string &label: path_labels(g, max_len)) {
    fp.set(static_cast<int>(fnv1a(label) % static_cast<std::uint64_t>(width)));
  }
  return fp;
}

}  // namespace convmol::fp
