//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_TESTS_ORACLES_SPATIAL_ORACLE_HPP_
#define CONVMOL_TESTS_ORACLES_SPATIAL_ORACLE_HPP_

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "convmol/smiles.hpp"

namespace convmol::oracle {

// Re-derives the spatial description from the bond list.
inline std::string spatial_target(const smiles::MolecularGraph &g, int atom) {
  static const std::map<smiles::BondOrder, std::string> names {
    { smiles::BondOrder::kSingle, "single" },
    { smiles::BondOrder::kDouble, "double" },
    { smiles::BondOrder::kTriple, "triple" },
    { smiles::BondOrder::kAromatic, "aromatic" },
  };
  std::multiset<std::string> nbrs;
  for (const auto &b: g.bonds()) {
    if (b.a == atom || b.b == atom) {
      const int other = b.a == atom ? b.b : b.a;
      nbrs.insert(std::string(smiles::element_symbol(g.atoms()[other].element)) + "("
                  + names.at(b.order) + ")");
    }
  }
  std::string out = "neighbors: ";
  bool first = true;
  for (const auto &s: nbrs) {
    out += (first ? "" : ", ") + s;
    first = false;
  }
  if (nbrs.empty()) {
    out += "none";
  }
  out += std::string("; aromatic: ") + (g.atoms()[atom].aromatic ? "yes" : "no");
  std::multiset<int> sizes;
  for (const auto &ring: g.rings()) {
    if (std::count(ring.begin(), ring.end(), atom) > 0) {
      sizes.insert(static_cast<int>(ring.size()));
    }
  }
  out += "; ring: ";
  if (sizes.empty()) {
    return out + "no";
  }
  out += "yes(";
  first = true;
  for (int s: sizes) {
    out += (first ? "" : ",") + std::to_string(s);
    first = false;
  }
  return out + ")";
}

}  // namespace convmol::oracle

#endif  // CONVMOL_TESTS_ORACLES_SPATIAL_ORACLE_HPP_
