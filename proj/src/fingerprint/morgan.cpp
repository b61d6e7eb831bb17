//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "convmol/fingerprint.hpp"
#include "encode.hpp"

namespace convmol::fp {

std::vector<std::vector<std::uint64_t>>
morgan_environments(const smiles::MolecularGraph &g, int radius) {
  if (radius < 0) {
    throw std::invalid_argument("morgan radius must be >= 0");
  }
  const int n = g.num_atoms();
  std::vector<std::vector<std::uint64_t>> ids(radius + 1,
                                              std::vector<std::uint64_t>(n));
  for (const smiles::Atom &a: g.atoms()) {
    ByteWriter w;
    w.put(a.element);
    w.put(g.degree(a.index));
    w.put(a.total_h());
    w.put(a.formal_charge);
    w.put(a.in_ring ? 1 : 0);
    w.put(a.aromatic ? 1 : 0);
    ids[0][a.index] = fnv1a(w.bytes());
  }

  std::vector<std::pair<int, std::uint64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    for (int v = 0; v < n; ++v) {
      env.clear();
      for (auto [w, bi]: g.adjacency(v)) {
        env.emplace_back(static_cast<int>(g.bonds()[bi].order), ids[r - 1][w]);
      }
      std::sort(env.begin(), env.end());
      ByteWriter w;
      w.put(r);
      w.put(ids[r - 1][v]);
      w.put(static_cast<int>(env.size()));
      for (const auto &[order, id]: env) {
        w.put(order);
        w.put(id);
      }
      ids[r][v] = fnv1a(w.bytes());
    }
  }
  return ids;
}

Fingerprint morgan(const smiles::MolecularGraph &g, int radius, int width) {
  check_width(width);
  Fingerprint fp(Family::kMorgan, width, radius);
  for (const auto &level: morgan_environments(g, radius)) {
    for (std::uint64_t id: level) {
      fp.set(static_cast<int>(id % static_cast<std::uint64_t>(width)));
    }
  }
  return fp;
}

}  // namespace convmol::fp
