//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <queue>
#include <string_view>
#include <vector>

#include "convmol/fingerprint.hpp"

namespace convmol::fp {
namespace {

using smiles::Atom;
using smiles::BondOrder;
using smiles::MolecularGraph;

constexpr int kElementZ[] = { 6, 7, 8, 16, 15, 9, 17, 35, 53, 5 };

bool is_halogen(int z) {
  return z == 9 || z == 17 || z == 35 || z == 53;
}

struct CarbonylSite {
  bool has_double_o = false;
  int single_n = 0;
};

// Number of atoms on the longest simple path through acyclic carbons.
int longest_chain(const MolecularGraph &g) {
  const int n = g.num_atoms();
  auto eligible = [&](int v) {
    const Atom &a = g.atoms()[v];
    return a.element == 6 && !a.in_ring;
  };
  auto farthest = [&](int start, std::vector<int> &dist) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> queue;
    dist[start] = 1;
    queue.push(start);
    int best = start;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      if (dist[u] > dist[best]) {
        best = u;
      }
      for (auto [w, bi]: g.adjacency(u)) {
        if (dist[w] < 0 && eligible(w)) {
          dist[w] = dist[u] + 1;
          queue.push(w);
        }
      }
    }
    return best;
  };

  // Acyclic carbons induce a forest, so two sweeps give each diameter.
  std::vector<int> dist(n), seen(n, 0);
  int best = 0;
  for (int v = 0; v < n; ++v) {
    if (!eligible(v) || seen[v]) {
      continue;
    }
    const int end = farthest(v, dist);
    for (int u = 0; u < n; ++u) {
      if (dist[u] > 0) {
        seen[u] = 1;
      }
    }
    const int other = farthest(end, dist);
    best = std::max(best, dist[other]);
  }
  return best;
}

}  // namespace

const std::vector<std::string_view> &key_names() {
  static const std::vector<std::string_view> names = {
    "has_C",
    "has_N",
    "has_O",
    "has_S",
    "has_P",
    "has_F",
    "has_Cl",
    "has_Br",
    "has_I",
    "has_B",
    "halogen",
    "halogen_ge2",
    "halogen_ge3",
    "ring3",
    "ring4",
    "ring5",
    "ring6",
    "ring7",
    "ring8",
    "ring",
    "rings_ge2",
    "rings_ge3",
    "aromatic_ring",
    "aromatic_rings_ge2",
    "aromatic_rings_ge3",
    "hetero_in_ring",
    "N_in_ring",
    "O_in_ring",
    "S_in_ring",
    "hetero_in_aromatic_ring",
    "carbonyl",
    "carbonyl_ge2",
    "carboxyl",
    "ester",
    "amide",
    "hydroxyl",
    "primary_amine",
    "nitrile",
    "triple_bond",
    "alkene",
    "chain_ge2",
    "chain_ge4",
    "chain_ge8",
    "charged",
    "positive_charge",
    "negative_charge",
    "fused_rings",
    "sulfoxide_or_sulfonyl",
  };
  return names;
}

Fingerprint structural_keys(const MolecularGraph &g) {
  Fingerprint fp(Family::kKeys, kNumKeys, kKeysVersion);
  const auto &atoms = g.atoms();
  const auto &bonds = g.bonds();

  for (int k = 0; k < 10; ++k) {
    for (const Atom &a: atoms) {
      if (a.element == kElementZ[k]) {
        fp.set(k);
        break;
      }
    }
  }

  int halogens = 0;
  for (const Atom &a: atoms) {
    halogens += is_halogen(a.element) ? 1 : 0;
  }
  if (halogens >= 1) {
    fp.set(10);
  }
  if (halogens >= 2) {
    fp.set(11);
  }
  if (halogens >= 3) {
    fp.set(12);
  }

  const auto &rings = g.rings();
  int aromatic_rings = 0;
  bool hetero_in_aromatic = false;
  for (const auto &ring: rings) {
    const int size = static_cast<int>(ring.size());
    if (size >= 3 && size <= 8) {
      fp.set(13 + size - 3);
    }
    bool aromatic = true;
    bool hetero = false;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const int a = ring[i], b = ring[(i + 1) % ring.size()];
      aromatic = aromatic && atoms[a].aromatic
                 && bonds[g.bond_between(a, b)].order == BondOrder::kAromatic;
      hetero = hetero || atoms[a].element != 6;
    }
    if (aromatic) {
      ++aromatic_rings;
      hetero_in_aromatic = hetero_in_aromatic || hetero;
    }
  }
  if (!rings.empty()) {
    fp.set(19);
  }
  if (rings.size() >= 2) {
    fp.set(20);
  }
  if (rings.size() >= 3) {
    fp.set(21);
  }
  if (aromatic_rings >= 1) {
    fp.set(22);
  }
  if (aromatic_rings >= 2) {
    fp.set(23);
  }
  if (aromatic_rings >= 3) {
    fp.set(24);
  }
  for (const Atom &a: atoms) {
    if (!a.in_ring) {
      continue;
    }
    if (a.element != 6 && a.element != 1) {
      fp.set(25);
    }
    if (a.element == 7) {
      fp.set(26);
    }
    if (a.element == 8) {
      fp.set(27);
    }
    if (a.element == 16) {
      fp.set(28);
    }
  }
  if (hetero_in_aromatic) {
    fp.set(29);
  }

  int carbonyls = 0;
  for (const Atom &c: atoms) {
    if (c.element != 6) {
      continue;
    }
    CarbonylSite site;
    for (auto [w, bi]: g.adjacency(c.index)) {
      const Atom &nbr = atoms[w];
      const BondOrder order = bonds[bi].order;
      if (nbr.element == 8 && order == BondOrder::kDouble) {
        site.has_double_o = true;
      } else if (nbr.element == 7 && order == BondOrder::kSingle) {
        ++site.single_n;
      }
    }
    if (!site.has_double_o) {
      continue;
    }
    ++carbonyls;
    for (auto [w, bi]: g.adjacency(c.index)) {
      const Atom &o = atoms[w];
      if (o.element != 8 || bonds[bi].order != BondOrder::kSingle) {
        continue;
      }
      if (o.total_h() >= 1 || o.formal_charge == -1) {
        fp.set(32);
      }
      for (auto [x, bj]: g.adjacency(w)) {
        if (x != c.index && atoms[x].element == 6) {
          fp.set(33);
        }
      }
    }
    if (site.single_n > 0) {
      fp.set(34);
    }
  }
  if (carbonyls >= 1) {
    fp.set(30);
  }
  if (carbonyls >= 2) {
    fp.set(31);
  }

  for (const Atom &a: atoms) {
    if (a.element == 8 && a.total_h() >= 1) {
      for (auto [w, bi]: g.adjacency(a.index)) {
        if (atoms[w].element == 6) {
          fp.set(35);
        }
      }
    }
    if (a.element == 7 && a.total_h() == 2 && a.formal_charge == 0) {
      fp.set(36);
    }
  }

  for (const auto &bond: bonds) {
    const Atom &x = atoms[bond.a];
    const Atom &y = atoms[bond.b];
    if (bond.order == BondOrder::kTriple) {
      fp.set(38);
      if ((x.element == 6 && y.element == 7)
          || (x.element == 7 && y.element == 6)) {
        fp.set(37);
      }
    }
    if (bond.order == BondOrder::kDouble && x.element == 6 && y.element == 6) {
      fp.set(39);
    }
    if (bond.order == BondOrder::kDouble
        && ((x.element == 16 && y.element == 8)
            || (x.element == 8 && y.element == 16))) {
      fp.set(47);
    }
  }

  const int chain = longest_chain(g);
  if (chain >= 2) {
    fp.set(40);
  }
  if (chain >= 4) {
    fp.set(41);
  }
  if (chain >= 8) {
    fp.set(42);
  }

  for (const Atom &a: atoms) {
    if (a.formal_charge != 0) {
      fp.set(43);
    }
    if (a.formal_charge > 0) {
      fp.set(44);
    }
    if (a.formal_charge < 0) {
      fp.set(45);
    }
  }

  for (std::size_t i = 0; i < rings.size() && !fp.test(46); ++i) {
    for (std::size_t j = i + 1; j < rings.size(); ++j) {
      int shared = 0;
      for (int a: rings[i]) {
        shared += std::count(rings[j].begin(), rings[j].end(), a) > 0 ? 1 : 0;
      }
      if (shared >= 2) {
        fp.set(46);
        break;
      }
    }
  }
  return fp;
}

}  // namespace convmol::fp
