//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <utility>
#include <vector>

#include "internal.hpp"

namespace convmol::smiles {
namespace detail {
namespace {

// Backtracking perfect matching over one connected pi component. Always
// branches on the unmatched atom with the fewest free partners.
class PiMatcher {
public:
  PiMatcher(const std::vector<std::vector<std::pair<int, int>>> &edges,
            std::vector<int> &match_bond, std::vector<int> &mate)
      : edges_(edges), match_bond_(match_bond), mate_(mate) { }

  bool solve(const std::vector<int> &atoms) {
    budget_ = 200000;
    return search(atoms);
  }

private:
  bool search(const std::vector<int> &atoms) {
    if (--budget_ < 0) {
      return false;
    }
    int best = -1, best_free = 0;
    for (int v: atoms) {
      if (mate_[v] >= 0) {
        continue;
      }
      int free = 0;
      for (auto [u, bi]: edges_[v]) {
        free += mate_[u] < 0 ? 1 : 0;
      }
      if (best < 0 || free < best_free) {
        best = v;
        best_free = free;
        if (free <= 1) {
          break;
        }
      }
    }
    if (best < 0) {
      return true;
    }
    if (best_free == 0) {
      return false;
    }
    for (auto [u, bi]: edges_[best]) {
      if (mate_[u] >= 0) {
        continue;
      }
      mate_[best] = u;
      mate_[u] = best;
      match_bond_[best] = match_bond_[u] = bi;
      if (search(atoms)) {
        return true;
      }
      mate_[best] = mate_[u] = -1;
      match_bond_[best] = match_bond_[u] = -1;
    }
    return false;
  }

  const std::vector<std::vector<std::pair<int, int>>> &edges_;
  std::vector<int> &match_bond_;
  std::vector<int> &mate_;
  long budget_ = 0;
};

// Pi electrons an atom donates to a ring, or -1 when it cannot take part.
int pi_electrons(const MolecularGraph &g, int atom) {
  const Atom &a = g.atoms()[atom];
  if (!can_be_aromatic(a.element)) {
    return -1;
  }
  bool ring_double = false, exo_double = false;
  for (auto [nbr, bi]: g.adjacency(atom)) {
    const Bond &bond = g.bonds()[bi];
    if (bond.kekule == BondOrder::kTriple) {
      return -1;
    }
    if (bond.kekule == BondOrder::kDouble) {
      (bond.in_ring ? ring_double : exo_double) = true;
    }
  }
  if (ring_double) {
    return 1;
  }
  if (exo_double) {
    return 0;
  }
  const int connections = g.degree(atom) + a.total_h();
  switch (a.element) {
  case 7:
  case 15:
  case 33:
    if (a.formal_charge == 0 && connections == 3) {
      return 2;
    }
    if (a.formal_charge == -1 && connections == 2) {
      return 2;
    }
    return -1;
  case 8:
  case 16:
  case 34:
    return a.formal_charge == 0 && connections == 2 ? 2 : -1;
  case 6:
    if (a.formal_charge == -1 && connections == 3) {
      return 2;
    }
    if (a.formal_charge == 1 && connections == 3) {
      return 0;
    }
    return -1;
  case 5:
    return a.formal_charge == 0 && connections == 3 ? 0 : -1;
  default:
    return -1;
  }
}

}  // namespace

std::optional<int> kekulize(MolecularGraph &g,
                            const std::vector<bool> &needs_pi) {
  std::vector<Bond> &bonds = GraphBuilder::bonds(g);
  const int n = g.num_atoms();
  std::vector<std::vector<std::pair<int, int>>> edges(n);
  for (int bi = 0; bi < g.num_bonds(); ++bi) {
    Bond &bond = bonds[bi];
    if (bond.order != BondOrder::kAromatic) {
      continue;
    }
    bond.kekule = BondOrder::kSingle;
    if (bond.in_ring && needs_pi[bond.a] && needs_pi[bond.b]) {
      edges[bond.a].emplace_back(bond.b, bi);
      edges[bond.b].emplace_back(bond.a, bi);
    }
  }

  std::vector<int> mate(n, -1), match_bond(n, -1);
  std::vector<bool> visited(n, false);
  PiMatcher matcher(edges, match_bond, mate);
  for (int v = 0; v < n; ++v) {
    if (!needs_pi[v] || visited[v]) {
      continue;
    }
    std::vector<int> component;
    std::vector<int> stack { v };
    visited[v] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      component.push_back(u);
      for (auto [w, bi]: edges[u]) {
        if (!visited[w]) {
          visited[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(component.begin(), component.end());
    if (!matcher.solve(component)) {
      for (int u: component) {
        if (mate[u] < 0) {
          return u;
        }
      }
      return component.front();
    }
  }

  for (int v = 0; v < n; ++v) {
    if (match_bond[v] >= 0) {
      bonds[match_bond[v]].kekule = BondOrder::kDouble;
    }
  }
  return std::nullopt;
}

void assign_aromaticity(MolecularGraph &g) {
  std::vector<Atom> &atoms = GraphBuilder::atoms(g);
  std::vector<Bond> &bonds = GraphBuilder::bonds(g);
  for (Atom &atom: atoms) {
    atom.aromatic = false;
  }
  for (Bond &bond: bonds) {
    bond.order = bond.kekule;
  }

  std::vector<int> electrons(g.num_atoms());
  for (int i = 0; i < g.num_atoms(); ++i) {
    electrons[i] = pi_electrons(g, i);
  }

  for (const auto &ring: g.rings()) {
    const int size = static_cast<int>(ring.size());
    if (size < 5 || size > 7) {
      continue;
    }
    int total = 0;
    bool capable = true;
    for (int a: ring) {
      if (electrons[a] < 0) {
        capable = false;
        break;
      }
      total += electrons[a];
    }
    if (!capable || total % 4 != 2) {
      continue;
    }
    for (int i = 0; i < size; ++i) {
      const int a = ring[i], b = ring[(i + 1) % size];
      atoms[a].aromatic = true;
      bonds[g.bond_between(a, b)].order = BondOrder::kAromatic;
    }
  }
}

}  // namespace detail

MolecularGraph perceive_aromaticity(MolecularGraph g) {
  detail::assign_aromaticity(g);
  return g;
}

}  // namespace convmol::smiles
