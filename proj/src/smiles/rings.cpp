//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "internal.hpp"

namespace convmol::smiles::detail {
namespace {

class EdgeSet {
public:
  explicit EdgeSet(int size): words_((size + 63) / 64, 0) { }

  void flip(int i) { words_[i / 64] ^= std::uint64_t { 1 } << (i % 64); }
  bool test(int i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  EdgeSet &operator^=(const EdgeSet &other) {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      words_[i] ^= other.words_[i];
    }
    return *this;
  }

  int lowest() const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] != 0) {
        return static_cast<int>(i * 64)
               + __builtin_ctzll(static_cast<unsigned long long>(words_[i]));
      }
    }
    return -1;
  }

  friend bool operator<(const EdgeSet &x, const EdgeSet &y) {
    return x.words_ < y.words_;
  }

private:
  std::vector<std::uint64_t> words_;
};

struct Candidate {
  std::vector<int> atoms;
  std::vector<int> sorted_atoms;
  EdgeSet edges;
};

std::vector<int> normalize_ring(std::vector<int> ring) {
  auto min_it = std::min_element(ring.begin(), ring.end());
  std::rotate(ring.begin(), min_it, ring.end());
  if (ring.size() > 2 && ring.back() < ring[1]) {
    std::reverse(ring.begin() + 1, ring.end());
  }
  return ring;
}

// Bridges via iterative DFS lowlink.
std::vector<bool> find_ring_bonds(const MolecularGraph &g) {
  const int n = g.num_atoms();
  std::vector<bool> ring_bond(g.num_bonds(), true);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };

  for (int start = 0; start < n; ++start) {
    if (disc[start] >= 0) {
      continue;
    }
    std::vector<Frame> stack { { start, -1, 0 } };
    disc[start] = low[start] = timer++;
    while (!stack.empty()) {
      Frame &top = stack.back();
      const auto &adj = g.adjacency(top.atom);
      if (top.next < adj.size()) {
        auto [nbr, bi] = adj[top.next++];
        if (bi == top.parent_bond) {
          continue;
        }
        if (disc[nbr] < 0) {
          disc[nbr] = low[nbr] = timer++;
          stack.push_back({ nbr, bi, 0 });
        } else {
          low[top.atom] = std::min(low[top.atom], disc[nbr]);
        }
        continue;
      }
      const Frame done = top;
      stack.pop_back();
      if (!stack.empty()) {
        Frame &parent = stack.back();
        low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
        if (low[done.atom] > disc[parent.atom]) {
          ring_bond[done.parent_bond] = false;
        }
      }
    }
  }
  return ring_bond;
}

}  // namespace

std::vector<std::vector<int>> find_sssr(const MolecularGraph &g,
                                        const std::vector<bool> &ring_bond) {
  const int n = g.num_atoms();
  std::vector<int> edge_id(g.num_bonds(), -1);
  int m = 0;
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (int bi = 0; bi < g.num_bonds(); ++bi) {
    if (!ring_bond[bi]) {
      continue;
    }
    edge_id[bi] = m++;
    const Bond &bond = g.bonds()[bi];
    adj[bond.a].emplace_back(bond.b, bi);
    adj[bond.b].emplace_back(bond.a, bi);
  }
  if (m == 0) {
    return {};
  }
  for (auto &list: adj) {
    std::sort(list.begin(), list.end());
  }

  // Cyclomatic number of the ring subgraph.
  int ring_atoms = 0, ring_components = 0;
  {
    std::vector<bool> seen(n, false);
    for (int v = 0; v < n; ++v) {
      if (adj[v].empty() || seen[v]) {
        continue;
      }
      ++ring_components;
      std::vector<int> stack { v };
      seen[v] = true;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        ++ring_atoms;
        for (auto [w, bi]: adj[u]) {
          if (!seen[w]) {
            seen[w] = true;
            stack.push_back(w);
          }
        }
      }
    }
  }
  const int expected = m - ring_atoms + ring_components;

  std::vector<Candidate> candidates;
  std::set<EdgeSet> seen_cycles;
  std::vector<int> dist(n), parent(n), parent_bond(n), mark(n, -1);

  for (int root = 0; root < n; ++root) {
    if (adj[root].empty()) {
      continue;
    }
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> queue;
    dist[root] = 0;
    parent[root] = -1;
    parent_bond[root] = -1;
    queue.push(root);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      for (auto [w, bi]: adj[u]) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          parent_bond[w] = bi;
          queue.push(w);
        }
      }
    }

    for (int bi = 0; bi < g.num_bonds(); ++bi) {
      if (edge_id[bi] < 0) {
        continue;
      }
      const int x = g.bonds()[bi].a, y = g.bonds()[bi].b;
      if (dist[x] < 0 || dist[y] < 0 || parent_bond[x] == bi
          || parent_bond[y] == bi) {
        continue;
      }

      // Paths root->x and root->y must share only the root.
      const int stamp = root * g.num_bonds() + bi;
      for (int u = x; u != root; u = parent[u]) {
        mark[u] = stamp;
      }
      bool disjoint = true;
      for (int u = y; u != root; u = parent[u]) {
        if (mark[u] == stamp) {
          disjoint = false;
          break;
        }
      }
      if (!disjoint) {
        continue;
      }

      Candidate cand { {}, {}, EdgeSet(m) };
      std::vector<int> up_x;
      for (int u = x; u != root; u = parent[u]) {
        up_x.push_back(u);
        cand.edges.flip(edge_id[parent_bond[u]]);
      }
      cand.atoms.push_back(root);
      cand.atoms.insert(cand.atoms.end(), up_x.rbegin(), up_x.rend());
      for (int u = y; u != root; u = parent[u]) {
        cand.atoms.push_back(u);
        cand.edges.flip(edge_id[parent_bond[u]]);
      }
      cand.edges.flip(edge_id[bi]);
      if (!seen_cycles.insert(cand.edges).second) {
        continue;
      }
      cand.sorted_atoms = cand.atoms;
      std::sort(cand.sorted_atoms.begin(), cand.sorted_atoms.end());
      candidates.push_back(std::move(cand));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &p, const Candidate &q) {
              if (p.atoms.size() != q.atoms.size()) {
                return p.atoms.size() < q.atoms.size();
              }
              return p.sorted_atoms < q.sorted_atoms;
            });

  std::vector<std::pair<int, EdgeSet>> basis;
  std::vector<std::vector<int>> rings;
  for (const Candidate &cand: candidates) {
    if (static_cast<int>(rings.size()) == expected) {
      break;
    }
    EdgeSet reduced = cand.edges;
    for (const auto &[pivot, vec]: basis) {
      if (reduced.test(pivot)) {
        reduced ^= vec;
      }
    }
    const int pivot = reduced.lowest();
    if (pivot < 0) {
      continue;
    }
    basis.emplace_back(pivot, std::move(reduced));
    rings.push_back(normalize_ring(cand.atoms));
  }
  return rings;
}

void GraphBuilder::perceive_topology(MolecularGraph &g) {
  const int n = g.num_atoms();
  g.component_.assign(n, -1);
  g.num_components_ = 0;
  for (int v = 0; v < n; ++v) {
    if (g.component_[v] >= 0) {
      continue;
    }
    const int id = g.num_components_++;
    std::vector<int> stack { v };
    g.component_[v] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [w, bi]: g.adjacency_[u]) {
        if (g.component_[w] < 0) {
          g.component_[w] = id;
          stack.push_back(w);
        }
      }
    }
  }

  const std::vector<bool> ring_bond = find_ring_bonds(g);
  for (Atom &atom: g.atoms_) {
    atom.in_ring = false;
  }
  for (int bi = 0; bi < g.num_bonds(); ++bi) {
    Bond &bond = g.bonds_[bi];
    bond.in_ring = ring_bond[bi];
    if (bond.in_ring) {
      g.atoms_[bond.a].in_ring = true;
      g.atoms_[bond.b].in_ring = true;
    }
  }
  g.rings_ = find_sssr(g, ring_bond);
}

}  // namespace convmol::smiles::detail
