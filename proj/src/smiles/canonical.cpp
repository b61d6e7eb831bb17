//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "internal.hpp"

namespace convmol::smiles {
namespace {

constexpr int kLeafBudget = 2000;

// Dense ranks of `keys`; equal keys share a rank.
template <class Key>
std::vector<int> dense_rank(const std::vector<Key> &keys) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return keys[x] < keys[y]; });
  std::vector<int> ranks(n, 0);
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && keys[order[i - 1]] < keys[order[i]]) {
      ++rank;
    }
    ranks[order[i]] = rank;
  }
  return ranks;
}

int count_classes(const std::vector<int> &ranks) {
  return ranks.empty() ? 0
                       : *std::max_element(ranks.begin(), ranks.end()) + 1;
}

std::vector<int> initial_ranks(const MolecularGraph &g) {
  using Key = std::tuple<int, int, int, int, int, bool, bool>;
  std::vector<Key> keys;
  keys.reserve(g.num_atoms());
  for (const Atom &a: g.atoms()) {
    keys.emplace_back(a.element, a.isotope.value_or(0), g.degree(a.index),
                      a.formal_charge, a.total_h(), a.in_ring, a.aromatic);
  }
  return dense_rank(keys);
}

void refine(const MolecularGraph &g, std::vector<int> &ranks) {
  using Key = std::pair<int, std::vector<std::pair<int, int>>>;
  int classes = count_classes(ranks);
  while (classes < g.num_atoms()) {
    std::vector<Key> keys(g.num_atoms());
    for (int v = 0; v < g.num_atoms(); ++v) {
      keys[v].first = ranks[v];
      auto &nbrs = keys[v].second;
      for (auto [w, bi]: g.adjacency(v)) {
        nbrs.emplace_back(ranks[w], detail::bond_code(g.bonds()[bi].order));
      }
      std::sort(nbrs.begin(), nbrs.end());
    }
    std::vector<int> next = dense_rank(keys);
    const int next_classes = count_classes(next);
    ranks = std::move(next);
    if (next_classes == classes) {
      break;
    }
    classes = next_classes;
  }
}

std::string join_components(const std::string &smiles) {
  if (smiles.find('.') == std::string::npos) {
    return smiles;
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = smiles.find('.', start);
    parts.push_back(smiles.substr(start, dot - start));
    if (dot == std::string::npos) {
      break;
    }
    start = dot + 1;
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) {
      out += '.';
    }
    out += parts[i];
  }
  return out;
}

class UnionFind {
public:
  explicit UnionFind(int n): parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x != y) {
      parent_[std::max(x, y)] = std::min(x, y);
    }
  }

private:
  std::vector<int> parent_;
};

// Individualization-refinement search for the lexicographically smallest
// SMILES over all discrete refinements. Automorphisms discovered from equal
// leaves prune equivalent branches.
class CanonicalSearch {
public:
  explicit CanonicalSearch(const MolecularGraph &g): g_(g) { }

  void run() {
    std::vector<int> ranks = initial_ranks(g_);
    refine(g_, ranks);
    std::vector<int> prefix;
    search(ranks, prefix);
  }

  const std::string &best() const { return best_; }
  const std::vector<int> &best_ranks() const { return best_ranks_; }

private:
  void search(const std::vector<int> &ranks, std::vector<int> &prefix) {
    if (leaves_ >= kLeafBudget) {
      return;
    }
    const int n = g_.num_atoms();
    if (count_classes(ranks) == n) {
      leaf(ranks);
      return;
    }

    std::vector<int> sizes(n, 0);
    for (int r: ranks) {
      ++sizes[r];
    }
    int target = 0;
    while (sizes[target] < 2) {
      ++target;
    }
    std::vector<int> cell;
    for (int v = 0; v < n; ++v) {
      if (ranks[v] == target) {
        cell.push_back(v);
      }
    }

    std::vector<int> explored;
    for (int v: cell) {
      if (leaves_ >= kLeafBudget) {
        return;
      }
      if (!explored.empty() && equivalent_to_explored(prefix, explored, v)) {
        continue;
      }
      explored.push_back(v);

      std::vector<int> child(n);
      for (int u = 0; u < n; ++u) {
        child[u] = 2 * ranks[u] + 1;
      }
      child[v] = 2 * ranks[v];
      child = dense_rank(child);
      refine(g_, child);
      prefix.push_back(v);
      search(child, prefix);
      prefix.pop_back();
    }
  }

  bool equivalent_to_explored(const std::vector<int> &prefix,
                              const std::vector<int> &explored, int v) {
    UnionFind orbits(g_.num_atoms());
    bool any = false;
    for (const auto &perm: generators_) {
      bool fixes = true;
      for (int p: prefix) {
        if (perm[p] != p) {
          fixes = false;
          break;
        }
      }
      if (!fixes) {
        continue;
      }
      any = true;
      for (int u = 0; u < g_.num_atoms(); ++u) {
        orbits.unite(u, perm[u]);
      }
    }
    if (!any) {
      return false;
    }
    const int root = orbits.find(v);
    for (int e: explored) {
      if (orbits.find(e) == root) {
        return true;
      }
    }
    return false;
  }

  void leaf(const std::vector<int> &ranks) {
    ++leaves_;
    WriteOptions options;
    options.priority = ranks;
    WrittenSmiles written = write_smiles(g_, options);
    std::string smiles = join_components(written.smiles);
    if (best_.empty() || smiles < best_) {
      best_ = std::move(smiles);
      best_order_ = std::move(written.order);
      best_ranks_ = ranks;
      return;
    }
    if (smiles == best_) {
      std::vector<int> perm(g_.num_atoms());
      for (std::size_t i = 0; i < written.order.size(); ++i) {
        perm[best_order_[i]] = written.order[i];
      }
      generators_.push_back(std::move(perm));
    }
  }

  const MolecularGraph &g_;
  std::string best_;
  std::vector<int> best_order_;
  std::vector<int> best_ranks_;
  std::vector<std::vector<int>> generators_;
  int leaves_ = 0;
};

}  // namespace

std::vector<int> canonical_ranks(const MolecularGraph &g) {
  if (g.num_atoms() == 0) {
    return {};
  }
  CanonicalSearch search(g);
  search.run();
  return search.best_ranks();
}

std::string canonical(const MolecularGraph &g) {
  if (g.num_atoms() == 0) {
    return {};
  }
  CanonicalSearch search(g);
  search.run();
  return search.best();
}

}  // namespace convmol::smiles
