//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "internal.hpp"

namespace convmol::smiles {
namespace {

struct RingBond {
  int partner;
  int bond;
};

class SmilesWriter {
public:
  SmilesWriter(const MolecularGraph &g, const WriteOptions &options)
      : g_(g), kekule_(options.kekule), priority_(options.priority),
        visited_(g.num_atoms(), false), bond_used_(g.num_bonds(), false),
        children_(g.num_atoms()), opens_(g.num_atoms()),
        closes_(g.num_atoms()), position_(g.num_atoms(), -1),
        digits_in_use_(1, true) {
    if (static_cast<int>(priority_.size()) != g.num_atoms()) {
      priority_.resize(g.num_atoms());
      for (int i = 0; i < g.num_atoms(); ++i) {
        priority_[i] = i;
      }
    }
  }

  WrittenSmiles run() {
    const int n = g_.num_atoms();
    std::vector<int> by_priority(n);
    for (int i = 0; i < n; ++i) {
      by_priority[i] = i;
    }
    std::sort(by_priority.begin(), by_priority.end(),
              [this](int x, int y) { return less(x, y); });

    std::vector<int> roots;
    for (int v: by_priority) {
      if (!visited_[v]) {
        roots.push_back(v);
        plan(v, -1);
      }
    }

    // Output positions decide the digit order at each atom.
    int counter = 0;
    for (int root: roots) {
      number(root, counter);
    }
    for (int v = 0; v < n; ++v) {
      auto by_position = [this](const RingBond &x, const RingBond &y) {
        return position_[x.partner] < position_[y.partner];
      };
      std::sort(opens_[v].begin(), opens_[v].end(), by_position);
      std::sort(closes_[v].begin(), closes_[v].end(), by_position);
    }

    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (i > 0) {
        out_.smiles += '.';
      }
      emit(roots[i], -1);
    }
    return std::move(out_);
  }

private:
  bool less(int x, int y) const {
    if (priority_[x] != priority_[y]) {
      return priority_[x] < priority_[y];
    }
    return x < y;
  }

  void plan(int v, int parent_bond) {
    visited_[v] = true;
    std::vector<std::pair<int, int>> nbrs = g_.adjacency(v);
    std::sort(nbrs.begin(), nbrs.end(),
              [this](const auto &x, const auto &y) {
                return less(x.first, y.first);
              });
    for (auto [w, bi]: nbrs) {
      if (bi == parent_bond || bond_used_[bi]) {
        continue;
      }
      bond_used_[bi] = true;
      if (visited_[w]) {
        opens_[w].push_back({ v, bi });
        closes_[v].push_back({ w, bi });
        continue;
      }
      children_[v].push_back({ w, bi });
      plan(w, bi);
    }
  }

  void number(int v, int &counter) {
    position_[v] = counter++;
    for (const RingBond &child: children_[v]) {
      number(child.partner, counter);
    }
  }

  bool written_aromatic(int atom) const {
    return !kekule_ && g_.atoms()[atom].aromatic;
  }

  BondOrder written_order(const Bond &bond) const {
    return kekule_ ? bond.kekule : bond.order;
  }

  void emit_bond(int bi) {
    const Bond &bond = g_.bonds()[bi];
    switch (written_order(bond)) {
    case BondOrder::kSingle:
      if (written_aromatic(bond.a) && written_aromatic(bond.b)) {
        out_.smiles += '-';
      }
      break;
    case BondOrder::kDouble:
      out_.smiles += '=';
      break;
    case BondOrder::kTriple:
      out_.smiles += '#';
      break;
    case BondOrder::kAromatic:
      break;
    }
  }

  void emit_digit(int digit) {
    if (digit < 10) {
      out_.smiles += static_cast<char>('0' + digit);
    } else {
      out_.smiles += '%';
      out_.smiles += std::to_string(digit);
    }
  }

  int allocate_digit() {
    for (std::size_t d = 1; d < digits_in_use_.size(); ++d) {
      if (!digits_in_use_[d]) {
        digits_in_use_[d] = true;
        return static_cast<int>(d);
      }
    }
    digits_in_use_.push_back(true);
    return static_cast<int>(digits_in_use_.size()) - 1;
  }

  void emit(int v, int parent_bond) {
    out_.order.push_back(v);
    emit_atom(v);

    for (const RingBond &rb: closes_[v]) {
      const int digit = ring_digit_.at(rb.bond);
      emit_digit(digit);
      digits_in_use_[digit] = false;
    }
    for (const RingBond &rb: opens_[v]) {
      const int digit = allocate_digit();
      ring_digit_[rb.bond] = digit;
      emit_bond(rb.bond);
      emit_digit(digit);
    }

    const auto &kids = children_[v];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool branch = i + 1 < kids.size();
      if (branch) {
        out_.smiles += '(';
      }
      emit_bond(kids[i].bond);
      emit(kids[i].partner, kids[i].bond);
      if (branch) {
        out_.smiles += ')';
      }
    }
    (void)parent_bond;
  }

  bool has_pi_double(int v) const {
    for (auto [w, bi]: g_.adjacency(v)) {
      const Bond &bond = g_.bonds()[bi];
      if (bond.order == BondOrder::kAromatic
          && bond.kekule == BondOrder::kDouble) {
        return true;
      }
    }
    return false;
  }

  int written_bond_sum(int v) const {
    int sum = 0;
    for (auto [w, bi]: g_.adjacency(v)) {
      const BondOrder order = written_order(g_.bonds()[bi]);
      sum += order == BondOrder::kAromatic ? 1 : static_cast<int>(order);
    }
    return sum;
  }

  bool organic_form(const Atom &atom) const {
    if (!detail::is_organic_subset(atom.element) || atom.isotope
        || atom.formal_charge != 0) {
      return false;
    }
    const bool aromatic = written_aromatic(atom.index);
    bool needs_pi = false;
    const auto h = detail::organic_implicit_h(
        atom.element, aromatic, written_bond_sum(atom.index), needs_pi);
    if (!h || *h != atom.total_h()) {
      return false;
    }
    return !aromatic || needs_pi == has_pi_double(atom.index);
  }

  void emit_atom(int v) {
    const Atom &atom = g_.atoms()[v];
    std::string symbol(atom.symbol());
    if (written_aromatic(v)) {
      for (char &c: symbol) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    if (organic_form(atom)) {
      out_.smiles += symbol;
      return;
    }
    out_.smiles += '[';
    if (atom.isotope) {
      out_.smiles += std::to_string(*atom.isotope);
    }
    out_.smiles += symbol;
    const int h = atom.total_h();
    if (h > 0) {
      out_.smiles += 'H';
      if (h > 1) {
        out_.smiles += std::to_string(h);
      }
    }
    if (atom.formal_charge != 0) {
      out_.smiles += atom.formal_charge > 0 ? '+' : '-';
      const int magnitude = std::abs(atom.formal_charge);
      if (magnitude > 1) {
        out_.smiles += std::to_string(magnitude);
      }
    }
    out_.smiles += ']';
  }

  const MolecularGraph &g_;
  bool kekule_;
  std::vector<int> priority_;
  std::vector<bool> visited_;
  std::vector<bool> bond_used_;
  std::vector<std::vector<RingBond>> children_;
  std::vector<std::vector<RingBond>> opens_;
  std::vector<std::vector<RingBond>> closes_;
  std::vector<int> position_;
  std::vector<bool> digits_in_use_;
  std::map<int, int> ring_digit_;
  WrittenSmiles out_;
};

}  // namespace

WrittenSmiles write_smiles(const MolecularGraph &g,
                           const WriteOptions &options) {
  return SmilesWriter(g, options).run();
}

}  // namespace convmol::smiles
