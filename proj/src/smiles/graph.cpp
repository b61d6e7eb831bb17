//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "internal.hpp"

namespace convmol::smiles {

std::string_view bond_order_name(BondOrder order) {
  switch (order) {
  case BondOrder::kSingle:
    return "single";
  case BondOrder::kDouble:
    return "double";
  case BondOrder::kTriple:
    return "triple";
  case BondOrder::kAromatic:
    return "aromatic";
  }
  return "single";
}

std::string_view parse_error_kind_name(ParseErrorKind kind) {
  switch (kind) {
  case ParseErrorKind::kUnbalancedParen:
    return "unbalanced_paren";
  case ParseErrorKind::kUnclosedRingBond:
    return "unclosed_ring_bond";
  case ParseErrorKind::kUnknownSymbol:
    return "unknown_symbol";
  case ParseErrorKind::kValenceViolation:
    return "valence_violation";
  case ParseErrorKind::kKekulizationFailure:
    return "kekulization_failure";
  case ParseErrorKind::kEmptyInput:
    return "empty_input";
  }
  return "unknown_symbol";
}

std::string ParseError::message() const {
  return std::string(parse_error_kind_name(kind)) + " at position "
         + std::to_string(position);
}

const MolecularGraph &ParseResult::value() const & {
  if (!ok()) {
    throw SmilesError(error());
  }
  return std::get<MolecularGraph>(data_);
}

MolecularGraph &&ParseResult::value() && {
  if (!ok()) {
    throw SmilesError(error());
  }
  return std::get<MolecularGraph>(std::move(data_));
}

std::string_view Atom::symbol() const {
  return element_symbol(element);
}

int MolecularGraph::bond_between(int a, int b) const {
  for (auto [nbr, bi]: adjacency_[a]) {
    if (nbr == b) {
      return bi;
    }
  }
  return -1;
}

std::vector<Neighbor> neighbors(const MolecularGraph &g, int atom) {
  if (atom < 0 || atom >= g.num_atoms()) {
    throw std::out_of_range("atom index " + std::to_string(atom)
                            + " out of range");
  }
  std::vector<Neighbor> result;
  result.reserve(g.adjacency(atom).size());
  for (auto [nbr, bi]: g.adjacency(atom)) {
    result.push_back({ nbr, g.bonds()[bi].order });
  }
  std::sort(result.begin(), result.end(),
            [](const Neighbor &x, const Neighbor &y) { return x.atom < y.atom; });
  return result;
}

RingInfo ring_info(const MolecularGraph &g) {
  RingInfo info;
  info.in_ring.resize(g.num_atoms());
  info.smallest_ring_size.assign(g.num_atoms(), 0);
  info.rings = g.rings();
  for (const Atom &atom: g.atoms()) {
    info.in_ring[atom.index] = atom.in_ring;
  }
  for (const auto &ring: g.rings()) {
    const int size = static_cast<int>(ring.size());
    for (int a: ring) {
      int &best = info.smallest_ring_size[a];
      if (best == 0 || size < best) {
        best = size;
      }
    }
  }
  return info;
}

namespace detail {

int GraphBuilder::add_atom(MolecularGraph &g, Atom atom) {
  atom.index = static_cast<int>(g.atoms_.size());
  g.atoms_.push_back(atom);
  g.adjacency_.emplace_back();
  return atom.index;
}

int GraphBuilder::add_bond(MolecularGraph &g, int a, int b, BondOrder order) {
  const int idx = static_cast<int>(g.bonds_.size());
  Bond bond;
  bond.a = a;
  bond.b = b;
  bond.order = order;
  bond.kekule = order;
  g.bonds_.push_back(bond);
  g.adjacency_[a].emplace_back(b, idx);
  g.adjacency_[b].emplace_back(a, idx);
  return idx;
}

}  // namespace detail
}  // namespace convmol::smiles
