//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <array>
#include <cstdlib>
#include <span>
#include <string_view>
#include <vector>

#include "internal.hpp"

namespace convmol::smiles {
namespace {

constexpr std::array<std::string_view, 119> kSymbols = {
  "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
  "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
  "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
  "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
  "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
  "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
  "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
  "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
  "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

constexpr std::array<int, 1> kOne = { 1 };
constexpr std::array<int, 1> kThree = { 3 };
constexpr std::array<int, 1> kFour = { 4 };
constexpr std::array<int, 1> kTwo = { 2 };
constexpr std::array<int, 2> kThreeFive = { 3, 5 };
constexpr std::array<int, 3> kTwoFourSix = { 2, 4, 6 };

enum class ChargeShift { kAdd, kSubtract, kAbsSubtract };

ChargeShift charge_shift(int element) {
  switch (element) {
  case 5:
    return ChargeShift::kSubtract;
  case 1:
  case 6:
  case 14:
    return ChargeShift::kAbsSubtract;
  default:
    return ChargeShift::kAdd;
  }
}

}  // namespace

std::string_view element_symbol(int atomic_number) {
  if (atomic_number < 0
      || atomic_number >= static_cast<int>(kSymbols.size())) {
    return "?";
  }
  return kSymbols[atomic_number];
}

int atomic_number(std::string_view symbol) {
  for (int z = 1; z < static_cast<int>(kSymbols.size()); ++z) {
    if (kSymbols[z] == symbol) {
      return z;
    }
  }
  return 0;
}

namespace detail {

std::span<const int> base_valences(int element) {
  switch (element) {
  case 1:
  case 9:
  case 17:
  case 35:
  case 53:
    return kOne;
  case 5:
    return kThree;
  case 6:
  case 14:
    return kFour;
  case 7:
  case 15:
  case 33:
    return kThreeFive;
  case 8:
    return kTwo;
  case 16:
  case 34:
  case 52:
    return kTwoFourSix;
  default:
    return {};
  }
}

std::vector<int> permitted_valences(int element, int charge) {
  std::vector<int> result;
  const ChargeShift shift = charge_shift(element);
  for (int v: base_valences(element)) {
    int adjusted = v;
    switch (shift) {
    case ChargeShift::kAdd:
      adjusted = v + charge;
      break;
    case ChargeShift::kSubtract:
      adjusted = v - charge;
      break;
    case ChargeShift::kAbsSubtract:
      adjusted = v - std::abs(charge);
      break;
    }
    if (adjusted >= 0) {
      result.push_back(adjusted);
    }
  }
  return result;
}

bool is_organic_subset(int element) {
  switch (element) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 9:
  case 15:
  case 16:
  case 17:
  case 35:
  case 53:
    return true;
  default:
    return false;
  }
}

bool can_be_aromatic(int element) {
  switch (element) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 15:
  case 16:
  case 33:
  case 34:
    return true;
  default:
    return false;
  }
}

std::optional<int> organic_implicit_h(int element, bool aromatic,
                                      int bond_sum, bool &needs_pi) {
  needs_pi = false;
  const std::span<const int> valences = base_valences(element);
  if (valences.empty()) {
    return std::nullopt;
  }
  if (aromatic && valences.front() >= bond_sum + 1) {
    needs_pi = true;
    return valences.front() - bond_sum - 1;
  }
  for (int v: valences) {
    if (v >= bond_sum) {
      return v - bond_sum;
    }
  }
  return std::nullopt;
}

bool bracket_needs_pi(const Atom &atom, int bond_sum) {
  const std::vector<int> valences =
      permitted_valences(atom.element, atom.formal_charge);
  if (valences.empty()) {
    return false;
  }
  return valences.front() >= bond_sum + atom.total_h() + 1;
}

int bond_code(BondOrder order) {
  return static_cast<int>(order);
}

int bond_order_sum(const MolecularGraph &g, int atom, bool use_kekule) {
  int sum = 0;
  for (auto [nbr, bi]: g.adjacency(atom)) {
    const Bond &bond = g.bonds()[bi];
    const BondOrder order = use_kekule ? bond.kekule : bond.order;
    sum += order == BondOrder::kAromatic ? 1 : static_cast<int>(order);
  }
  return sum;
}

}  // namespace detail
}  // namespace convmol::smiles
