//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_SRC_SMILES_INTERNAL_HPP_
#define CONVMOL_SRC_SMILES_INTERNAL_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "convmol/smiles.hpp"

namespace convmol::smiles::detail {

struct GraphBuilder {
  static std::vector<Atom> &atoms(MolecularGraph &g) { return g.atoms_; }
  static std::vector<Bond> &bonds(MolecularGraph &g) { return g.bonds_; }
  static std::vector<std::vector<int>> &rings(MolecularGraph &g) {
    return g.rings_;
  }
  static std::string &source(MolecularGraph &g) { return g.source_; }

  static int add_atom(MolecularGraph &g, Atom atom);
  // Caller guarantees a != b and that the pair is not bonded yet.
  static int add_bond(MolecularGraph &g, int a, int b, BondOrder order);

  // Fills components, ring flags and the SSSR.
  static void perceive_topology(MolecularGraph &g);
};

// Base valences for elements covered by the valence gate; empty otherwise.
std::span<const int> base_valences(int element);

// Base valences shifted by formal charge. Empty for unchecked elements.
std::vector<int> permitted_valences(int element, int charge);

bool is_organic_subset(int element);
bool can_be_aromatic(int element);

// Sum of bond orders around an atom, counting aromatic bonds as one.
int bond_order_sum(const MolecularGraph &g, int atom, bool use_kekule);

// Implicit hydrogens for an organic-subset atom written with the given
// bond order sum. `needs_pi` is set for aromatic atoms that take part in
// the pi system. Returns nullopt when the valence is exceeded.
std::optional<int> organic_implicit_h(int element, bool aromatic,
                                      int bond_sum, bool &needs_pi);

// Pi participation of an aromatic bracket atom.
bool bracket_needs_pi(const Atom &atom, int bond_sum);

int bond_code(BondOrder order);

// Smallest set of smallest rings over the ring bonds of `g`, in selection
// order. Each ring is normalized to start at its lowest atom index.
std::vector<std::vector<int>> find_sssr(const MolecularGraph &g,
                                        const std::vector<bool> &ring_bond);

// Assigns Kekule orders to the aromatic ring bonds among pi atoms. Returns
// the index of an atom that could not be matched on failure.
std::optional<int> kekulize(MolecularGraph &g,
                            const std::vector<bool> &needs_pi);

// Marks atoms and bonds aromatic from the Kekule structure.
void assign_aromaticity(MolecularGraph &g);

}  // namespace convmol::smiles::detail

#endif  // CONVMOL_SRC_SMILES_INTERNAL_HPP_
