//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_SMILES_HPP_
#define CONVMOL_SMILES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace convmol::smiles {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

std::string_view bond_order_name(BondOrder order);

struct Atom {
  int element = 0;  // atomic number
  bool aromatic = false;
  int formal_charge = 0;
  std::optional<int> isotope;
  // Set for bracket atoms only; organic-subset atoms carry implicit_h.
  std::optional<int> explicit_h;
  int implicit_h = 0;
  int index = 0;
  bool in_ring = false;
  // Byte offset of the atom token in the source string.
  std::size_t position = 0;

  std::string_view symbol() const;
  int total_h() const { return implicit_h + explicit_h.value_or(0); }
  bool bracket() const { return explicit_h.has_value(); }
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::kSingle;
  // Order in the Kekule assignment; equals `order` unless `order` is
  // aromatic, in which case it is single or double.
  BondOrder kekule = BondOrder::kSingle;
  bool in_ring = false;

  int other(int atom) const { return atom == a ? b : a; }
};

struct Neighbor {
  int atom;
  BondOrder order;

  friend bool operator==(const Neighbor &, const Neighbor &) = default;
};

struct RingInfo {
  std::vector<bool> in_ring;
  // 0 for atoms outside every ring.
  std::vector<int> smallest_ring_size;
  std::vector<std::vector<int>> rings;
};

namespace detail {
struct GraphBuilder;
}

/// Molecular graph produced by parse(). Immutable once built.
///
/// Rings hold the smallest set of smallest rings; each ring lists its atoms
/// in cycle order starting from the lowest atom index.
class MolecularGraph {
public:
  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  const std::vector<std::vector<int>> &rings() const { return rings_; }
  const std::string &source() const { return source_; }

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  int num_components() const { return num_components_; }

  // Component id of each atom; components are numbered in input order.
  const std::vector<int> &component_of() const { return component_; }

  // (neighbor atom, bond index) pairs in bond insertion order.
  const std::vector<std::pair<int, int>> &adjacency(int atom) const {
    return adjacency_[atom];
  }

  int degree(int atom) const {
    return static_cast<int>(adjacency_[atom].size());
  }

  // Returns -1 when the atoms are not bonded.
  int bond_between(int a, int b) const;

private:
  friend struct detail::GraphBuilder;

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<int>> rings_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  std::vector<int> component_;
  int num_components_ = 0;
  std::string source_;
};

enum class ParseErrorKind {
  kUnbalancedParen,
  kUnclosedRingBond,
  kUnknownSymbol,
  kValenceViolation,
  kKekulizationFailure,
  kEmptyInput,
};

std::string_view parse_error_kind_name(ParseErrorKind kind);

struct ParseError {
  ParseErrorKind kind;
  std::size_t position;

  std::string message() const;
  friend bool operator==(const ParseError &, const ParseError &) = default;
};

class SmilesError: public std::runtime_error {
public:
  explicit SmilesError(ParseError error)
      : std::runtime_error(error.message()), error_(error) { }

  const ParseError &error() const { return error_; }

private:
  ParseError error_;
};

class ParseResult {
public:
  ParseResult(MolecularGraph graph): data_(std::move(graph)) { }
  ParseResult(ParseError error): data_(error) { }

  bool ok() const { return data_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const MolecularGraph &value() const &;
  MolecularGraph &&value() &&;
  const ParseError &error() const { return std::get<ParseError>(data_); }

  const MolecularGraph &operator*() const & { return value(); }
  const MolecularGraph *operator->() const { return &value(); }

private:
  std::variant<MolecularGraph, ParseError> data_;
};

/// Parses a SMILES string. Stereo markers are accepted and dropped.
/// Lowercase aromatic input is kekulized and must be perceived aromatic
/// again, otherwise the result is a kekulization failure.
ParseResult parse(std::string_view smiles);

/// Like parse(), but throws SmilesError on failure.
MolecularGraph parse_or_throw(std::string_view smiles);

bool is_valid(std::string_view smiles);

std::string canonical(const MolecularGraph &g);

/// Canonical SMILES of a string, or nullopt when it does not parse.
std::optional<std::string> canonical_smiles(std::string_view smiles);

std::vector<Neighbor> neighbors(const MolecularGraph &g, int atom);

RingInfo ring_info(const MolecularGraph &g);

/// Re-derives aromatic flags from the Kekule bond orders.
MolecularGraph perceive_aromaticity(MolecularGraph g);

struct WriteOptions {
  // Lower priority atoms are visited first; empty means atom index order.
  std::vector<int> priority;
  // Emit uppercase atoms and explicit double bonds.
  bool kekule = false;
};

struct WrittenSmiles {
  std::string smiles;
  // Atom indices in the order they appear in `smiles`.
  std::vector<int> order;
};

/// Writes a (non-canonical) SMILES string that traverses atoms by priority.
WrittenSmiles write_smiles(const MolecularGraph &g,
                           const WriteOptions &options = {});

/// Final canonical ranks (a permutation of 0..n-1) used by canonical().
std::vector<int> canonical_ranks(const MolecularGraph &g);

// Element helpers.
std::string_view element_symbol(int atomic_number);
// 0 when the symbol is unknown.
int atomic_number(std::string_view symbol);

}  // namespace convmol::smiles

#endif  // CONVMOL_SMILES_HPP_
