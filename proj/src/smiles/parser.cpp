//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "internal.hpp"

namespace convmol::smiles {
namespace {

using detail::GraphBuilder;

bool is_digit(char c) {
  return c >= '0' && c <= '9';
}

bool is_lower(char c) {
  return c >= 'a' && c <= 'z';
}

bool is_upper(char c) {
  return c >= 'A' && c <= 'Z';
}

bool is_bond_symbol(char c) {
  switch (c) {
  case '-':
  case '=':
  case '#':
  case ':':
  case '/':
  case '\\':
    return true;
  default:
    return false;
  }
}

// Stereo bond markers carry no order information here.
char strip_stereo(char symbol) {
  return symbol == '/' || symbol == '\\' ? 0 : symbol;
}

struct RingOpen {
  int atom;
  char bond;
  std::size_t position;
};

class SmilesParser {
public:
  explicit SmilesParser(std::string_view input): input_(input) { }

  ParseResult run() {
    if (input_.empty()) {
      return ParseError { ParseErrorKind::kEmptyInput, 0 };
    }
    if (auto err = parse_syntax()) {
      return *err;
    }
    if (auto err = assign_hydrogens_and_kekulize()) {
      return *err;
    }
    GraphBuilder::source(graph_) = std::string(input_);
    return std::move(graph_);
  }

private:
  ParseError fail(ParseErrorKind kind, std::size_t pos) const {
    return { kind, pos };
  }

  BondOrder resolve_bond(char symbol, int a, int b) const {
    switch (strip_stereo(symbol)) {
    case '-':
      return BondOrder::kSingle;
    case '=':
      return BondOrder::kDouble;
    case '#':
      return BondOrder::kTriple;
    default:
      break;
    }
    return lowercase_[a] && lowercase_[b] ? BondOrder::kAromatic
                                          : BondOrder::kSingle;
  }

  int add_atom(const Atom &atom, bool lowercase) {
    lowercase_.push_back(lowercase);
    return GraphBuilder::add_atom(graph_, atom);
  }

  std::optional<ParseError> parse_syntax() {
    int prev = -1;
    char pending = 0;
    std::size_t pending_pos = 0;
    struct Branch {
      int atom;
      std::size_t position;
      int atoms_before;
    };
    std::vector<Branch> branches;
    std::map<int, RingOpen> open_rings;

    std::size_t i = 0;
    const std::size_t n = input_.size();
    while (i < n) {
      const char c = input_[i];

      if (c == '(') {
        if (prev < 0 || pending != 0) {
          return fail(ParseErrorKind::kUnbalancedParen, i);
        }
        branches.push_back({ prev, i, graph_.num_atoms() });
        ++i;
        continue;
      }
      if (c == ')') {
        if (branches.empty()) {
          return fail(ParseErrorKind::kUnbalancedParen, i);
        }
        if (pending != 0) {
          return fail(ParseErrorKind::kUnknownSymbol, pending_pos);
        }
        if (branches.back().atoms_before == graph_.num_atoms()) {
          return fail(ParseErrorKind::kUnbalancedParen, i);
        }
        prev = branches.back().atom;
        branches.pop_back();
        ++i;
        continue;
      }
      if (c == '.') {
        if (prev < 0 || pending != 0 || !branches.empty()) {
          return fail(ParseErrorKind::kUnknownSymbol, i);
        }
        prev = -1;
        ++i;
        continue;
      }
      if (is_bond_symbol(c)) {
        if (prev < 0 || pending != 0) {
          return fail(ParseErrorKind::kUnknownSymbol, i);
        }
        pending = c;
        pending_pos = i;
        ++i;
        continue;
      }
      if (is_digit(c) || c == '%') {
        if (prev < 0) {
          return fail(ParseErrorKind::kUnknownSymbol, i);
        }
        const std::size_t digit_pos = i;
        int number = 0;
        if (c == '%') {
          if (i + 2 >= n + 0 && !(i + 2 < n + 1)) {
            return fail(ParseErrorKind::kUnknownSymbol, i);
          }
          if (i + 2 >= n || !is_digit(input_[i + 1]) || !is_digit(input_[i + 2])) {
            return fail(ParseErrorKind::kUnknownSymbol, i);
          }
          number = (input_[i + 1] - '0') * 10 + (input_[i + 2] - '0');
          i += 3;
        } else {
          number = c - '0';
          ++i;
        }

        auto it = open_rings.find(number);
        if (it == open_rings.end()) {
          open_rings.emplace(number, RingOpen { prev, pending, digit_pos });
        } else {
          const RingOpen opener = it->second;
          open_rings.erase(it);
          const char a_sym = strip_stereo(opener.bond);
          const char b_sym = strip_stereo(pending);
          if (opener.atom == prev || graph_.bond_between(opener.atom, prev) >= 0
              || (a_sym != 0 && b_sym != 0 && a_sym != b_sym)) {
            return fail(ParseErrorKind::kUnclosedRingBond, digit_pos);
          }
          const char symbol = a_sym != 0 ? a_sym : b_sym;
          GraphBuilder::add_bond(graph_, opener.atom, prev,
                                 resolve_bond(symbol, opener.atom, prev));
        }
        pending = 0;
        continue;
      }

      Atom atom;
      atom.position = i;
      bool lowercase = false;
      if (c == '[') {
        if (auto err = parse_bracket(i, atom, lowercase)) {
          return err;
        }
      } else if (auto err = parse_organic(i, atom, lowercase)) {
        return err;
      }

      const int idx = add_atom(atom, lowercase);
      if (prev >= 0) {
        GraphBuilder::add_bond(graph_, prev, idx,
                               resolve_bond(pending, prev, idx));
      }
      pending = 0;
      prev = idx;
    }

    if (pending != 0) {
      return fail(ParseErrorKind::kUnknownSymbol, n);
    }
    if (!branches.empty()) {
      return fail(ParseErrorKind::kUnbalancedParen, n);
    }
    if (!open_rings.empty()) {
      std::size_t first = n;
      for (const auto &[number, ring]: open_rings) {
        first = std::min(first, ring.position);
      }
      return fail(ParseErrorKind::kUnclosedRingBond, first);
    }
    if (prev < 0) {
      // Trailing dot.
      return fail(ParseErrorKind::kUnknownSymbol, n - 1);
    }
    return std::nullopt;
  }

  std::optional<ParseError> parse_organic(std::size_t &i, Atom &atom,
                                          bool &lowercase) {
    const char c = input_[i];
    const char next = i + 1 < input_.size() ? input_[i + 1] : '\0';
    switch (c) {
    case 'B':
      if (next == 'r') {
        atom.element = 35;
        i += 2;
        return std::nullopt;
      }
      atom.element = 5;
      break;
    case 'C':
      if (next == 'l') {
        atom.element = 17;
        i += 2;
        return std::nullopt;
      }
      atom.element = 6;
      break;
    case 'N':
      atom.element = 7;
      break;
    case 'O':
      atom.element = 8;
      break;
    case 'P':
      atom.element = 15;
      break;
    case 'S':
      atom.element = 16;
      break;
    case 'F':
      atom.element = 9;
      break;
    case 'I':
      atom.element = 53;
      break;
    case 'b':
      atom.element = 5;
      lowercase = true;
      break;
    case 'c':
      atom.element = 6;
      lowercase = true;
      break;
    case 'n':
      atom.element = 7;
      lowercase = true;
      break;
    case 'o':
      atom.element = 8;
      lowercase = true;
      break;
    case 'p':
      atom.element = 15;
      lowercase = true;
      break;
    case 's':
      atom.element = 16;
      lowercase = true;
      break;
    default:
      return fail(ParseErrorKind::kUnknownSymbol, i);
    }
    ++i;
    return std::nullopt;
  }

  std::optional<ParseError> parse_bracket(std::size_t &i, Atom &atom,
                                          bool &lowercase) {
    const std::size_t n = input_.size();
    std::size_t j = i + 1;

    if (j < n && is_digit(input_[j])) {
      int isotope = 0;
      while (j < n && is_digit(input_[j])) {
        isotope = isotope * 10 + (input_[j] - '0');
        if (isotope > 9999) {
          return fail(ParseErrorKind::kUnknownSymbol, j);
        }
        ++j;
      }
      if (isotope == 0) {
        return fail(ParseErrorKind::kUnknownSymbol, i + 1);
      }
      atom.isotope = isotope;
    }

    if (j >= n) {
      return fail(ParseErrorKind::kUnknownSymbol, n);
    }
    const std::size_t symbol_pos = j;
    if (is_lower(input_[j])) {
      lowercase = true;
      const std::string_view rest = input_.substr(j);
      if (rest.starts_with("se")) {
        atom.element = 34;
        j += 2;
      } else if (rest.starts_with("as")) {
        atom.element = 33;
        j += 2;
      } else {
        switch (input_[j]) {
        case 'b':
          atom.element = 5;
          break;
        case 'c':
          atom.element = 6;
          break;
        case 'n':
          atom.element = 7;
          break;
        case 'o':
          atom.element = 8;
          break;
        case 'p':
          atom.element = 15;
          break;
        case 's':
          atom.element = 16;
          break;
        default:
          return fail(ParseErrorKind::kUnknownSymbol, j);
        }
        ++j;
      }
    } else if (is_upper(input_[j])) {
      int z = 0;
      if (j + 1 < n && is_lower(input_[j + 1])) {
        z = atomic_number(input_.substr(j, 2));
        if (z != 0) {
          j += 2;
        }
      }
      if (z == 0) {
        z = atomic_number(input_.substr(j, 1));
        if (z == 0) {
          return fail(ParseErrorKind::kUnknownSymbol, j);
        }
        ++j;
      }
      atom.element = z;
    } else {
      return fail(ParseErrorKind::kUnknownSymbol, j);
    }
    (void)symbol_pos;

    // Chirality is parsed and discarded.
    if (j < n && input_[j] == '@') {
      ++j;
      if (j < n && input_[j] == '@') {
        ++j;
      } else {
        for (std::string_view cls: { "TH", "AL", "SP", "TB", "OH" }) {
          if (input_.substr(j).starts_with(cls)) {
            j += 2;
            while (j < n && is_digit(input_[j])) {
              ++j;
            }
            break;
          }
        }
      }
    }

    int hcount = 0;
    if (j < n && input_[j] == 'H') {
      ++j;
      hcount = 1;
      if (j < n && is_digit(input_[j])) {
        hcount = input_[j] - '0';
        ++j;
      }
    }
    atom.explicit_h = hcount;

    if (j < n && (input_[j] == '+' || input_[j] == '-')) {
      const char sign = input_[j];
      const int unit = sign == '+' ? 1 : -1;
      ++j;
      if (j < n && is_digit(input_[j])) {
        int magnitude = 0;
        while (j < n && is_digit(input_[j])) {
          magnitude = magnitude * 10 + (input_[j] - '0');
          if (magnitude > 15) {
            return fail(ParseErrorKind::kUnknownSymbol, j);
          }
          ++j;
        }
        atom.formal_charge = unit * magnitude;
      } else {
        int magnitude = 1;
        while (j < n && input_[j] == sign) {
          ++magnitude;
          ++j;
        }
        atom.formal_charge = unit * magnitude;
      }
    }

    // Atom class is ignored.
    if (j < n && input_[j] == ':') {
      ++j;
      if (j >= n || !is_digit(input_[j])) {
        return fail(ParseErrorKind::kUnknownSymbol, j);
      }
      while (j < n && is_digit(input_[j])) {
        ++j;
      }
    }

    if (j >= n) {
      return fail(ParseErrorKind::kUnknownSymbol, n);
    }
    if (input_[j] != ']') {
      return fail(ParseErrorKind::kUnknownSymbol, j);
    }
    if (lowercase && !detail::can_be_aromatic(atom.element)) {
      return fail(ParseErrorKind::kUnknownSymbol, symbol_pos);
    }
    i = j + 1;
    return std::nullopt;
  }

  std::optional<ParseError> assign_hydrogens_and_kekulize() {
    GraphBuilder::perceive_topology(graph_);

    std::vector<Atom> &atoms = GraphBuilder::atoms(graph_);
    std::vector<bool> needs_pi(atoms.size(), false);
    for (Atom &atom: atoms) {
      const int sum = detail::bond_order_sum(graph_, atom.index, false);
      if (atom.bracket()) {
        needs_pi[atom.index] = lowercase_[atom.index]
                               && detail::bracket_needs_pi(atom, sum);
        continue;
      }
      bool pi = false;
      const auto h = detail::organic_implicit_h(
          atom.element, lowercase_[atom.index], sum, pi);
      if (!h) {
        return fail(ParseErrorKind::kValenceViolation, atom.position);
      }
      atom.implicit_h = *h;
      needs_pi[atom.index] = pi;
    }

    if (auto failed = detail::kekulize(graph_, needs_pi)) {
      return fail(ParseErrorKind::kKekulizationFailure,
                  atoms[*failed].position);
    }

    for (const Atom &atom: atoms) {
      const std::vector<int> permitted =
          detail::permitted_valences(atom.element, atom.formal_charge);
      if (permitted.empty() && !detail::base_valences(atom.element).empty()) {
        return fail(ParseErrorKind::kValenceViolation, atom.position);
      }
      if (permitted.empty()) {
        continue;
      }
      const int total =
          detail::bond_order_sum(graph_, atom.index, true) + atom.total_h();
      bool ok = false;
      for (int v: permitted) {
        ok = ok || v == total;
      }
      if (!ok) {
        return fail(ParseErrorKind::kValenceViolation, atom.position);
      }
    }

    detail::assign_aromaticity(graph_);
    for (const Atom &atom: atoms) {
      if (lowercase_[atom.index] && !atom.aromatic) {
        return fail(ParseErrorKind::kKekulizationFailure, atom.position);
      }
    }
    return std::nullopt;
  }

  std::string_view input_;
  MolecularGraph graph_;
  std::vector<bool> lowercase_;
};

}  // namespace

ParseResult parse(std::string_view smiles) {
  return SmilesParser(smiles).run();
}

MolecularGraph parse_or_throw(std::string_view smiles) {
  return parse(smiles).value();
}

bool is_valid(std::string_view smiles) {
  return parse(smiles).ok();
}

std::optional<std::string> canonical_smiles(std::string_view smiles) {
  ParseResult result = parse(smiles);
  if (!result) {
    return std::nullopt;
  }
  return canonical(*result);
}

}  // namespace convmol::smiles
