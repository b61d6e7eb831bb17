//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_FINGERPRINT_HPP_
#define CONVMOL_FINGERPRINT_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "convmol/smiles.hpp"

namespace convmol::fp {

enum class Family : std::uint8_t {
  kMorgan,
  kPath,
  kKeys,
};

std::string_view family_name(Family family);
// Throws std::invalid_argument for unknown names.
Family family_from_name(std::string_view name);

inline constexpr int kDefaultWidth = 2048;
inline constexpr int kDefaultRadius = 2;
inline constexpr int kDefaultMaxPath = 7;
inline constexpr int kNumKeys = 48;
inline constexpr int kKeysVersion = 1;

class Fingerprint {
public:
  Fingerprint(Family family, int width, int param);

  Family family() const { return family_; }
  int width() const { return width_; }
  // Radius for morgan, max path length for path, key-set version for keys.
  int param() const { return param_; }

  bool test(int bit) const;
  void set(int bit);
  int popcount() const;
  std::vector<int> on_bits() const;
  const std::vector<std::uint64_t> &words() const { return words_; }

  // "<family>:<width>:<hex>"; byte k holds bits 8k..8k+7, low bit first.
  std::string to_hex() const;
  static Fingerprint from_hex(std::string_view text, int param);

  friend bool operator==(const Fingerprint &,
                         const Fingerprint &) = default;

private:
  Family family_;
  int width_;
  int param_;
  std::vector<std::uint64_t> words_;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes,
                    std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Circular (ECFP-style) fingerprint. Throws std::invalid_argument when
/// radius < 0 or width is not a power of two >= 64.
Fingerprint morgan(const smiles::MolecularGraph &g,
                   int radius = kDefaultRadius, int width = kDefaultWidth);

/// Environment identifiers before folding: result[r][atom].
std::vector<std::vector<std::uint64_t>>
morgan_environments(const smiles::MolecularGraph &g, int radius);

/// Linear path fingerprint over simple paths of 1..max_len bonds.
Fingerprint path_fp(const smiles::MolecularGraph &g,
                    int max_len = kDefaultMaxPath, int width = kDefaultWidth);

/// Direction-normalized labels of all simple paths, deduplicated, sorted.
std::vector<std::string> path_labels(const smiles::MolecularGraph &g,
                                     int max_len);

/// 48 structural predicate keys; see key_names() for the bit meanings.
Fingerprint structural_keys(const smiles::MolecularGraph &g);
const std::vector<std::string_view> &key_names();

/// |a & b| / |a | b|, 1.0 when both are empty. Throws std::invalid_argument
/// unless family, width and params agree.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

struct SimilarityTriple {
  double rdk;
  double maccs;
  double morgan;
};

// Path, keys and morgan similarities with default parameters.
SimilarityTriple similarity(const smiles::MolecularGraph &a,
                            const smiles::MolecularGraph &b);

}  // namespace convmol::fp

#endif  // CONVMOL_FINGERPRINT_HPP_
