//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "convmol/fingerprint.hpp"

#include <bit>
#include <charconv>
#include <stdexcept>
#include <string>

namespace convmol::fp {

std::string_view family_name(Family family) {
  switch (family) {
  case Family::kMorgan:
    return "morgan";
  case Family::kPath:
    return "path";
  case Family::kKeys:
    return "keys";
  }
  return "morgan";
}

Family family_from_name(std::string_view name) {
  if (name == "morgan") {
    return Family::kMorgan;
  }
  if (name == "path") {
    return Family::kPath;
  }
  if (name == "keys") {
    return Family::kKeys;
  }
  throw std::invalid_argument("unknown fingerprint family: "
                              + std::string(name));
}

Fingerprint::Fingerprint(Family family, int width, int param)
    : family_(family), width_(width), param_(param) {
  if (width <= 0) {
    throw std::invalid_argument("fingerprint width must be positive");
  }
  words_.assign((width + 63) / 64, 0);
}

bool Fingerprint::test(int bit) const {
  if (bit < 0 || bit >= width_) {
    throw std::out_of_range("bit " + std::to_string(bit) + " out of range");
  }
  return (words_[bit / 64] >> (bit % 64)) & 1U;
}

void Fingerprint::set(int bit) {
  if (bit < 0 || bit >= width_) {
    throw std::out_of_range("bit " + std::to_string(bit) + " out of range");
  }
  words_[bit / 64] |= std::uint64_t { 1 } << (bit % 64);
}

int Fingerprint::popcount() const {
  int count = 0;
  for (std::uint64_t w: words_) {
    count += std::popcount(w);
  }
  return count;
}

std::vector<int> Fingerprint::on_bits() const {
  std::vector<int> bits;
  for (int i = 0; i < width_; ++i) {
    if (test(i)) {
      bits.push_back(i);
    }
  }
  return bits;
}

std::string Fingerprint::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(family_name(family_));
  out += ':';
  out += std::to_string(width_);
  out += ':';
  const int bytes = (width_ + 7) / 8;
  for (int k = 0; k < bytes; ++k) {
    const unsigned byte = (words_[k / 8] >> (8 * (k % 8))) & 0xffU;
    out += kDigits[byte >> 4];
    out += kDigits[byte & 0xfU];
  }
  return out;
}

Fingerprint Fingerprint::from_hex(std::string_view text, int param) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 =
      c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) {
    throw std::invalid_argument("malformed fingerprint string");
  }
  const Family family = family_from_name(text.substr(0, c1));
  int width = 0;
  const std::string_view width_text = text.substr(c1 + 1, c2 - c1 - 1);
  auto [ptr, ec] = std::from_chars(width_text.data(),
                                   width_text.data() + width_text.size(), width);
  if (ec != std::errc() || ptr != width_text.data() + width_text.size()
      || width <= 0) {
    throw std::invalid_argument("malformed fingerprint width");
  }
  const std::string_view hex = text.substr(c2 + 1);
  if (hex.size() != static_cast<std::size_t>((width + 7) / 8) * 2) {
    throw std::invalid_argument("fingerprint hex length does not match width");
  }
  Fingerprint fp(family, width, param);
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') {
      return c - '0';
    }
    if (c >= 'a' && c <= 'f') {
      return c - 'a' + 10;
    }
    if (c >= 'A' && c <= 'F') {
      return c - 'A' + 10;
    }
    throw std::invalid_argument("invalid hex digit in fingerprint");
  };
  for (std::size_t k = 0; k < hex.size() / 2; ++k) {
    const std::uint64_t byte = nibble(hex[2 * k]) * 16 + nibble(hex[2 * k + 1]);
    fp.words_[k / 8] |= byte << (8 * (k % 8));
  }
  for (int bit = width; bit < static_cast<int>(fp.words_.size()) * 64; ++bit) {
    if ((fp.words_[bit / 64] >> (bit % 64)) & 1U) {
      throw std::invalid_argument("fingerprint has bits beyond its width");
    }
  }
  return fp;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c: bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string describe(const Fingerprint &fp) {
  return std::string(family_name(fp.family())) + "/"
         + std::to_string(fp.width()) + "/" + std::to_string(fp.param());
}

}  // namespace

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.family() != b.family() || a.width() != b.width()
      || a.param() != b.param()) {
    throw std::invalid_argument("tanimoto: incompatible fingerprints "
                                + describe(a) + " and " + describe(b));
  }
  int both = 0, either = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    both += std::popcount(a.words()[i] & b.words()[i]);
    either += std::popcount(a.words()[i] | b.words()[i]);
  }
  if (either == 0) {
    return 1.0;
  }
  return static_cast<double>(both) / static_cast<double>(either);
}

SimilarityTriple similarity(const smiles::MolecularGraph &a,
                            const smiles::MolecularGraph &b) {
  return {
    tanimoto(path_fp(a), path_fp(b)),
    tanimoto(structural_keys(a), structural_keys(b)),
    tanimoto(morgan(a), morgan(b)),
  };
}

}  // namespace convmol::fp
