//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_SRC_FINGERPRINT_ENCODE_HPP_
#define CONVMOL_SRC_FINGERPRINT_ENCODE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace convmol::fp {

// Little-endian byte encoding fed to the hash.
class ByteWriter {
public:
  void put(std::int32_t v) { put_raw(static_cast<std::uint32_t>(v), 4); }
  void put(std::uint64_t v) { put_raw(v, 8); }

  std::string_view bytes() const { return buf_; }

private:
  void put_raw(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) {
      buf_ += static_cast<char>((v >> (8 * i)) & 0xffU);
    }
  }

  std::string buf_;
};

inline void check_width(int width) {
  if (width < 64 || (width & (width - 1)) != 0) {
    throw std::invalid_argument("fingerprint width must be a power of two "
                                ">= 64, got "
                                + std::to_string(width));
  }
}

}  // namespace convmol::fp

#endif  // CONVMOL_SRC_FINGERPRINT_ENCODE_HPP_
