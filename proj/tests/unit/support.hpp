//
// convmol - Copyright 2026 The convmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CONVMOL_TESTS_UNIT_SUPPORT_HPP_
#define CONVMOL_TESTS_UNIT_SUPPORT_HPP_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace convmol::test {

inline std::filesystem::path source_dir() {
  return CONVMOL_SOURCE_DIR;
}

inline std::filesystem::path fixture(const std::string &rel) {
  return std::filesystem::path(CONVMOL_FIXTURE_DIR) / rel;
}

inline std::vector<std::string> corpus() {
  std::ifstream in(source_dir() / "data" / "molecules.smi");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      out.push_back(line.substr(0, line.find_first_of(" \t")));
    }
  }
  return out;
}

inline std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("convmol_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace convmol::test

#endif  // CONVMOL_TESTS_UNIT_SUPPORT_HPP_
