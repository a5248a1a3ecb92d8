// Copyright 2026 The ebmtraj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small helpers shared by the test binaries.

#ifndef EBMTRAJ_TESTS_SUPPORT_TEST_DATA_HPP_
#define EBMTRAJ_TESTS_SUPPORT_TEST_DATA_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ebmtraj/common/log.hpp"
#include "ebmtraj/ebm/binning.hpp"

namespace ebmtraj::testing {

inline FeatureMatrix uniform_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                    double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  FeatureMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ebmtraj_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Captures warnings for the lifetime of the object.
struct WarningCapture {
  std::vector<std::string> messages;
  WarningSink previous;
  WarningCapture() {
    previous = set_warning_sink([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~WarningCapture() { set_warning_sink(previous); }
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;
};

}  // namespace ebmtraj::testing

#endif  // EBMTRAJ_TESTS_SUPPORT_TEST_DATA_HPP_
