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

#ifndef EBMTRAJ_COMMON_ERROR_HPP_
#define EBMTRAJ_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ebmtraj {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data cannot be used (empty, non-finite, malformed rows).
class DataError : public Error {
 public:
  using Error::Error;
};

// Widths, columns or binning layouts do not line up.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ebmtraj

#endif  // EBMTRAJ_COMMON_ERROR_HPP_
