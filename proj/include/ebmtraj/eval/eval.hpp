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

#ifndef EBMTRAJ_EVAL_EVAL_HPP_
#define EBMTRAJ_EVAL_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebmtraj/features/geometry.hpp"
#include "ebmtraj/features/trajectory.hpp"
#include "ebmtraj/modes/modes.hpp"
#include "json.hpp"

namespace ebmtraj {

struct ClassFde {
  std::size_t samples = 0;
  double min_fde = 0.0;
};

struct EvalReport {
  std::size_t samples = 0;
  std::size_t k = 0;
  double min_fde = 0.0;
  std::map<std::string, ClassFde> per_class;
  double removed_fraction = 0.0;
  std::optional<double> unimodal_fde;
};

// Smallest distance from truth to the first k candidates.
double final_displacement(std::span<const Vec2> candidates, Vec2 truth, std::size_t k);

// Mean over samples of the best-of-k distance. Candidates are ranked lists;
// classes is either empty or aligned with the samples.
EvalReport min_fde(std::span<const std::vector<Vec2>> predictions, std::span<const Vec2> truth,
                   std::size_t k, std::span<const AgentClass> classes = {});

void to_json(nlohmann::json& j, const EvalReport& r);
std::string format_report(const EvalReport& r);

struct OutlierFilter {
  std::vector<std::size_t> kept;
  double removed_fraction = 0.0;
};

// Keeps points inside the closed box.
OutlierFilter filter_outliers(std::span<const Vec2> points, const Rect& bounds);

// Axis-aligned box holding at least the given fraction of the points; each
// axis trims a quarter of the excluded mass from either tail.
Rect coverage_bounds(std::span<const Vec2> points, double coverage = 0.99995);

struct SplitSpec {
  enum class Kind { kFractions, kNamed };

  Kind kind = Kind::kFractions;
  double train = 0.8;
  double val = 0.0;
  double test = 0.2;
  std::uint64_t seed = 42;
  std::string name;                 // kNamed: file <directory>/<name>.json
  std::filesystem::path directory;  // kNamed
};

struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;

  // Training uses train and validation records together.
  std::vector<std::size_t> training() const;
};

DatasetSplit split_dataset(std::span<const TrajectoryRecord> records, const SplitSpec& spec);

}  // namespace ebmtraj

#endif  // EBMTRAJ_EVAL_EVAL_HPP_
