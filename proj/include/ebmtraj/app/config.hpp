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

#ifndef EBMTRAJ_APP_CONFIG_HPP_
#define EBMTRAJ_APP_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "ebmtraj/app/synthetic.hpp"
#include "ebmtraj/ebm/hyperparams.hpp"
#include "ebmtraj/eval/eval.hpp"
#include "ebmtraj/features/features.hpp"
#include "ebmtraj/modes/modes.hpp"
#include "ebmtraj/predictor/predictor.hpp"
#include "json.hpp"

namespace ebmtraj {

struct RunPaths {
  std::filesystem::path data;    // trajectory CSV file or directory
  std::filesystem::path grid;    // optional drivable-area PGM
  std::filesystem::path model;   // predictor JSON, default <output>/predictor.json
  std::filesystem::path output;  // reports, predictions, exports
};

struct RunConfig {
  FeatureConfig features;
  // POC default taken from the x midpoint of the trained mode layout.
  bool auto_poc_default = true;
  std::size_t horizon_steps = 12;
  std::size_t window_stride = 1;
  ModePreset modes;
  EbmHyperparams ebm;
  ScoringWeights weights;
  std::size_t top_k = 0;  // 0: preset value
  std::size_t min_mode_members = 20;
  std::optional<Rect> outlier_bounds;  // empty with auto_outliers off: no filtering
  bool auto_outliers = true;
  double outlier_coverage = 0.99995;
  SplitSpec split;
  RunPaths paths;
  std::uint64_t seed = 42;
  std::optional<SyntheticSpec> synthetic;

  std::size_t effective_top_k() const { return top_k == 0 ? modes.top_k : top_k; }
  std::filesystem::path model_path() const {
    return paths.model.empty() ? paths.output / "predictor.json" : paths.model;
  }
};

// Relative paths are resolved against base_dir. Unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Re-applies the seed to every consumer (ebm, split, synthetic data).
void set_seed(RunConfig& config, std::uint64_t seed);

}  // namespace ebmtraj

#endif  // EBMTRAJ_APP_CONFIG_HPP_
