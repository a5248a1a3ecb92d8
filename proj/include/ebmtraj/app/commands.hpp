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

#ifndef EBMTRAJ_APP_COMMANDS_HPP_
#define EBMTRAJ_APP_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "ebmtraj/app/config.hpp"
#include "ebmtraj/app/samples.hpp"
#include "ebmtraj/eval/eval.hpp"
#include "ebmtraj/features/features.hpp"
#include "ebmtraj/predictor/predictor.hpp"

namespace ebmtraj {

struct CommandOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> k;
};

RunConfig resolve_config(const std::filesystem::path& config_path, const CommandOverrides& o);

// Samples of one split part with canonical features and targets.
struct PreparedData {
  std::vector<Sample> samples;
  std::vector<FeatureVector> features;
  std::vector<Vec2> targets;  // canonical frame
  double removed_fraction = 0.0;
};

// Writes the trajectory CSV to paths.data and mode labels to the output dir.
void run_synth(const RunConfig& config, std::ostream& log);

// Trains and saves the predictor; returns it for inspection.
MultiModalPredictor run_train(const RunConfig& config, std::ostream& log);

// Writes predictions.csv (sample_id,rank,x,y,probability) in scene coordinates.
void run_predict(const RunConfig& config, std::size_t k, std::ostream& log);

// Writes eval_report.json and prints the table.
EvalReport run_evaluate(const RunConfig& config, std::size_t k, std::ostream& log);

// Importance, dependence and local explanation exports under <output>/explain.
void run_explain(const RunConfig& config, std::ostream& log);

void run_inspect(const RunConfig& config, std::ostream& out);

}  // namespace ebmtraj

#endif  // EBMTRAJ_APP_COMMANDS_HPP_
