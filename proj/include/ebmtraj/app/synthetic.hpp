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

#ifndef EBMTRAJ_APP_SYNTHETIC_HPP_
#define EBMTRAJ_APP_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ebmtraj/features/geometry.hpp"
#include "ebmtraj/features/trajectory.hpp"
#include "json.hpp"

namespace ebmtraj {

// Agents approach their last observed point along +x (canonical frame), then
// turn once and travel straight to a destination drawn from a weighted set of
// modes plus Gaussian endpoint noise. Each agent is placed in its scene by a
// random rigid transform.
struct SyntheticSpec {
  std::vector<Vec2> destinations;  // canonical frame
  std::vector<double> weights;     // must sum to 1
  double noise_sigma = 0.5;
  std::size_t agents = 1000;
  std::uint64_t seed = 42;
  std::size_t history_len = 8;
  std::size_t horizon_steps = 12;
  // History speed in units per second; 0 ties it to the distance travelled
  // in the future part so speed hints at the destination.
  double speed = 0.0;
  // Lateral bend of the history toward the destination side, and the noise on
  // that bend. A zero hint makes the history carry no direction information.
  double turn_hint = 0.0;
  double hint_noise = 0.0;
  double dt = 0.4;
  std::size_t agents_per_scene = 50;
  double scene_extent = 100.0;
  AgentClass agent_class = AgentClass::kPedestrian;
  double width = 0.5;
  double length = 0.5;

  void validate() const;
};

void to_json(nlohmann::json& j, const SyntheticSpec& s);
void from_json(const nlohmann::json& j, SyntheticSpec& s);

struct SyntheticDataset {
  std::vector<TrajectoryRecord> records;
  std::vector<std::size_t> labels;  // destination mode per record
  std::vector<Vec2> endpoints;      // canonical final point per record
};

SyntheticDataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace ebmtraj

#endif  // EBMTRAJ_APP_SYNTHETIC_HPP_
