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

#ifndef EBMTRAJ_APP_SAMPLES_HPP_
#define EBMTRAJ_APP_SAMPLES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ebmtraj/features/features.hpp"
#include "ebmtraj/features/geometry.hpp"
#include "ebmtraj/features/trajectory.hpp"

namespace ebmtraj {

struct SampleSpec {
  std::size_t history_len = 8;
  std::size_t horizon_steps = 12;
  std::size_t stride = 1;  // frames-in-window steps between consecutive windows
  double dt = 0.4;         // seconds per frame step
};

// One prediction problem: an observed window, the final point and the
// other agents of the scene at the last observed frame.
struct Sample {
  std::string id;  // scene:track:frame
  AgentClass agent_class = AgentClass::kPedestrian;
  TrajectoryRecord observed;
  Vec2 target;  // scene coordinates
  std::vector<NeighborState> neighbors;
};

// Windows need history_len + horizon_steps points with a constant frame step.
std::vector<Sample> extract_samples(std::span<const TrajectoryRecord> records,
                                    const SampleSpec& spec);

// Frame the features will use, without building them.
CanonicalFrame sample_frame(const Sample& sample);

}  // namespace ebmtraj

#endif  // EBMTRAJ_APP_SAMPLES_HPP_
