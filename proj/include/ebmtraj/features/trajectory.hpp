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

#ifndef EBMTRAJ_FEATURES_TRAJECTORY_HPP_
#define EBMTRAJ_FEATURES_TRAJECTORY_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "ebmtraj/features/geometry.hpp"

namespace ebmtraj {

enum class AgentClass { kPedestrian, kCar, kBicycle, kBus, kMotorcyclist };

std::string_view to_string(AgentClass c);

// Accepts the lower-case names used in trajectory files.
AgentClass parse_agent_class(std::string_view name);

struct StatusFlags {
  bool lost = false;
  bool occluded = false;
  bool generated = false;

  bool operator==(const StatusFlags&) const = default;
};

struct TrackPoint {
  std::int64_t frame = 0;
  Vec2 position;
  double heading = std::numeric_limits<double>::quiet_NaN();  // NaN when unknown
  double width = 0.0;
  double length = 0.0;
  StatusFlags flags;
};

// One agent's observed track. Frames are strictly increasing with a
// constant step.
struct TrajectoryRecord {
  std::string scene;
  std::int64_t track_id = 0;
  AgentClass agent_class = AgentClass::kPedestrian;
  std::vector<TrackPoint> points;

  std::vector<Vec2> positions() const;
  // Copy holding points [begin, end).
  TrajectoryRecord slice(std::size_t begin, std::size_t end) const;
};

// NaN headings compare equal to each other.
bool same_record(const TrajectoryRecord& a, const TrajectoryRecord& b);

// Throws DataError on non-finite positions or frames that do not strictly
// increase.
void validate_record(const TrajectoryRecord& record);

bool has_constant_step(const TrajectoryRecord& record);

}  // namespace ebmtraj

#endif  // EBMTRAJ_FEATURES_TRAJECTORY_HPP_
