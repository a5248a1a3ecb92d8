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

#include "ebmtraj/features/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {
namespace {

constexpr std::array<std::pair<AgentClass, std::string_view>, 5> kClassNames{{
    {AgentClass::kPedestrian, "pedestrian"},
    {AgentClass::kCar, "car"},
    {AgentClass::kBicycle, "bicycle"},
    {AgentClass::kBus, "bus"},
    {AgentClass::kMotorcyclist, "motorcyclist"},
}};

bool same_number(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

std::string_view to_string(AgentClass c) {
  for (const auto& [cls, name] : kClassNames) {
    if (cls == c) return name;
  }
  return "unknown";
}

AgentClass parse_agent_class(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  for (const auto& [cls, n] : kClassNames) {
    if (n == lower) return cls;
  }
  throw DataError("unknown agent class '" + std::string(name) + "'");
}

std::vector<Vec2> TrajectoryRecord::positions() const {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const TrackPoint& p : points) out.push_back(p.position);
  return out;
}

TrajectoryRecord TrajectoryRecord::slice(std::size_t begin, std::size_t end) const {
  TrajectoryRecord out{scene, track_id, agent_class, {}};
  end = std::min(end, points.size());
  if (begin < end) out.points.assign(points.begin() + begin, points.begin() + end);
  return out;
}

bool same_record(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  if (a.scene != b.scene || a.track_id != b.track_id || a.agent_class != b.agent_class ||
      a.points.size() != b.points.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const TrackPoint& p = a.points[i];
    const TrackPoint& q = b.points[i];
    if (p.frame != q.frame || p.position != q.position || !same_number(p.heading, q.heading) ||
        p.width != q.width || p.length != q.length || !(p.flags == q.flags)) {
      return false;
    }
  }
  return true;
}

void validate_record(const TrajectoryRecord& record) {
  const std::string who = "track " + std::to_string(record.track_id);
  for (std::size_t i = 0; i < record.points.size(); ++i) {
    const TrackPoint& p = record.points[i];
    if (!std::isfinite(p.position.x) || !std::isfinite(p.position.y)) {
      throw DataError(who + ": non-finite position at frame " + std::to_string(p.frame));
    }
    if (i >= 1 && p.frame <= record.points[i - 1].frame) {
      throw DataError(who + ": frames are not strictly increasing at frame " +
                      std::to_string(p.frame));
    }
  }
}

bool has_constant_step(const TrajectoryRecord& record) {
  for (std::size_t i = 2; i < record.points.size(); ++i) {
    if (record.points[i].frame - record.points[i - 1].frame !=
        record.points[1].frame - record.points[0].frame) {
      return false;
    }
  }
  return true;
}

}  // namespace ebmtraj
