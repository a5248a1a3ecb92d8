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

#ifndef EBMTRAJ_FEATURES_FEATURES_HPP_
#define EBMTRAJ_FEATURES_FEATURES_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ebmtraj/features/drivable_grid.hpp"
#include "ebmtraj/features/geometry.hpp"
#include "ebmtraj/features/trajectory.hpp"
#include "ebmtraj/modes/modes.hpp"

namespace ebmtraj {

enum class SchemaId { kSdd, kInd, kArgo };

std::string_view to_string(SchemaId id);
SchemaId parse_schema_id(std::string_view name);

struct FeatureConfig {
  SchemaId schema = SchemaId::kSdd;
  std::size_t history_len = 8;
  double dt = 0.4;           // seconds between observed points
  double poc_default = 0.0;  // value for directions without a collision point
};

// Feature names in output order. `mode_count` only matters for the argo
// schema, which appends one drivable-area centre per mode.
std::vector<std::string> feature_names(const FeatureConfig& config, std::size_t mode_count = 0);

// A nearby agent at the ego's last observed frame.
struct NeighborState {
  Vec2 position;
  Vec2 velocity;
};

// Scene-frame context for one sample. The grid and partition are only read
// by the argo schema.
struct SceneContext {
  std::vector<NeighborState> neighbors;
  const DrivableGrid* grid = nullptr;
  const ModePartition* partition = nullptr;
};

struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;
  CanonicalFrame frame;

  double value(std::string_view name) const;
};

// Features of the last `history_len` points of `observed`, in its canonical
// frame.
FeatureVector build_features(const TrajectoryRecord& observed, const FeatureConfig& config,
                             const SceneContext& context = {});

struct EgoState {
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
};

enum PocDirection : std::size_t { kPocForward = 0, kPocLeft = 1, kPocBackward = 2, kPocRight = 3 };

// Where a neighbour's constant-velocity path meets an ego ray along the unit
// direction `dir` at `speed`, both starting at t = 0 from the origin of the
// ego frame. Crossing paths meet where both rays pass; paths on a common
// line meet where the agents coincide in time. Nullopt when they never do.
std::optional<Vec2> collision_point(Vec2 dir, double speed, const NeighborState& neighbor);

// Mean collision point for the ego moving forward, left, backward and right.
// Forward/backward report the point's coordinate along the heading axis,
// left/right its coordinate along the lateral axis (the other coordinate is
// zero on those rays). Directions without any point report `default_value`.
std::array<double, 4> poc_features(const EgoState& ego, std::span<const NeighborState> neighbors,
                                   double default_value);

// Centroid of the drivable cells under each mode's rectangles, in the
// grid's frame; (0, 0) for modes with no drivable cell underneath.
std::vector<Vec2> road_mode_centers(const DrivableGrid& grid, const ModePartition& partition);

}  // namespace ebmtraj

#endif  // EBMTRAJ_FEATURES_FEATURES_HPP_
