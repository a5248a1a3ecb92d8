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

#include "ebmtraj/features/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {
namespace {

constexpr double kParallelTolerance = 1e-12;
constexpr double kOnLineTolerance = 1e-9;

std::string step_name(const char* axis, std::size_t steps_back) {
  return std::string("pos_") + axis + "_m" + std::to_string(steps_back);
}

}  // namespace

std::string_view to_string(SchemaId id) {
  switch (id) {
    case SchemaId::kSdd: return "sdd";
    case SchemaId::kInd: return "ind";
    case SchemaId::kArgo: return "argo";
  }
  return "unknown";
}

SchemaId parse_schema_id(std::string_view name) {
  if (name == "sdd") return SchemaId::kSdd;
  if (name == "ind") return SchemaId::kInd;
  if (name == "argo") return SchemaId::kArgo;
  throw ConfigError("unknown feature schema '" + std::string(name) + "' (expected sdd, ind or argo)");
}

std::vector<std::string> feature_names(const FeatureConfig& config, std::size_t mode_count) {
  const std::size_t h = config.history_len;
  std::vector<std::string> names;
  // SDD and Argoverse drop the last point (always the origin); InD keeps all.
  const std::size_t newest = config.schema == SchemaId::kInd ? 0 : 1;
  for (std::size_t back = h - 1; back + 1 > newest; --back) {
    names.push_back(step_name("x", back));
    names.push_back(step_name("y", back));
    if (back == 0) break;
  }
  switch (config.schema) {
    case SchemaId::kSdd:
      names.insert(names.end(), {"lost_sum", "occluded_sum", "generated_sum", "width", "height"});
      break;
    case SchemaId::kInd:
      names.insert(names.end(), {"vel_x", "vel_y", "speed", "acc_x", "acc_y", "acc",
                                 "heading_delta", "width", "height"});
      break;
    case SchemaId::kArgo:
      names.insert(names.end(), {"speed", "poc_forward", "poc_left", "poc_backward", "poc_right"});
      for (std::size_t m = 0; m < mode_count; ++m) {
        names.push_back("road_cx_" + std::to_string(m));
        names.push_back("road_cy_" + std::to_string(m));
      }
      break;
  }
  return names;
}

double FeatureVector::value(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw SchemaError("feature vector has no feature named '" + std::string(name) + "'");
}

FeatureVector build_features(const TrajectoryRecord& observed, const FeatureConfig& config,
                             const SceneContext& context) {
  const std::size_t h = config.history_len;
  const std::size_t min_history = config.schema == SchemaId::kInd ? 3 : 2;
  if (h < min_history) {
    throw ConfigError("schema " + std::string(to_string(config.schema)) + " needs history_len >= " +
                      std::to_string(min_history));
  }
  if (observed.points.size() < h) {
    throw DataError("insufficient history for track " + std::to_string(observed.track_id) +
                    ": schema " + std::string(to_string(config.schema)) + " needs " +
                    std::to_string(h) + " points, got " + std::to_string(observed.points.size()) +
                    " (short by " + std::to_string(h - observed.points.size()) + ")");
  }
  if (config.schema == SchemaId::kArgo && context.partition == nullptr) {
    throw ConfigError("the argo schema needs a mode partition for its road features");
  }

  const std::span<const TrackPoint> window(observed.points.data() + observed.points.size() - h, h);
  std::vector<Vec2> positions;
  for (const TrackPoint& p : window) positions.push_back(p.position);
  const Canonicalized canon = canonicalize(positions, window.back().heading);
  const std::vector<Vec2>& c = canon.points;

  FeatureVector fv;
  fv.frame = canon.frame;
  fv.names = feature_names(config, context.partition ? context.partition->size() : 0);
  std::vector<double>& v = fv.values;
  const std::size_t newest = config.schema == SchemaId::kInd ? 0 : 1;
  for (std::size_t i = 0; i + newest < h; ++i) {
    v.push_back(c[i].x);
    v.push_back(c[i].y);
  }
  const double dt = config.dt;
  const Vec2 vel = (c[h - 1] - c[h - 2]) / dt;
  const TrackPoint& last = window.back();

  switch (config.schema) {
    case SchemaId::kSdd: {
      double lost = 0, occluded = 0, generated = 0;
      for (const TrackPoint& p : window) {
        lost += p.flags.lost ? 1 : 0;
        occluded += p.flags.occluded ? 1 : 0;
        generated += p.flags.generated ? 1 : 0;
      }
      v.insert(v.end(), {lost, occluded, generated, last.width, last.length});
      break;
    }
    case SchemaId::kInd: {
      const Vec2 prev_vel = (c[h - 2] - c[h - 3]) / dt;
      const Vec2 acc = (vel - prev_vel) / dt;
      const double tangential = (vel.norm() - prev_vel.norm()) / dt;
      double first_heading = 0.0;
      if (std::isfinite(window.front().heading)) {
        first_heading = canon.frame.heading_to_canonical(window.front().heading);
      } else {
        const Vec2 d = c[1] - c[0];
        if (d.x != 0.0 || d.y != 0.0) first_heading = std::atan2(d.y, d.x);
      }
      v.insert(v.end(), {vel.x, vel.y, vel.norm(), acc.x, acc.y, tangential, first_heading,
                         last.width, last.length});
      break;
    }
    case SchemaId::kArgo: {
      std::vector<NeighborState> local;
      for (const NeighborState& n : context.neighbors) {
        local.push_back({canon.frame.to_canonical(n.position),
                         canon.frame.vector_to_canonical(n.velocity)});
      }
      const auto poc = poc_features({{}, 0.0, vel.norm()}, local, config.poc_default);
      v.push_back(vel.norm());
      v.insert(v.end(), poc.begin(), poc.end());
      if (context.grid != nullptr) {
        for (Vec2 center : road_mode_centers(context.grid->reframed(canon.frame), *context.partition)) {
          v.push_back(center.x);
          v.push_back(center.y);
        }
      } else {
        v.insert(v.end(), 2 * context.partition->size(), 0.0);
      }
      break;
    }
  }
  return fv;
}

std::optional<Vec2> collision_point(Vec2 dir, double speed, const NeighborState& neighbor) {
  const Vec2 q = neighbor.position;
  const Vec2 v = neighbor.velocity;
  const double vn = v.norm();
  // Distances within this slack of zero count as zero, so a crossing exactly
  // at either agent's current position survives rounding.
  const double slack = kOnLineTolerance * std::max(1.0, q.norm());
  const double cross_dv = dir.cross(v);
  if (vn > 0.0 && std::abs(cross_dv) > kParallelTolerance * vn) {
    // Solve lambda * dir - t * v = q for the crossing of the two paths.
    const double det = -cross_dv;
    const double lambda = q.cross(-v) / det;
    const double t = dir.cross(q) / det;
    if (lambda >= -slack && t * vn >= -slack) return dir * std::max(lambda, 0.0);
    return std::nullopt;
  }
  // Parallel or stationary: only a neighbour on the ego line can be met.
  if (std::abs(dir.cross(q)) > slack) return std::nullopt;
  const double along = q.dot(dir);
  if (std::abs(along) <= slack) return Vec2{};
  const double closing = speed - v.dot(dir);
  if (closing == 0.0) return std::nullopt;
  const double t = along / closing;
  if (t < 0.0) return std::nullopt;
  return dir * (speed * t);
}

std::array<double, 4> poc_features(const EgoState& ego, std::span<const NeighborState> neighbors,
                                   double default_value) {
  static constexpr std::array<Vec2, 4> kDirections{{{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}}};
  std::array<Vec2, 4> sums{};
  std::array<std::size_t, 4> counts{};
  for (const NeighborState& n : neighbors) {
    const NeighborState local{rotate(n.position - ego.position, -ego.heading),
                              rotate(n.velocity, -ego.heading)};
    for (std::size_t d = 0; d < 4; ++d) {
      if (auto p = collision_point(kDirections[d], ego.speed, local)) {
        sums[d] = sums[d] + *p;
        ++counts[d];
      }
    }
  }
  std::array<double, 4> out{};
  for (std::size_t d = 0; d < 4; ++d) {
    if (counts[d] == 0) {
      out[d] = default_value;
      continue;
    }
    const Vec2 mean = sums[d] / static_cast<double>(counts[d]);
    out[d] = (d == kPocForward || d == kPocBackward) ? mean.x : mean.y;
  }
  return out;
}

std::vector<Vec2> road_mode_centers(const DrivableGrid& grid, const ModePartition& partition) {
  if (partition.kind != PartitionKind::kGrid) {
    throw ConfigError("road mode centres need a grid partition with rectangular modes");
  }
  Rect bounds{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Mode& m : partition.modes) {
    if (m.extents.empty()) throw ConfigError("mode " + std::to_string(m.id) + " has no rectangle");
    for (const Rect& r : m.extents) {
      bounds.x0 = std::min(bounds.x0, r.x0);
      bounds.x1 = std::max(bounds.x1, r.x1);
      bounds.y0 = std::min(bounds.y0, r.y0);
      bounds.y1 = std::max(bounds.y1, r.y1);
    }
  }

  // Cells whose centre can fall inside the bounds, found via the corners in
  // grid-local coordinates.
  double lx0 = std::numeric_limits<double>::infinity(), lx1 = -lx0, ly0 = lx0, ly1 = -lx0;
  for (Vec2 corner : {Vec2{bounds.x0, bounds.y0}, Vec2{bounds.x1, bounds.y0},
                      Vec2{bounds.x0, bounds.y1}, Vec2{bounds.x1, bounds.y1}}) {
    const Vec2 l = grid.to_local(corner);
    lx0 = std::min(lx0, l.x);
    lx1 = std::max(lx1, l.x);
    ly0 = std::min(ly0, l.y);
    ly1 = std::max(ly1, l.y);
  }
  const double cs = grid.cell_size();
  auto clamp_index = [](double v, std::size_t n) {
    if (v <= 0.0) return std::size_t{0};
    if (v >= static_cast<double>(n)) return n;
    return static_cast<std::size_t>(v);
  };
  const std::size_t c0 = clamp_index(std::floor(lx0 / cs) - 1.0, grid.cols());
  const std::size_t c1 = clamp_index(std::ceil(lx1 / cs) + 1.0, grid.cols());
  const std::size_t r0 = clamp_index(std::floor(ly0 / cs) - 1.0, grid.rows());
  const std::size_t r1 = clamp_index(std::ceil(ly1 / cs) + 1.0, grid.rows());

  std::vector<Vec2> sums(partition.size());
  std::vector<std::size_t> counts(partition.size(), 0);
  for (std::size_t r = r0; r < r1; ++r) {
    for (std::size_t c = c0; c < c1; ++c) {
      if (!grid.drivable(r, c)) continue;
      const Vec2 p = grid.cell_center(r, c);
      if (!bounds.contains(p)) continue;
      bool placed = false;
      for (std::size_t m = 0; m < partition.size() && !placed; ++m) {
        for (const Rect& rect : partition.modes[m].extents) {
          if (rect.contains_half_open(p)) {
            sums[m] = sums[m] + p;
            ++counts[m];
            placed = true;
            break;
          }
        }
      }
    }
  }
  std::vector<Vec2> centers(partition.size());
  for (std::size_t m = 0; m < partition.size(); ++m) {
    if (counts[m] > 0) centers[m] = sums[m] / static_cast<double>(counts[m]);
  }
  return centers;
}

}  // namespace ebmtraj
