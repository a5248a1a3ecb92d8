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

#ifndef EBMTRAJ_MODES_MODES_HPP_
#define EBMTRAJ_MODES_MODES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebmtraj/features/geometry.hpp"
#include "json.hpp"

namespace ebmtraj {

struct Rect {
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;

  bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  bool contains_half_open(Vec2 p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
  Vec2 center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }
  double area() const { return (x1 - x0) * (y1 - y0); }
  bool operator==(const Rect&) const = default;
};

enum class PartitionKind { kKMeans, kGrid };

struct Mode {
  std::size_t id = 0;
  Vec2 centroid;
  Vec2 sigma;  // per-axis standard deviation of the members
  std::size_t members = 0;
  std::vector<Rect> extents;  // grid partitions only; several after merging
};

struct ModePartition {
  PartitionKind kind = PartitionKind::kKMeans;
  std::vector<Mode> modes;
  Rect extent;  // grid partitions: the tiled bounding box
  std::uint64_t seed = 0;

  std::size_t size() const { return modes.size(); }
};

// Lloyd iterations from a seeded k-means++ start, until the assignment stops
// changing or `max_iterations` passes. `objective_trace`, when given,
// receives the within-cluster sum of squares after every assignment step.
ModePartition kmeans_partition(std::span<const Vec2> targets, std::size_t k, std::uint64_t seed,
                               std::vector<double>* objective_trace = nullptr,
                               std::size_t max_iterations = 300);

// Uniform columns along x, then per-column cuts along y.
struct GridLayout {
  enum class Units { kFraction, kAbsolute };

  std::size_t x_slices = 1;
  // One cut list shared by every column, or one list per column. Fractions
  // are of the extent height measured from its bottom edge.
  std::vector<std::vector<double>> y_cuts;
  Units units = Units::kFraction;

  std::size_t mode_count() const;
};

ModePartition grid_partition(std::span<const Vec2> targets, const GridLayout& layout);

// Nearest centroid (k-means) or containing rectangle (grid); ties go to the
// lower id, grid points outside the extent are clamped onto it.
std::size_t assign_mode(const ModePartition& partition, Vec2 target);

std::vector<std::size_t> assign_all(const ModePartition& partition, std::span<const Vec2> targets);

// Recomputes centroid, spread and member count of every mode from the
// targets assigned to it. Empty k-means modes keep their centroid; empty
// grid modes sit at their rectangle centre.
void refresh_mode_stats(ModePartition& partition, std::span<const Vec2> targets);

// Folds modes with fewer than `min_members` members into the mode with the
// nearest centroid until every mode is large enough (or one is left). Ids
// are renumbered densely; a warning is logged per merge.
ModePartition merge_small_modes(ModePartition partition, std::span<const Vec2> targets,
                                std::size_t min_members);

// Named presets for the published mode counts.
struct ModePreset {
  std::string name;
  PartitionKind kind = PartitionKind::kKMeans;
  std::size_t k = 1;
  GridLayout layout;
  std::size_t top_k = 1;
};

// "sdd" (36 k-means modes, top 20), "ind" (50 k-means modes, top 20) and
// "argo" (24 grid modes, top 6).
ModePreset mode_preset(const std::string& name);

ModePartition build_partition(const ModePreset& preset, std::span<const Vec2> targets,
                              std::uint64_t seed);

void to_json(nlohmann::json& j, const ModePartition& p);
void from_json(const nlohmann::json& j, ModePartition& p);

}  // namespace ebmtraj

#endif  // EBMTRAJ_MODES_MODES_HPP_
