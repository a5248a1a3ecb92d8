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

#include "ebmtraj/modes/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ebmtraj/common/error.hpp"
#include "ebmtraj/common/log.hpp"

namespace ebmtraj {
namespace {

double squared(Vec2 v) { return v.dot(v); }

std::size_t nearest(std::span<const Vec2> centroids, Vec2 p) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared(p - centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// Runs Lloyd iterations in place; returns the final assignment.
std::vector<std::size_t> lloyd(std::span<const Vec2> targets, std::vector<Vec2>& centroids,
                               std::size_t max_iterations, std::vector<double>* trace) {
  const std::size_t n = targets.size();
  const std::size_t k = centroids.size();
  std::vector<std::size_t> assign(n, k);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = nearest(centroids, targets[i]);
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
      objective += squared(targets[i] - centroids[c]);
    }
    if (trace) trace->push_back(objective);
    if (!changed) break;

    std::vector<Vec2> sums(k);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[assign[i]] = sums[assign[i]] + targets[i];
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) centroids[c] = sums[c] / static_cast<double>(counts[c]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // Re-seed an empty cluster on the point farthest from its centroid.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] <= 1) continue;
        const double d = squared(targets[i] - centroids[assign[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far_d < 0.0) break;
      --counts[assign[far]];
      assign[far] = c;
      counts[c] = 1;
      centroids[c] = targets[far];
    }
  }
  return assign;
}

void fill_stats(ModePartition& partition, std::span<const Vec2> targets,
                std::span<const std::size_t> assign) {
  const std::size_t k = partition.modes.size();
  std::vector<Vec2> sum(k), sum_sq(k);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Vec2 t = targets[i];
    sum[assign[i]] = sum[assign[i]] + t;
    ++count[assign[i]];
  }
  for (std::size_t m = 0; m < k; ++m) {
    if (count[m] > 0) sum[m] = sum[m] / static_cast<double>(count[m]);
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Vec2 d = targets[i] - sum[assign[i]];
    sum_sq[assign[i]] = sum_sq[assign[i]] + Vec2{d.x * d.x, d.y * d.y};
  }
  for (std::size_t m = 0; m < k; ++m) {
    Mode& mode = partition.modes[m];
    mode.id = m;
    mode.members = count[m];
    if (count[m] == 0) {
      if (partition.kind == PartitionKind::kGrid && !mode.extents.empty()) {
        mode.centroid = mode.extents.front().center();
      }
      mode.sigma = {};
      continue;
    }
    mode.centroid = sum[m];
    const double n = static_cast<double>(count[m]);
    mode.sigma = {std::sqrt(sum_sq[m].x / n), std::sqrt(sum_sq[m].y / n)};
  }
}

std::vector<Vec2> centroids_of(const ModePartition& p) {
  std::vector<Vec2> c;
  for (const Mode& m : p.modes) c.push_back(m.centroid);
  return c;
}

}  // namespace

ModePartition kmeans_partition(std::span<const Vec2> targets, std::size_t k, std::uint64_t seed,
                               std::vector<double>* objective_trace, std::size_t max_iterations) {
  if (k == 0) throw DataError("k-means needs k >= 1");
  if (targets.size() < k) {
    throw DataError("k-means needs at least k = " + std::to_string(k) + " targets, got " +
                    std::to_string(targets.size()));
  }
  const std::size_t n = targets.size();
  std::mt19937_64 rng(seed);
  std::vector<Vec2> centroids;
  centroids.push_back(targets[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared(targets[i] - centroids[0]);
  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double r = std::uniform_real_distribution<double>(0.0, total)(rng);
      double acc = 0.0;
      pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > r) break;
      }
    } else {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    centroids.push_back(targets[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared(targets[i] - centroids.back()));
    }
  }

  const std::vector<std::size_t> assign = lloyd(targets, centroids, max_iterations, objective_trace);
  ModePartition partition;
  partition.kind = PartitionKind::kKMeans;
  partition.seed = seed;
  partition.modes.resize(k);
  for (std::size_t m = 0; m < k; ++m) partition.modes[m].centroid = centroids[m];
  fill_stats(partition, targets, assign);
  return partition;
}

std::size_t GridLayout::mode_count() const {
  std::size_t total = 0;
  for (std::size_t c = 0; c < x_slices; ++c) {
    if (y_cuts.empty()) {
      total += 1;
    } else {
      total += (y_cuts.size() == 1 ? y_cuts[0] : y_cuts.at(c)).size() + 1;
    }
  }
  return total;
}

ModePartition grid_partition(std::span<const Vec2> targets, const GridLayout& layout) {
  if (targets.empty()) throw DataError("grid partition needs at least one target");
  if (layout.x_slices < 1) throw ConfigError("grid layout needs at least one x slice");
  if (!layout.y_cuts.empty() && layout.y_cuts.size() != 1 &&
      layout.y_cuts.size() != layout.x_slices) {
    throw ConfigError("grid layout needs one shared y-cut list or one per column");
  }
  Rect extent{targets[0].x, targets[0].x, targets[0].y, targets[0].y};
  for (Vec2 t : targets) {
    extent.x0 = std::min(extent.x0, t.x);
    extent.x1 = std::max(extent.x1, t.x);
    extent.y0 = std::min(extent.y0, t.y);
    extent.y1 = std::max(extent.y1, t.y);
  }
  if (!(extent.x1 > extent.x0)) throw DataError("grid partition extent has zero width");

  ModePartition partition;
  partition.kind = PartitionKind::kGrid;
  partition.extent = extent;
  const double width = extent.x1 - extent.x0;
  const double height = extent.y1 - extent.y0;
  for (std::size_t c = 0; c < layout.x_slices; ++c) {
    const double xa = extent.x0 + width * static_cast<double>(c) / static_cast<double>(layout.x_slices);
    const double xb = c + 1 == layout.x_slices
                          ? extent.x1
                          : extent.x0 + width * static_cast<double>(c + 1) /
                                            static_cast<double>(layout.x_slices);
    std::vector<double> ys{extent.y0};
    if (!layout.y_cuts.empty()) {
      for (double cut : layout.y_cuts.size() == 1 ? layout.y_cuts[0] : layout.y_cuts[c]) {
        const double y = layout.units == GridLayout::Units::kFraction ? extent.y0 + cut * height : cut;
        if (!(y > ys.back() && y < extent.y1)) {
          throw ConfigError("y cut " + std::to_string(cut) + " of column " + std::to_string(c) +
                            " is not increasing inside the target extent [" +
                            std::to_string(extent.y0) + ", " + std::to_string(extent.y1) + "]");
        }
        ys.push_back(y);
      }
    }
    ys.push_back(extent.y1);
    for (std::size_t r = 0; r + 1 < ys.size(); ++r) {
      Mode mode;
      mode.id = partition.modes.size();
      mode.extents.push_back({xa, xb, ys[r], ys[r + 1]});
      partition.modes.push_back(std::move(mode));
    }
  }
  refresh_mode_stats(partition, targets);
  return partition;
}

std::size_t assign_mode(const ModePartition& partition, Vec2 target) {
  if (partition.modes.empty()) throw DataError("cannot assign to an empty partition");
  if (partition.kind == PartitionKind::kKMeans) {
    return nearest(centroids_of(partition), target);
  }
  const Rect& e = partition.extent;
  const Vec2 p{std::clamp(target.x, e.x0, e.x1), std::clamp(target.y, e.y0, e.y1)};
  for (const Mode& m : partition.modes) {
    for (const Rect& r : m.extents) {
      if (r.contains(p)) return m.id;
    }
  }
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Mode& m : partition.modes) {
    for (const Rect& r : m.extents) {
      const Vec2 q{std::clamp(p.x, r.x0, r.x1), std::clamp(p.y, r.y0, r.y1)};
      const double d = squared(p - q);
      if (d < best_d) {
        best_d = d;
        best = m.id;
      }
    }
  }
  return best;
}

std::vector<std::size_t> assign_all(const ModePartition& partition, std::span<const Vec2> targets) {
  std::vector<std::size_t> out;
  out.reserve(targets.size());
  if (partition.kind == PartitionKind::kKMeans) {
    const std::vector<Vec2> c = centroids_of(partition);
    for (Vec2 t : targets) out.push_back(nearest(c, t));
    return out;
  }
  for (Vec2 t : targets) out.push_back(assign_mode(partition, t));
  return out;
}

void refresh_mode_stats(ModePartition& partition, std::span<const Vec2> targets) {
  for (std::size_t m = 0; m < partition.modes.size(); ++m) partition.modes[m].id = m;
  fill_stats(partition, targets, assign_all(partition, targets));
}

ModePartition merge_small_modes(ModePartition partition, std::span<const Vec2> targets,
                                std::size_t min_members) {
  refresh_mode_stats(partition, targets);
  const std::size_t before = partition.modes.size();
  std::size_t merged = 0;
  while (partition.modes.size() > 1) {
    std::size_t small = partition.modes.size();
    for (const Mode& m : partition.modes) {
      if (m.members < min_members &&
          (small == partition.modes.size() || m.members < partition.modes[small].members)) {
        small = m.id;
      }
    }
    if (small == partition.modes.size()) break;

    std::size_t into = small;
    double best_d = std::numeric_limits<double>::infinity();
    for (const Mode& m : partition.modes) {
      if (m.id == small) continue;
      const double d = squared(m.centroid - partition.modes[small].centroid);
      if (d < best_d) {
        best_d = d;
        into = m.id;
      }
    }
    ++merged;
    Mode removed = std::move(partition.modes[small]);
    auto& dest = partition.modes[into].extents;
    dest.insert(dest.end(), removed.extents.begin(), removed.extents.end());
    partition.modes.erase(partition.modes.begin() + static_cast<std::ptrdiff_t>(small));

    if (partition.kind == PartitionKind::kKMeans) {
      std::vector<Vec2> centroids = centroids_of(partition);
      const std::vector<std::size_t> assign = lloyd(targets, centroids, 300, nullptr);
      for (std::size_t m = 0; m < centroids.size(); ++m) partition.modes[m].centroid = centroids[m];
      fill_stats(partition, targets, assign);
    } else {
      refresh_mode_stats(partition, targets);
    }
  }
  if (merged > 0) {
    warn("merged " + std::to_string(merged) + " modes with fewer than " + std::to_string(min_members) +
         " members; " + std::to_string(before) + " modes became " + std::to_string(partition.modes.size()));
  }
  return partition;
}

ModePreset mode_preset(const std::string& name) {
  ModePreset p;
  p.name = name;
  if (name == "sdd") {
    p.kind = PartitionKind::kKMeans;
    p.k = 36;
    p.top_k = 20;
  } else if (name == "ind") {
    p.kind = PartitionKind::kKMeans;
    p.k = 50;
    p.top_k = 20;
  } else if (name == "argo") {
    // Six uniform columns; the four central ones get wide cells around the
    // heading axis.
    p.kind = PartitionKind::kGrid;
    p.layout.x_slices = 6;
    p.layout.units = GridLayout::Units::kAbsolute;
    const std::vector<double> outer{0.0};
    const std::vector<double> central{-3.0, -1.0, 1.0, 3.0};
    p.layout.y_cuts = {outer, central, central, central, central, outer};
    p.k = p.layout.mode_count();
    p.top_k = 6;
  } else {
    throw ConfigError("unknown mode preset '" + name + "' (expected sdd, ind or argo)");
  }
  return p;
}

ModePartition build_partition(const ModePreset& preset, std::span<const Vec2> targets,
                              std::uint64_t seed) {
  if (preset.kind == PartitionKind::kKMeans) return kmeans_partition(targets, preset.k, seed);
  ModePartition p = grid_partition(targets, preset.layout);
  p.seed = seed;
  return p;
}

namespace {

nlohmann::json rect_json(const Rect& r) { return {r.x0, r.x1, r.y0, r.y1}; }
Rect rect_from(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
          j.at(3).get<double>()};
}

}  // namespace

void to_json(nlohmann::json& j, const ModePartition& p) {
  nlohmann::json modes = nlohmann::json::array();
  for (const Mode& m : p.modes) {
    nlohmann::json extents = nlohmann::json::array();
    for (const Rect& r : m.extents) extents.push_back(rect_json(r));
    modes.push_back({{"id", m.id},
                     {"centroid", {m.centroid.x, m.centroid.y}},
                     {"sigma", {m.sigma.x, m.sigma.y}},
                     {"members", m.members},
                     {"extents", std::move(extents)}});
  }
  j = nlohmann::json{{"kind", p.kind == PartitionKind::kKMeans ? "kmeans" : "grid"},
                     {"seed", p.seed},
                     {"extent", rect_json(p.extent)},
                     {"modes", std::move(modes)}};
}

void from_json(const nlohmann::json& j, ModePartition& p) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "kmeans" && kind != "grid") throw SchemaError("unknown partition kind " + kind);
  p.kind = kind == "kmeans" ? PartitionKind::kKMeans : PartitionKind::kGrid;
  p.seed = j.at("seed").get<std::uint64_t>();
  p.extent = rect_from(j.at("extent"));
  p.modes.clear();
  for (const auto& jm : j.at("modes")) {
    Mode m;
    m.id = jm.at("id").get<std::size_t>();
    m.centroid = {jm.at("centroid").at(0).get<double>(), jm.at("centroid").at(1).get<double>()};
    m.sigma = {jm.at("sigma").at(0).get<double>(), jm.at("sigma").at(1).get<double>()};
    m.members = jm.at("members").get<std::size_t>();
    for (const auto& r : jm.at("extents")) m.extents.push_back(rect_from(r));
    p.modes.push_back(std::move(m));
  }
}

}  // namespace ebmtraj
