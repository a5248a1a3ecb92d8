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

#include "ebmtraj/app/samples.hpp"

#include <map>
#include <utility>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {

std::vector<Sample> extract_samples(std::span<const TrajectoryRecord> records,
                                    const SampleSpec& spec) {
  if (spec.history_len < 2 || spec.horizon_steps < 1 || spec.stride < 1) {
    throw ConfigError("sample windows need history_len >= 2, horizon_steps >= 1, stride >= 1");
  }
  // scene -> frame -> (record, point) for neighbour lookup.
  std::map<std::string, std::map<std::int64_t, std::vector<std::pair<std::size_t, std::size_t>>>>
      by_frame;
  for (std::size_t r = 0; r < records.size(); ++r) {
    for (std::size_t i = 0; i < records[r].points.size(); ++i) {
      by_frame[records[r].scene][records[r].points[i].frame].push_back({r, i});
    }
  }

  const std::size_t window = spec.history_len + spec.horizon_steps;
  std::vector<Sample> samples;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const TrajectoryRecord& rec = records[r];
    const auto& pts = rec.points;
    std::size_t begin = 0;
    while (begin + window <= pts.size()) {
      const std::int64_t step = pts[begin + 1].frame - pts[begin].frame;
      std::size_t broken = 0;
      for (std::size_t i = begin + 1; i < begin + window; ++i) {
        if (pts[i].frame - pts[i - 1].frame != step) broken = i;
      }
      if (broken != 0) {
        begin = broken;  // restart after the gap
        continue;
      }
      const std::size_t last = begin + spec.history_len - 1;
      Sample s;
      s.id = rec.scene + ":" + std::to_string(rec.track_id) + ":" + std::to_string(pts[last].frame);
      s.agent_class = rec.agent_class;
      s.observed = rec.slice(begin, last + 1);
      s.target = pts[begin + window - 1].position;
      for (const auto& [other, i] : by_frame[rec.scene][pts[last].frame]) {
        if (other == r) continue;
        const auto& op = records[other].points;
        NeighborState n{op[i].position, {}};
        if (i > 0) {
          const double frames = static_cast<double>(op[i].frame - op[i - 1].frame) /
                                static_cast<double>(step);
          n.velocity = (op[i].position - op[i - 1].position) / (frames * spec.dt);
        }
        s.neighbors.push_back(n);
      }
      samples.push_back(std::move(s));
      begin += spec.stride;
    }
  }
  return samples;
}

CanonicalFrame sample_frame(const Sample& sample) {
  const std::vector<Vec2> positions = sample.observed.positions();
  return canonicalize(positions, sample.observed.points.back().heading).frame;
}

}  // namespace ebmtraj
