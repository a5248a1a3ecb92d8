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

#include "ebmtraj/app/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {

void SyntheticSpec::validate() const {
  if (destinations.empty()) throw ConfigError("synthetic data needs at least one destination");
  if (weights.size() != destinations.size()) {
    throw ConfigError("synthetic weights (" + std::to_string(weights.size()) +
                      ") must match destinations (" + std::to_string(destinations.size()) + ")");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("synthetic weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("synthetic weights sum to " + std::to_string(total) + ", expected 1");
  }
  if (agents == 0) throw ConfigError("synthetic agent count must be at least 1");
  if (history_len < 2 || horizon_steps < 1) throw ConfigError("synthetic windows are too short");
  if (!(dt > 0.0) || !(noise_sigma >= 0.0) || !(speed >= 0.0) || !(hint_noise >= 0.0)) {
    throw ConfigError("synthetic dt must be positive and noise/speed non-negative");
  }
  if (agents_per_scene == 0) throw ConfigError("agents_per_scene must be at least 1");
}

void to_json(nlohmann::json& j, const SyntheticSpec& s) {
  nlohmann::json dest = nlohmann::json::array();
  for (Vec2 d : s.destinations) dest.push_back({d.x, d.y});
  j = nlohmann::json{{"destinations", dest},
                     {"weights", s.weights},
                     {"noise_sigma", s.noise_sigma},
                     {"agents", s.agents},
                     {"speed", s.speed},
                     {"turn_hint", s.turn_hint},
                     {"hint_noise", s.hint_noise},
                     {"agents_per_scene", s.agents_per_scene},
                     {"scene_extent", s.scene_extent},
                     {"class", std::string(to_string(s.agent_class))},
                     {"width", s.width},
                     {"length", s.length}};
}

void from_json(const nlohmann::json& j, SyntheticSpec& s) {
  if (j.contains("destinations")) {
    s.destinations.clear();
    for (const auto& d : j.at("destinations")) {
      if (!d.is_array() || d.size() != 2) throw ConfigError("destinations are [x, y] pairs");
      s.destinations.push_back({d[0].get<double>(), d[1].get<double>()});
    }
  }
  if (j.contains("weights")) s.weights = j.at("weights").get<std::vector<double>>();
  s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
  s.agents = j.value("agents", s.agents);
  s.speed = j.value("speed", s.speed);
  s.turn_hint = j.value("turn_hint", s.turn_hint);
  s.hint_noise = j.value("hint_noise", s.hint_noise);
  s.agents_per_scene = j.value("agents_per_scene", s.agents_per_scene);
  s.scene_extent = j.value("scene_extent", s.scene_extent);
  if (j.contains("class")) s.agent_class = parse_agent_class(j.at("class").get<std::string>());
  s.width = j.value("width", s.width);
  s.length = j.value("length", s.length);
}

SyntheticDataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  const std::size_t h = spec.history_len;
  const std::size_t f = spec.horizon_steps;
  const double horizon = static_cast<double>(f) * spec.dt;

  SyntheticDataset out;
  for (std::size_t i = 0; i < spec.agents; ++i) {
    const double u = unit(rng);
    std::size_t mode = spec.destinations.size() - 1;
    double cumulative = 0.0;
    for (std::size_t m = 0; m < spec.destinations.size(); ++m) {
      cumulative += spec.weights[m];
      if (u < cumulative && spec.weights[m] > 0.0) {
        mode = m;
        break;
      }
    }
    const double nx = normal(rng), ny = normal(rng), nh = normal(rng);
    const Vec2 origin{(unit(rng) - 0.5) * spec.scene_extent, (unit(rng) - 0.5) * spec.scene_extent};
    const double rotation = (unit(rng) * 2.0 - 1.0) * std::numbers::pi;

    const Vec2 dest = spec.destinations[mode] + Vec2{nx, ny} * spec.noise_sigma;
    const double dist = dest.norm();
    double speed = spec.speed > 0.0 ? spec.speed : dist / horizon;
    if (speed == 0.0) speed = 1.0;
    const double side = dist > 0.0 ? dest.y / dist : 0.0;
    const double bend = spec.turn_hint * side + spec.hint_noise * nh;
    const double dest_heading = dist > 0.0 ? std::atan2(dest.y, dest.x) : 0.0;

    TrajectoryRecord rec;
    char scene[32];
    std::snprintf(scene, sizeof(scene), "synth_%04zu", i / spec.agents_per_scene);
    rec.scene = scene;
    rec.track_id = static_cast<std::int64_t>(i);
    rec.agent_class = spec.agent_class;
    const CanonicalFrame placement(origin, rotation);
    auto add = [&](std::size_t frame, Vec2 local, double heading) {
      TrackPoint p;
      p.frame = static_cast<std::int64_t>(frame);
      p.position = placement.to_scene(local);
      p.heading = wrap_angle(heading + rotation);
      p.width = spec.width;
      p.length = spec.length;
      rec.points.push_back(p);
    };
    for (std::size_t k = 0; k < h; ++k) {
      const double t = static_cast<double>(h - 1 - k) * spec.dt;  // time before the last point
      add(k, {-speed * t, -bend * t * t}, std::atan2(2.0 * bend * t, speed));
    }
    for (std::size_t k = 1; k <= f; ++k) {
      add(h - 1 + k, dest * (static_cast<double>(k) / static_cast<double>(f)), dest_heading);
    }
    out.records.push_back(std::move(rec));
    out.labels.push_back(mode);
    out.endpoints.push_back(dest);
  }
  return out;
}

}  // namespace ebmtraj
