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

#include "ebmtraj/features/geometry.hpp"

#include <numbers>

#include "ebmtraj/common/error.hpp"

namespace ebmtraj {

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

double heading_from_displacements(std::span<const Vec2> points) {
  for (std::size_t i = points.size(); i >= 2; --i) {
    const Vec2 d = points[i - 1] - points[i - 2];
    if (d.x != 0.0 || d.y != 0.0) return std::atan2(d.y, d.x);
  }
  return 0.0;
}

Canonicalized canonicalize(std::span<const Vec2> history, std::optional<double> heading) {
  if (history.empty()) throw DataError("cannot canonicalize an empty history");
  const double h = heading && std::isfinite(*heading) ? *heading : heading_from_displacements(history);
  Canonicalized out{CanonicalFrame(history.back(), h), {}};
  out.points.reserve(history.size());
  for (Vec2 p : history) out.points.push_back(out.frame.to_canonical(p));
  return out;
}

}  // namespace ebmtraj
