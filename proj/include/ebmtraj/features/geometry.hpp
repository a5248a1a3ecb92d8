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

#ifndef EBMTRAJ_FEATURES_GEOMETRY_HPP_
#define EBMTRAJ_FEATURES_GEOMETRY_HPP_

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace ebmtraj {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  bool operator==(const Vec2&) const = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Counter-clockwise rotation by `angle` radians.
inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Wraps into (-pi, pi].
double wrap_angle(double angle);

// Rigid transform that moves `origin` to (0, 0) and turns `heading` onto +x.
class CanonicalFrame {
 public:
  CanonicalFrame() = default;
  CanonicalFrame(Vec2 origin, double heading) : origin_(origin), heading_(heading) {}

  Vec2 origin() const { return origin_; }
  double heading() const { return heading_; }
  Vec2 translation() const { return -origin_; }
  double rotation() const { return -heading_; }

  Vec2 to_canonical(Vec2 p) const { return rotate(p - origin_, -heading_); }
  Vec2 to_scene(Vec2 p) const { return rotate(p, heading_) + origin_; }
  Vec2 vector_to_canonical(Vec2 v) const { return rotate(v, -heading_); }
  Vec2 vector_to_scene(Vec2 v) const { return rotate(v, heading_); }
  double heading_to_canonical(double h) const { return wrap_angle(h - heading_); }

 private:
  Vec2 origin_;
  double heading_ = 0.0;
};

// Direction of the last non-zero displacement, 0 when the track never moves.
double heading_from_displacements(std::span<const Vec2> points);

struct Canonicalized {
  CanonicalFrame frame;
  std::vector<Vec2> points;
};

// Places the last point at the origin with the heading along +x. Without an
// explicit (finite) heading the displacement heading is used.
Canonicalized canonicalize(std::span<const Vec2> history, std::optional<double> heading = {});

}  // namespace ebmtraj

#endif  // EBMTRAJ_FEATURES_GEOMETRY_HPP_
