/*
 * Copyright 2026 The uvbot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef UVBOT_GEOMETRY_HPP_
#define UVBOT_GEOMETRY_HPP_

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uvbot {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wraps an angle into (-pi, pi].
inline double NormalizeAngle(double angle) {
  double a = std::remainder(angle, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  return a;
}

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2D operator*(double s, Point2D p) { return {s * p.x, s * p.y}; }
  friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline double Norm(Point2D p) { return std::hypot(p.x, p.y); }
inline double Distance(Point2D a, Point2D b) { return Norm(a - b); }

// Planar pose. The heading is kept in (-pi, pi] by every library operation
// that produces a pose; use MakePose when building one by hand.
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Point2D position() const { return {x, y}; }
  friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

inline Pose2D MakePose(double x, double y, double theta) {
  return {x, y, NormalizeAngle(theta)};
}

// Expresses a world point in the frame of `pose`.
inline Point2D ToLocal(const Pose2D& pose, Point2D world) {
  const double dx = world.x - pose.x;
  const double dy = world.y - pose.y;
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {c * dx + s * dy, -s * dx + c * dy};
}

inline Point2D ToWorld(const Pose2D& pose, Point2D local) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {pose.x + c * local.x - s * local.y, pose.y + s * local.x + c * local.y};
}

// Axis-aligned rectangle in world coordinates.
struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  Point2D center() const { return {0.5 * (min_x + max_x), 0.5 * (min_y + max_y)}; }
  bool contains(Point2D p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

}  // namespace uvbot

#endif  // UVBOT_GEOMETRY_HPP_
