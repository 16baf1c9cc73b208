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

#include <algorithm>
#include <cmath>
#include <limits>

#include "uvbot/planning.hpp"

namespace uvbot {

namespace {

struct Projection {
  double distance;
  double along;  // arc length from the segment start
};

Projection Project(Point2D a, Point2D b, Point2D p) {
  const Point2D d = b - a;
  const double len = Norm(d);
  if (len == 0.0) return {Distance(a, p), 0.0};
  const double t = std::clamp(((p.x - a.x) * d.x + (p.y - a.y) * d.y) / (len * len), 0.0, 1.0);
  const Point2D q = a + t * d;
  return {Distance(q, p), t * len};
}

}  // namespace

FollowResult Follow(std::span<const Point2D> path, const Pose2D& pose,
                    const FollowParams& params, const RobotConfig& limits,
                    FollowState& state) {
  if (path.empty()) throw Error("follow: empty trajectory");
  FollowResult result;
  const Point2D here = pose.position();
  if (state.done || Distance(here, path.back()) < params.goal_tolerance) {
    // Only finish once the last segment has been reached.
    if (state.done || path.size() == 1 || state.segment + 2 >= path.size()) {
      state.done = true;
      result.done = true;
      return result;
    }
  }

  Point2D target = path.back();
  if (path.size() >= 2) {
    std::vector<double> start_s(path.size(), 0.0);
    for (std::size_t i = 1; i < path.size(); ++i) {
      start_s[i] = start_s[i - 1] + Distance(path[i - 1], path[i]);
    }
    const std::size_t last_segment = path.size() - 2;
    state.segment = std::min(state.segment, last_segment);

    // Closest point within a window of arc length ahead of current progress.
    const double window = start_s[state.segment + 1] + 2.0 * params.lookahead;
    double best = std::numeric_limits<double>::infinity();
    double best_s = start_s[state.segment];
    std::size_t best_segment = state.segment;
    for (std::size_t i = state.segment; i <= last_segment && start_s[i] <= window; ++i) {
      const Projection p = Project(path[i], path[i + 1], here);
      if (p.distance < best) {
        best = p.distance;
        best_s = start_s[i] + p.along;
        best_segment = i;
      }
    }
    state.segment = best_segment;

    const double target_s = std::min(best_s + params.lookahead, start_s.back());
    std::size_t i = best_segment;
    while (i < last_segment && start_s[i + 1] < target_s) ++i;
    const double seg_len = start_s[i + 1] - start_s[i];
    const double t = seg_len > 0.0 ? (target_s - start_s[i]) / seg_len : 1.0;
    target = path[i] + std::clamp(t, 0.0, 1.0) * (path[i + 1] - path[i]);
  }

  const Point2D to_target = target - here;
  const double heading_error =
      Norm(to_target) > 1e-12
          ? NormalizeAngle(std::atan2(to_target.y, to_target.x) - pose.theta)
          : 0.0;
  result.twist.w = params.k_heading * heading_error;
  result.twist.v = params.v_cruise * (1.0 - std::abs(heading_error) / kPi);
  result.twist = ClampTwist(result.twist, limits);
  return result;
}

}  // namespace uvbot
