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
#include <string>

#include "uvbot/planning.hpp"

namespace uvbot {

namespace {

constexpr double kEps = 1e-9;

// Coverage is generated in a frame where u runs along the long side of the
// rectangle and v across it.
struct LaneFrame {
  bool transposed = false;
  double u_min = 0, u_max = 0, v_min = 0, v_max = 0;

  Point2D to_world(double u, double v) const {
    return transposed ? Point2D{v, u} : Point2D{u, v};
  }
};

LaneFrame MakeFrame(const Rect& rect, double spacing, double inset) {
  if (!(spacing > 0.0)) throw Error("coverage: spacing must be > 0");
  if (!(inset >= 0.0)) throw Error("coverage: inset must be >= 0");
  if (rect.width() < spacing - kEps || rect.height() < spacing - kEps) {
    throw Error("coverage: rectangle too small for one lane");
  }
  const Rect in{rect.min_x + inset, rect.min_y + inset, rect.max_x - inset,
                rect.max_y - inset};
  if (!(in.width() > kEps && in.height() > kEps)) {
    throw Error("coverage: rectangle too small for the wall inset");
  }
  LaneFrame f;
  f.transposed = rect.height() > rect.width();
  if (f.transposed) {
    f.u_min = in.min_y; f.u_max = in.max_y; f.v_min = in.min_x; f.v_max = in.max_x;
  } else {
    f.u_min = in.min_x; f.u_max = in.max_x; f.v_min = in.min_y; f.v_max = in.max_y;
  }
  return f;
}

std::vector<Point2D> CenterLane(const LaneFrame& f) {
  const double v = 0.5 * (f.v_min + f.v_max);
  return {f.to_world(f.u_min, v), f.to_world(f.u_max, v)};
}

}  // namespace

std::string_view ToString(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kSShape: return "s_shape";
    case TrajectoryKind::kRollingUpRps: return "rolling_up_rps";
    case TrajectoryKind::kUnfoldingRps: return "unfolding_rps";
    case TrajectoryKind::kPlanned: return "planned";
  }
  return "planned";
}

TrajectoryKind ParseTrajectoryKind(std::string_view name) {
  for (auto kind : {TrajectoryKind::kSShape, TrajectoryKind::kRollingUpRps,
                    TrajectoryKind::kUnfoldingRps, TrajectoryKind::kPlanned}) {
    if (ToString(kind) == name) return kind;
  }
  throw Error("unknown trajectory kind '" + std::string(name) + "'");
}

Trajectory GenerateSShape(const Rect& rect, double spacing, double inset) {
  const LaneFrame f = MakeFrame(rect, spacing, inset);
  Trajectory traj{TrajectoryKind::kSShape, {}, spacing};
  if (f.v_max - f.v_min < spacing - kEps) {
    traj.waypoints = CenterLane(f);
    return traj;
  }
  std::vector<double> lanes;
  for (double v = f.v_min; v <= f.v_max + kEps; v = f.v_min + spacing * lanes.size()) {
    lanes.push_back(std::min(v, f.v_max));
  }
  if (f.v_max - lanes.back() > kEps) lanes.push_back(f.v_max);
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    const bool forward = i % 2 == 0;
    traj.waypoints.push_back(f.to_world(forward ? f.u_min : f.u_max, lanes[i]));
    traj.waypoints.push_back(f.to_world(forward ? f.u_max : f.u_min, lanes[i]));
  }
  return traj;
}

Trajectory GenerateRps(const Rect& rect, double spacing, double inset,
                       SpiralDirection direction) {
  const LaneFrame f = MakeFrame(rect, spacing, inset);
  Trajectory traj{direction == SpiralDirection::kRollingUp
                      ? TrajectoryKind::kRollingUpRps
                      : TrajectoryKind::kUnfoldingRps,
                  {}, spacing};
  if (f.v_max - f.v_min <= spacing + kEps) {
    traj.waypoints = CenterLane(f);
  } else {
    // Walk the boundary of a shrinking rectangle: each finished leg pulls
    // the edge it ran along inward by one pitch. Per axis the pitch is
    // shortened so that whole loops fill the extent and no gap wider than
    // `spacing` is left in the middle.
    auto fitted = [&](double extent) {
      return extent / std::max(1.0, std::ceil(extent / spacing - kEps));
    };
    const double pitch_u = fitted(f.u_max - f.u_min);
    const double pitch_v = fitted(f.v_max - f.v_min);
    double lo_u = f.u_min, hi_u = f.u_max, lo_v = f.v_min, hi_v = f.v_max;
    double u = lo_u, v = lo_v;
    std::vector<Point2D> pts{f.to_world(u, v)};
    int heading = 0;  // 0:+u 1:+v 2:-u 3:-v
    while (true) {
      double length = 0.0;
      switch (heading) {
        case 0: length = hi_u - u; break;
        case 1: length = hi_v - v; break;
        case 2: length = u - lo_u; break;
        case 3: length = v - lo_v; break;
      }
      if (length <= kEps) break;
      switch (heading) {
        case 0: u = hi_u; lo_v += pitch_v; break;
        case 1: v = hi_v; hi_u -= pitch_u; break;
        case 2: u = lo_u; hi_v -= pitch_v; break;
        case 3: v = lo_v; lo_u += pitch_u; break;
      }
      pts.push_back(f.to_world(u, v));
      heading = (heading + 1) % 4;
    }
    // Finish with a partial leg that stops level with the center.
    const double cu = 0.5 * (f.u_min + f.u_max);
    const double cv = 0.5 * (f.v_min + f.v_max);
    switch (heading) {
      case 0: if (cu - u > kEps) pts.push_back(f.to_world(cu, v)); break;
      case 1: if (cv - v > kEps) pts.push_back(f.to_world(u, cv)); break;
      case 2: if (u - cu > kEps) pts.push_back(f.to_world(cu, v)); break;
      case 3: if (v - cv > kEps) pts.push_back(f.to_world(u, cv)); break;
    }
    traj.waypoints = std::move(pts);
  }
  if (direction == SpiralDirection::kUnfolding) {
    std::reverse(traj.waypoints.begin(), traj.waypoints.end());
  }
  return traj;
}

Trajectory GenerateCoverage(TrajectoryKind kind, const Rect& rect,
                            double spacing, double inset) {
  switch (kind) {
    case TrajectoryKind::kSShape: return GenerateSShape(rect, spacing, inset);
    case TrajectoryKind::kRollingUpRps:
      return GenerateRps(rect, spacing, inset, SpiralDirection::kRollingUp);
    case TrajectoryKind::kUnfoldingRps:
      return GenerateRps(rect, spacing, inset, SpiralDirection::kUnfolding);
    case TrajectoryKind::kPlanned: break;
  }
  throw Error("coverage: planned trajectories come from the path planner");
}

double PathLength(std::span<const Point2D> path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += Distance(path[i - 1], path[i]);
  return total;
}

}  // namespace uvbot
