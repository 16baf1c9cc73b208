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

#ifndef UVBOT_PLANNING_HPP_
#define UVBOT_PLANNING_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "uvbot/geometry.hpp"
#include "uvbot/robot.hpp"
#include "uvbot/world.hpp"

namespace uvbot {

enum class TrajectoryKind { kSShape, kRollingUpRps, kUnfoldingRps, kPlanned };

std::string_view ToString(TrajectoryKind kind);
TrajectoryKind ParseTrajectoryKind(std::string_view name);

struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::kPlanned;
  std::vector<Point2D> waypoints;
  double lane_spacing = 0.0;
};

// Boustrophedon lanes parallel to the long side of `rect`, `spacing` apart,
// kept `inset` away from the rectangle edges. When the inset rectangle is
// narrower than one lane pitch a single center lane is produced.
Trajectory GenerateSShape(const Rect& rect, double spacing, double inset);

enum class SpiralDirection { kRollingUp, kUnfolding };

// Rectangular planar spiral with pitch at most `spacing` (shortened per axis
// so whole loops fill the inset rectangle). Rolling-up starts at the
// lower-left inset corner, runs along the long side first and winds inward
// until it ends near the center; unfolding is its exact reversal. An inset
// rectangle no wider than one pitch gives a single center lane.
Trajectory GenerateRps(const Rect& rect, double spacing, double inset,
                       SpiralDirection direction);

Trajectory GenerateCoverage(TrajectoryKind kind, const Rect& rect,
                            double spacing, double inset);

double PathLength(std::span<const Point2D> path);

struct CostmapParams {
  double inflation_radius = 0.35;
  // Extra traversal cost multiplier just outside the inflated zone; decays
  // exponentially with distance over `cost_falloff` meters.
  double cost_scale = 2.0;
  double cost_falloff = 0.3;
  // Lifetime of obstacles marked from live scans.
  double obstacle_decay = 5.0;
  // Scan endpoints this close to a mapped obstacle are attributed to the map
  // and not marked.
  double static_tolerance = 0.25;
  // Only scan hits closer than this are used for marking.
  double mark_range = 2.5;
};

// Static obstacles inflated by `inflation_radius` plus a layer of temporary
// obstacles marked from scans. Unknown cells count as obstacles.
class Costmap {
 public:
  Costmap(const OccupancyGrid& grid, const CostmapParams& params);

  const OccupancyGrid& grid() const { return grid_; }
  const CostmapParams& params() const { return params_; }

  bool lethal(CellIndex c) const;
  bool lethal(Point2D p) const { return lethal(grid_.world_to_cell(p)); }
  // Traversal cost multiplier (>= 1) of a non-lethal cell.
  double cost(CellIndex c) const { return cost_[grid_.index(c)]; }
  double obstacle_distance(CellIndex c) const { return distance_[grid_.index(c)]; }

  // Marks every cell within the inflation radius of `p` as lethal until
  // now + obstacle_decay.
  void mark_obstacle(Point2D p);
  // Advances the clock; marks older than the decay window stop counting.
  void set_time(double now) { now_ = now; }
  double time() const { return now_; }
  bool has_temporary_obstacle(CellIndex c) const {
    return expiry_[grid_.index(c)] > now_;
  }

 private:
  OccupancyGrid grid_;
  CostmapParams params_;
  std::vector<double> distance_;
  std::vector<double> cost_;
  std::vector<double> expiry_;
  double now_ = 0.0;
};

enum class PlanStatus { kOk, kUnreachable };

struct PlanResult {
  PlanStatus status = PlanStatus::kUnreachable;
  std::vector<Point2D> path;
  double cost = 0.0;  // cost of the unsmoothed grid path
};

struct PlanParams {
  bool smooth = true;
};

// 8-connected A* with a Euclidean heuristic. A diagonal move requires both
// adjacent orthogonal cells to be passable. Edge cost is the step length
// times the cost multiplier of the entered cell. The path starts at `start`,
// ends at `goal` and passes through cell centers in between; with smoothing
// on, vertices are dropped wherever a straight segment stays clear.
// A start inside the inflated zone is first moved to the nearest passable
// cell. An occupied goal, or one with no passable route, is unreachable.
PlanResult PlanPath(const Costmap& costmap, Point2D start, Point2D goal,
                    const PlanParams& params = {});

// Nearest non-lethal cell by breadth-first search, if any.
std::optional<CellIndex> NearestPassable(const Costmap& costmap, CellIndex from);

// True if any cell pierced by the path (from vertex `from_index` on) is lethal.
bool PathBlocked(const Costmap& costmap, std::span<const Point2D> path,
                 std::size_t from_index = 0);

enum class ReplanStatus { kUnchanged, kReplanned, kUnreachable };

struct ReplanResult {
  ReplanStatus status = ReplanStatus::kUnchanged;
  std::vector<Point2D> path;
};

// Marks scan endpoints (in the frame of `pose`) that the static map does not
// explain as temporary obstacles and,
// if the remaining path now crosses a lethal cell, plans again from `pose`
// to the last waypoint.
ReplanResult ReplanOnObstacle(Costmap& costmap, const Scan& scan,
                              std::span<const Point2D> current_path,
                              const Pose2D& pose, std::size_t from_index = 0,
                              const PlanParams& params = {});

struct FollowParams {
  double lookahead = 0.5;
  double k_heading = 1.5;
  double v_cruise = 0.3;
  double goal_tolerance = 0.1;
};

// Progress along the path; the closest-point search never moves backwards.
struct FollowState {
  std::size_t segment = 0;
  bool done = false;
};

struct FollowResult {
  Twist twist;
  bool done = false;
};

// Pure pursuit with proportional heading control. The target is the point
// `lookahead` meters of arc length past the closest path point; the forward
// speed shrinks linearly with the heading error and the output is clamped to
// the robot limits. Within goal_tolerance of the final waypoint the twist is
// zero and the result reports done.
FollowResult Follow(std::span<const Point2D> path, const Pose2D& pose,
                    const FollowParams& params, const RobotConfig& limits,
                    FollowState& state);

}  // namespace uvbot

#endif  // UVBOT_PLANNING_HPP_
