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
#include <deque>
#include <limits>
#include <queue>

#include "uvbot/planning.hpp"

namespace uvbot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;

struct OpenEntry {
  double f;
  double g;
  std::size_t index;
  // Min-heap on f, ties broken by larger g (deeper node), then index.
  bool operator<(const OpenEntry& o) const {
    if (f != o.f) return f > o.f;
    if (g != o.g) return g < o.g;
    return index > o.index;
  }
};

bool SegmentClear(const Costmap& costmap, Point2D a, Point2D b) {
  return TraverseSegment(costmap.grid(), a, b, [&](CellIndex c, double) {
    return costmap.grid().contains(c) && !costmap.lethal(c);
  });
}

std::vector<Point2D> Shortcut(const Costmap& costmap, const std::vector<Point2D>& path) {
  if (path.size() <= 2) return path;
  std::vector<Point2D> out{path.front()};
  std::size_t i = 0;
  while (i + 1 < path.size()) {
    std::size_t j = path.size() - 1;
    while (j > i + 1 && !SegmentClear(costmap, path[i], path[j])) --j;
    out.push_back(path[j]);
    i = j;
  }
  return out;
}

}  // namespace

Costmap::Costmap(const OccupancyGrid& grid, const CostmapParams& params)
    : grid_(grid), params_(params) {
  if (!(params.inflation_radius >= 0.0) || !(params.cost_scale >= 0.0) ||
      !(params.cost_falloff > 0.0) || !(params.obstacle_decay >= 0.0) ||
      !(params.static_tolerance >= 0.0) || !(params.mark_range > 0.0)) {
    throw Error("costmap: invalid parameters");
  }
  distance_ = DistanceTransform(grid, [&](CellIndex c) { return grid.blocks(c); });
  cost_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double excess = distance_[i] - params.inflation_radius;
    cost_[i] = excess <= 0.0 ? kInf
                             : 1.0 + params.cost_scale * std::exp(-excess / params.cost_falloff);
  }
  expiry_.assign(grid.size(), -kInf);
}

bool Costmap::lethal(CellIndex c) const {
  if (!grid_.contains(c)) return true;
  const std::size_t i = grid_.index(c);
  return distance_[i] <= params_.inflation_radius || expiry_[i] > now_;
}

void Costmap::mark_obstacle(Point2D p) {
  const double r = params_.inflation_radius;
  const double res = grid_.resolution();
  const CellIndex lo = grid_.world_to_cell({p.x - r, p.y - r});
  const CellIndex hi = grid_.world_to_cell({p.x + r, p.y + r});
  const CellIndex center = grid_.world_to_cell(p);
  const double expiry = now_ + params_.obstacle_decay;
  for (int y = std::max(lo.y, 0); y <= std::min(hi.y, grid_.height() - 1); ++y) {
    for (int x = std::max(lo.x, 0); x <= std::min(hi.x, grid_.width() - 1); ++x) {
      const double dx = (x - center.x) * res;
      const double dy = (y - center.y) * res;
      if (dx * dx + dy * dy <= r * r) {
        double& e = expiry_[grid_.index({x, y})];
        e = std::max(e, expiry);
      }
    }
  }
}

std::optional<CellIndex> NearestPassable(const Costmap& costmap, CellIndex from) {
  const OccupancyGrid& g = costmap.grid();
  if (!g.contains(from)) return std::nullopt;
  std::vector<bool> seen(g.size(), false);
  std::deque<CellIndex> queue{from};
  seen[g.index(from)] = true;
  while (!queue.empty()) {
    const CellIndex c = queue.front();
    queue.pop_front();
    if (!costmap.lethal(c)) return c;
    // Never search through walls.
    if (g.blocks(c)) continue;
    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const CellIndex n{c.x + dx, c.y + dy};
      if (g.contains(n) && !seen[g.index(n)]) {
        seen[g.index(n)] = true;
        queue.push_back(n);
      }
    }
  }
  return std::nullopt;
}

PlanResult PlanPath(const Costmap& costmap, Point2D start, Point2D goal,
                    const PlanParams& params) {
  const OccupancyGrid& g = costmap.grid();
  PlanResult result;
  CellIndex start_cell = g.world_to_cell(start);
  const CellIndex goal_cell = g.world_to_cell(goal);
  if (!g.contains(goal_cell) || costmap.lethal(goal_cell)) return result;
  if (!g.contains(start_cell) || g.blocks(start_cell)) return result;

  std::vector<Point2D> prefix{start};
  if (costmap.lethal(start_cell)) {
    const auto escape = NearestPassable(costmap, start_cell);
    if (!escape) return result;
    start_cell = *escape;
    start = g.cell_center(start_cell);
  }

  if (start_cell == goal_cell) {
    result.status = PlanStatus::kOk;
    result.path = prefix;
    if (!(goal == prefix.back())) result.path.push_back(goal);
    return result;
  }

  const double res = g.resolution();
  const Point2D goal_center = g.cell_center(goal_cell);
  auto heuristic = [&](CellIndex c) { return Distance(g.cell_center(c), goal_center); };

  std::vector<double> cost_so_far(g.size(), kInf);
  std::vector<std::size_t> parent(g.size(), std::numeric_limits<std::size_t>::max());
  std::vector<bool> closed(g.size(), false);
  std::priority_queue<OpenEntry> open;
  const std::size_t s = g.index(start_cell);
  const std::size_t t = g.index(goal_cell);
  cost_so_far[s] = 0.0;
  open.push({heuristic(start_cell), 0.0, s});

  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.index]) continue;
    closed[top.index] = true;
    if (top.index == t) break;
    const CellIndex c = g.cell_of(top.index);
    for (int k = 0; k < 8; ++k) {
      const CellIndex n{c.x + kDx[k], c.y + kDy[k]};
      if (!g.contains(n) || costmap.lethal(n)) continue;
      const bool diagonal = k >= 4;
      if (diagonal && (costmap.lethal(CellIndex{c.x + kDx[k], c.y}) ||
                       costmap.lethal(CellIndex{c.x, c.y + kDy[k]}))) {
        continue;
      }
      const std::size_t ni = g.index(n);
      if (closed[ni]) continue;
      const double step = (diagonal ? kSqrt2 : 1.0) * res * costmap.cost(n);
      const double candidate = cost_so_far[top.index] + step;
      if (candidate < cost_so_far[ni]) {
        cost_so_far[ni] = candidate;
        parent[ni] = top.index;
        open.push({candidate + heuristic(n), candidate, ni});
      }
    }
  }
  if (!closed[t]) return result;

  std::vector<std::size_t> chain;
  for (std::size_t i = t; i != s; i = parent[i]) chain.push_back(i);
  std::reverse(chain.begin(), chain.end());

  std::vector<Point2D> path = prefix;
  if (!(start == prefix.back())) path.push_back(start);
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) path.push_back(g.cell_center(g.cell_of(chain[k])));
  path.push_back(goal);
  result.status = PlanStatus::kOk;
  result.cost = cost_so_far[t];
  result.path = params.smooth ? Shortcut(costmap, path) : path;
  return result;
}

bool PathBlocked(const Costmap& costmap, std::span<const Point2D> path,
                 std::size_t from_index) {
  for (std::size_t i = from_index; i + 1 < path.size(); ++i) {
    const bool clear = TraverseSegment(costmap.grid(), path[i], path[i + 1],
                                       [&](CellIndex c, double) {
                                         return !costmap.lethal(c);
                                       });
    if (!clear) return true;
  }
  if (path.size() == 1 && from_index == 0) return costmap.lethal(path.front());
  return false;
}

ReplanResult ReplanOnObstacle(Costmap& costmap, const Scan& scan,
                              std::span<const Point2D> current_path,
                              const Pose2D& pose, std::size_t from_index,
                              const PlanParams& params) {
  if (current_path.empty()) throw Error("replan: empty path");
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    if (scan.ranges[i] >= scan.max_range ||
        scan.ranges[i] > costmap.params().mark_range) {
      continue;
    }
    const double a = pose.theta + scan.angles[i];
    const Point2D end{pose.x + scan.ranges[i] * std::cos(a),
                      pose.y + scan.ranges[i] * std::sin(a)};
    const CellIndex c = costmap.grid().world_to_cell(end);
    // Off-map hits and hits next to mapped walls are explained by the map.
    if (!costmap.grid().contains(c) ||
        costmap.obstacle_distance(c) <= costmap.params().static_tolerance) {
      continue;
    }
    costmap.mark_obstacle(end);
  }
  ReplanResult result;
  const Point2D goal = current_path.back();
  if (costmap.lethal(goal)) {
    result.status = ReplanStatus::kUnreachable;
    return result;
  }
  // Only temporary marks can invalidate a path that was planned on this map;
  // the leg the robot is on is checked from its current position.
  std::vector<Point2D> remaining{pose.position()};
  for (std::size_t i = std::min(from_index + 1, current_path.size() - 1);
       i < current_path.size(); ++i) {
    remaining.push_back(current_path[i]);
  }
  bool blocked = false;
  for (std::size_t i = 0; i + 1 < remaining.size() && !blocked; ++i) {
    blocked = !TraverseSegment(costmap.grid(), remaining[i], remaining[i + 1],
                               [&](CellIndex c, double) {
                                 return !costmap.has_temporary_obstacle(c);
                               });
  }
  if (!blocked) {
    result.path.assign(current_path.begin(), current_path.end());
    return result;
  }
  PlanResult plan = PlanPath(costmap, pose.position(), goal, params);
  if (plan.status != PlanStatus::kOk) {
    result.status = ReplanStatus::kUnreachable;
    return result;
  }
  result.status = ReplanStatus::kReplanned;
  result.path = std::move(plan.path);
  return result;
}

}  // namespace uvbot
