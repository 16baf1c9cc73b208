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

#ifndef UVBOT_WORLD_HPP_
#define UVBOT_WORLD_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uvbot/geometry.hpp"

namespace uvbot {

enum class CellState : std::uint8_t { kFree, kOccupied, kUnknown };

struct CellIndex {
  int x = 0;
  int y = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

// Tri-state raster. Cell (0, 0) has its lower-left corner at `origin`; row
// index y grows with world y.
class OccupancyGrid {
 public:
  OccupancyGrid(int width, int height, double resolution,
                Point2D origin = {}, CellState fill = CellState::kFree);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Point2D origin() const { return origin_; }
  std::size_t size() const { return cells_.size(); }
  Rect bounds() const;

  bool contains(CellIndex c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  std::size_t index(CellIndex c) const {
    return static_cast<std::size_t>(c.y) * width_ + c.x;
  }
  CellIndex cell_of(std::size_t idx) const {
    return {static_cast<int>(idx % width_), static_cast<int>(idx / width_)};
  }

  CellState at(CellIndex c) const { return cells_[index(c)]; }
  void set(CellIndex c, CellState s) { cells_[index(c)] = s; }
  std::span<const CellState> cells() const { return cells_; }

  // Unknown cells and everything outside the map block rays and motion.
  bool blocks(CellIndex c) const {
    return !contains(c) || cells_[index(c)] != CellState::kFree;
  }
  bool is_free(Point2D p) const { return !blocks(world_to_cell(p)); }

  CellIndex world_to_cell(Point2D p) const {
    return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
            static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
  }
  Point2D cell_center(CellIndex c) const {
    return {origin_.x + (c.x + 0.5) * resolution_,
            origin_.y + (c.y + 0.5) * resolution_};
  }

  // Marks every cell whose center lies inside `r` with state `s`.
  void fill_rect(const Rect& r, CellState s);

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  int width_;
  int height_;
  double resolution_;
  Point2D origin_;
  std::vector<CellState> cells_;
};

// Text grid format:
//   GRID <width> <height> <resolution> <origin_x> <origin_y>\n
//   <height rows of <width> chars from {'.', '#', '?'}, top row first, each
//   terminated by '\n'>
OccupancyGrid ParseGrid(std::string_view text);
std::string FormatGrid(const OccupancyGrid& grid);
OccupancyGrid LoadMap(const std::filesystem::path& path);
void SaveMap(const OccupancyGrid& grid, const std::filesystem::path& path);

// Visits every cell pierced by the segment a->b in order, starting with the
// cell containing a. The visitor receives the cell and the distance along the
// segment at which the segment enters it, and returns false to stop.
// Returns false if the visitor stopped the walk.
template <typename Visitor>
bool TraverseSegment(const OccupancyGrid& grid, Point2D a, Point2D b,
                     Visitor&& visit);

// Distance from `origin` along `angle` to the boundary of the first blocking
// cell, capped at max_range. Throws if the origin is outside the map or in a
// blocking cell.
double Raycast(const OccupancyGrid& grid, Point2D origin, double angle,
               double max_range);

// True when every cell pierced by the segment a->b is free.
bool LineOfSight(const OccupancyGrid& grid, Point2D a, Point2D b);

// Euclidean distance (meters, between cell centers) from every cell to the
// nearest cell for which `is_obstacle` holds. Cells are visited in storage
// order. Returns +inf everywhere when there is no obstacle.
template <typename Predicate>
std::vector<double> DistanceTransform(const OccupancyGrid& grid,
                                      Predicate&& is_obstacle);

// Distance from `origin` along `angle` to the first intersection with a
// disc, or +inf if the ray misses it.
double RayDiscDistance(Point2D origin, double angle, Point2D center,
                       double radius);

struct Waypoint {
  double t = 0.0;
  Point2D position;
};

// Person modelled as a disc that follows a piecewise-linear schedule.
struct HumanAgent {
  int id = 0;
  Pose2D pose;
  double radius = 0.25;
  std::vector<Waypoint> schedule;
};

// Validates radius > 0 and strictly increasing schedule times.
void ValidateHuman(const HumanAgent& agent);

// Places every agent at its schedule position for time t. Agents hold the
// first waypoint before the schedule starts and the last one after it ends;
// an empty schedule leaves the agent where it is.
std::vector<HumanAgent> StepHumans(std::vector<HumanAgent> agents, double t);

// ---------------------------------------------------------------------------

template <typename Visitor>
bool TraverseSegment(const OccupancyGrid& grid, Point2D a, Point2D b,
                     Visitor&& visit) {
  const double res = grid.resolution();
  const Point2D origin = grid.origin();
  const double gx = (a.x - origin.x) / res;
  const double gy = (a.y - origin.y) / res;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double length = std::hypot(dx, dy);

  CellIndex cell{static_cast<int>(std::floor(gx)),
                 static_cast<int>(std::floor(gy))};
  if (!visit(cell, 0.0)) return false;
  if (length == 0.0) return true;

  // Parametrize by distance in meters.
  const double ux = dx / length;
  const double uy = dy / length;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int step_x = ux > 0 ? 1 : -1;
  const int step_y = uy > 0 ? 1 : -1;
  const double delta_x = ux != 0.0 ? res / std::abs(ux) : kInf;
  const double delta_y = uy != 0.0 ? res / std::abs(uy) : kInf;
  double next_x = kInf;
  double next_y = kInf;
  if (ux > 0) next_x = (std::floor(gx) + 1.0 - gx) * res / ux;
  if (ux < 0) next_x = (gx - std::floor(gx)) * res / -ux;
  if (uy > 0) next_y = (std::floor(gy) + 1.0 - gy) * res / uy;
  if (uy < 0) next_y = (gy - std::floor(gy)) * res / -uy;

  while (true) {
    double t;
    if (next_x < next_y) {
      t = next_x;
      cell.x += step_x;
      next_x += delta_x;
    } else {
      t = next_y;
      cell.y += step_y;
      next_y += delta_y;
    }
    if (t >= length) return true;
    if (!visit(cell, t)) return false;
  }
}

template <typename Predicate>
std::vector<double> DistanceTransform(const OccupancyGrid& grid,
                                      Predicate&& is_obstacle) {
  // Felzenszwalb-Huttenlocher lower envelope of parabolas, one pass per axis,
  // on squared distances in cell units.
  const int w = grid.width();
  const int h = grid.height();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> sq(grid.size(), kInf);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (is_obstacle(grid.cell_of(i))) sq[i] = 0.0;
  }

  const int n_max = std::max(w, h);
  std::vector<double> f(n_max), d(n_max), z(n_max + 1);
  std::vector<int> v(n_max);
  auto pass = [&](int n) {
    int k = 0;
    int first = 0;
    while (first < n && f[first] == kInf) ++first;
    if (first == n) {
      for (int q = 0; q < n; ++q) d[q] = kInf;
      return;
    }
    v[0] = first;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = first + 1; q < n; ++q) {
      if (f[q] == kInf) continue;
      auto intersect = [&](int p) {
        return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) /
               (2.0 * (q - p));
      };
      double s = intersect(v[k]);
      while (s <= z[k]) {  // z[0] is -inf, so this stops at k == 0
        --k;
        s = intersect(v[k]);
      }
      ++k;
      v[k] = q;
      z[k] = s;
      z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
      while (z[k + 1] < q) ++k;
      const double diff = q - v[k];
      d[q] = diff * diff + f[v[k]];
    }
  };

  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = sq[static_cast<std::size_t>(y) * w + x];
    pass(h);
    for (int y = 0; y < h; ++y) sq[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[x] = sq[static_cast<std::size_t>(y) * w + x];
    pass(w);
    for (int x = 0; x < w; ++x) sq[static_cast<std::size_t>(y) * w + x] = d[x];
  }

  const double res = grid.resolution();
  for (double& value : sq) value = value == kInf ? kInf : std::sqrt(value) * res;
  return sq;
}

}  // namespace uvbot

#endif  // UVBOT_WORLD_HPP_
