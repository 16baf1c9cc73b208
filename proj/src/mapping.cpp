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

#include "uvbot/mapping.hpp"

#include <algorithm>
#include <cmath>

namespace uvbot {

LogOddsMap::LogOddsMap(int width, int height, double resolution, Point2D origin,
                       const LogOddsParams& params)
    : geometry_(width, height, resolution, origin, CellState::kUnknown),
      params_(params),
      values_(geometry_.size(), 0.0),
      stamp_(geometry_.size(), 0) {
  if (!(params.l_occ > 0.0) || !(params.l_free > 0.0) || !(params.clamp > 0.0)) {
    throw Error("log-odds map: increments and clamp must be > 0");
  }
}

LogOddsMap LogOddsMap::Like(const OccupancyGrid& grid, const LogOddsParams& params) {
  return LogOddsMap(grid.width(), grid.height(), grid.resolution(), grid.origin(),
                    params);
}

OccupancyGrid LogOddsMap::classify(double threshold) const {
  OccupancyGrid out(geometry_.width(), geometry_.height(), geometry_.resolution(),
                    geometry_.origin(), CellState::kUnknown);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const CellIndex c = geometry_.cell_of(i);
    if (values_[i] > threshold) {
      out.set(c, CellState::kOccupied);
    } else if (stamp_[i] != 0) {
      out.set(c, CellState::kFree);
    }
  }
  return out;
}

void UpdateOccupancy(LogOddsMap& map, const Pose2D& pose, const Scan& scan) {
  if (scan.ranges.size() != scan.angles.size()) {
    throw Error("update_occupancy: ranges and angles differ in length");
  }
  const OccupancyGrid& g = map.geometry_;
  const unsigned stamp = ++map.scan_count_;
  // Two bits per cell for this scan: 1 = passed through, 2 = hit.
  std::vector<std::size_t> touched;
  std::vector<std::uint8_t> flags(g.size(), 0);
  const Point2D origin = pose.position();
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double r = std::clamp(scan.ranges[i], 0.0, scan.max_range);
    const double a = pose.theta + scan.angles[i];
    const Point2D end{origin.x + r * std::cos(a), origin.y + r * std::sin(a)};
    const bool hit = r < scan.max_range;
    const CellIndex end_cell = g.world_to_cell(end);
    TraverseSegment(g, origin, end, [&](CellIndex c, double) {
      if (!g.contains(c)) return false;
      if (hit && c == end_cell) return false;
      const std::size_t idx = g.index(c);
      if (flags[idx] == 0) touched.push_back(idx);
      flags[idx] |= 1;
      return true;
    });
    if (hit && g.contains(end_cell)) {
      const std::size_t idx = g.index(end_cell);
      if (flags[idx] == 0) touched.push_back(idx);
      flags[idx] |= 2;
    }
  }
  const LogOddsParams& p = map.params_;
  for (std::size_t idx : touched) {
    const double delta = (flags[idx] & 2) ? p.l_occ : -p.l_free;
    map.values_[idx] = std::clamp(map.values_[idx] + delta, -p.clamp, p.clamp);
    map.stamp_[idx] = stamp;
  }
}

}  // namespace uvbot
