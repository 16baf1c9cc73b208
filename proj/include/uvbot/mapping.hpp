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

#ifndef UVBOT_MAPPING_HPP_
#define UVBOT_MAPPING_HPP_

#include <span>
#include <vector>

#include "uvbot/geometry.hpp"
#include "uvbot/robot.hpp"
#include "uvbot/world.hpp"

namespace uvbot {

struct LogOddsParams {
  double l_occ = 0.85;
  double l_free = 0.4;
  double clamp = 10.0;
};

// Occupancy evidence in log-odds form over a fixed raster.
class LogOddsMap {
 public:
  LogOddsMap(int width, int height, double resolution, Point2D origin,
             const LogOddsParams& params = {});
  static LogOddsMap Like(const OccupancyGrid& grid, const LogOddsParams& params = {});

  const OccupancyGrid& geometry() const { return geometry_; }
  const LogOddsParams& params() const { return params_; }
  double at(CellIndex c) const { return values_[geometry_.index(c)]; }
  std::span<const double> values() const { return values_; }

  // Cells above `threshold` are occupied, observed cells at or below it are
  // free and cells no beam has touched stay unknown.
  OccupancyGrid classify(double threshold = 0.0) const;

  friend void UpdateOccupancy(LogOddsMap& map, const Pose2D& pose, const Scan& scan);

 private:
  OccupancyGrid geometry_;
  LogOddsParams params_;
  std::vector<double> values_;
  std::vector<unsigned> stamp_;
  unsigned scan_count_ = 0;
};

// Every cell a beam passes through before its endpoint loses l_free, the
// endpoint cell of a beam shorter than max range gains l_occ; each cell is
// updated at most once per scan with hits taking priority. Values stay in
// [-clamp, clamp].
void UpdateOccupancy(LogOddsMap& map, const Pose2D& pose, const Scan& scan);

}  // namespace uvbot

#endif  // UVBOT_MAPPING_HPP_
