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

#include "uvbot/safety.hpp"

#include <algorithm>
#include <cmath>

namespace uvbot {

double SectorMinRange(double direction, const Scan& scan,
                      const UltrasonicReading& ultrasonic, double halfangle) {
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](double bearing, double range) {
    if (std::abs(NormalizeAngle(bearing - direction)) <= halfangle) {
      best = std::min(best, range);
    }
  };
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    // Max-range readings mean "nothing seen".
    if (scan.ranges[i] < scan.max_range) consider(scan.angles[i], scan.ranges[i]);
  }
  for (std::size_t i = 0; i < ultrasonic.ranges.size(); ++i) {
    consider(ultrasonic.bearings[i], ultrasonic.ranges[i]);
  }
  return best;
}

Twist CollisionGuard(const Twist& commanded, const Scan& scan,
                     const UltrasonicReading& ultrasonic,
                     const GuardParams& params) {
  if (commanded.v == 0.0) return commanded;
  const double direction = commanded.v > 0.0 ? 0.0 : kPi;
  const double nearest =
      SectorMinRange(direction, scan, ultrasonic, params.sector_halfangle);
  if (nearest < params.stop_distance) return {};
  if (nearest < params.slow_distance) {
    const double cap = params.max_speed * (nearest - params.stop_distance) /
                       (params.slow_distance - params.stop_distance);
    Twist out = commanded;
    out.v = std::clamp(out.v, -cap, cap);
    return out;
  }
  return commanded;
}

std::string_view ToString(Side side) {
  return side == Side::kLeft ? "left" : "right";
}

LampBanks MakeBanks(int left_lamps, int right_lamps) {
  auto clamp = [](int n) { return std::clamp(n, 0, 4); };
  LampBanks banks;
  banks[0] = {Side::kLeft, clamp(left_lamps), clamp(left_lamps)};
  banks[1] = {Side::kRight, clamp(right_lamps), clamp(right_lamps)};
  return banks;
}

bool InHalfPlane(const Pose2D& robot, Side side, Point2D point) {
  const double lateral = ToLocal(robot, point).y;
  return side == Side::kLeft ? lateral > 0.0 : lateral < 0.0;
}

bool InHazardZone(const Pose2D& robot, Side side, Point2D point,
                  const OccupancyGrid& grid, double safety_radius) {
  return InHalfPlane(robot, side, point) &&
         Distance(robot.position(), point) <= safety_radius &&
         LineOfSight(grid, robot.position(), point);
}

LampBanks LampInterlock(LampBanks banks, std::span<const Point2D> detected,
                        const Pose2D& robot, const OccupancyGrid& grid,
                        const InterlockParams& params, double now) {
  if (!(params.safety_radius > 0.0)) throw Error("interlock: safety_radius must be > 0");
  for (LampBank& bank : banks) {
    const bool hazard = std::any_of(detected.begin(), detected.end(), [&](Point2D p) {
      return InHazardZone(robot, bank.side, p, grid, params.safety_radius);
    });
    if (hazard) {
      bank.lamps_on = 0;
      bank.last_hazard_time = now;
    } else if (now - bank.last_hazard_time >= params.holdoff) {
      bank.lamps_on = bank.requested;
    }
  }
  return banks;
}

std::vector<std::size_t> DetectHumans(std::span<const HumanAgent> humans,
                                      const Pose2D& robot,
                                      const DetectionParams& params,
                                      const OccupancyGrid& grid, Rng* rng) {
  if (!(params.detect_range > 0.0)) throw Error("detect_humans: detect_range must be > 0");
  std::vector<std::size_t> seen;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < humans.size(); ++i) {
    const Point2D p = humans[i].pose.position();
    if (Distance(robot.position(), p) > params.detect_range) continue;
    const Point2D local = ToLocal(robot, p);
    const double bearing = std::atan2(local.y, local.x);
    const bool in_view = std::any_of(
        params.sectors.begin(), params.sectors.end(), [&](const CameraSector& s) {
          return std::abs(NormalizeAngle(bearing - s.center)) <= s.halfwidth + 1e-12;
        });
    if (!in_view || !LineOfSight(grid, robot.position(), p)) continue;
    if (params.miss_rate > 0.0 && rng != nullptr && unit(*rng) < params.miss_rate) continue;
    seen.push_back(i);
  }
  return seen;
}

std::string_view ToString(LedStatus status) {
  switch (status) {
    case LedStatus::kWaiting: return "waiting";
    case LedStatus::kMovingToGoal: return "moving_to_goal";
    case LedStatus::kAvoidingObstacle: return "avoiding_obstacle";
    case LedStatus::kSystemError: return "system_error";
  }
  return "system_error";
}

LedStatus ComputeLedStatus(bool has_goal, bool avoiding, bool error) {
  if (error) return LedStatus::kSystemError;
  if (avoiding) return LedStatus::kAvoidingObstacle;
  if (has_goal) return LedStatus::kMovingToGoal;
  return LedStatus::kWaiting;
}

}  // namespace uvbot
