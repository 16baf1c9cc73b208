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

#ifndef UVBOT_SAFETY_HPP_
#define UVBOT_SAFETY_HPP_

#include <array>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "uvbot/geometry.hpp"
#include "uvbot/robot.hpp"
#include "uvbot/world.hpp"

namespace uvbot {

struct GuardParams {
  double stop_distance = 0.35;
  double slow_distance = 0.7;
  double sector_halfangle = kPi / 3.0;
  // Speed cap at the edge of the slow zone; it falls linearly to zero at
  // stop_distance.
  double max_speed = 0.6;
};

// Low-level collision guard on raw ranges. Only readings within the sector
// around the direction of travel count. Below stop_distance the twist is
// zeroed, inside the slow zone |v| is capped linearly, otherwise the command
// passes through. Pure rotations always pass. Idempotent.
Twist CollisionGuard(const Twist& commanded, const Scan& scan,
                     const UltrasonicReading& ultrasonic,
                     const GuardParams& params);

// Smallest range inside the travel sector, +inf if none.
double SectorMinRange(double direction, const Scan& scan,
                      const UltrasonicReading& ultrasonic, double halfangle);

enum class Side { kLeft, kRight };

std::string_view ToString(Side side);

struct LampBank {
  Side side = Side::kLeft;
  int requested = 0;  // lamps the operator asked for, 0..4
  int lamps_on = 0;   // lamps actually lit, 0..4
  double last_hazard_time = -std::numeric_limits<double>::infinity();
};

using LampBanks = std::array<LampBank, 2>;

LampBanks MakeBanks(int left_lamps, int right_lamps);

// True when `point` lies strictly inside the 180-degree emission sector of
// `side`: left is the robot's +y half-plane, right its -y half-plane.
bool InHalfPlane(const Pose2D& robot, Side side, Point2D point);

struct InterlockParams {
  double safety_radius = 3.0;
  double holdoff = 3.0;
};

// A point is in a bank's hazard zone when it is in that bank's half-plane,
// within safety_radius of the robot and visible from the robot center.
bool InHazardZone(const Pose2D& robot, Side side, Point2D point,
                  const OccupancyGrid& grid, double safety_radius);

// Switches off, in the same tick, any bank with a detected person in its
// hazard zone. A bank comes back to its requested level once its zone has
// been clear for `holdoff` seconds.
LampBanks LampInterlock(LampBanks banks, std::span<const Point2D> detected,
                        const Pose2D& robot, const OccupancyGrid& grid,
                        const InterlockParams& params, double now);

struct CameraSector {
  double center = 0.0;     // bearing in the robot frame
  double halfwidth = 0.0;  // radians
};

struct DetectionParams {
  double detect_range = 5.0;
  std::vector<CameraSector> sectors = {
      {0.0, kPi / 4}, {kPi / 2, kPi / 4}, {kPi, kPi / 4}, {-kPi / 2, kPi / 4}};
  double miss_rate = 0.0;
};

// Indices of the humans seen by the cameras: within range, inside a camera
// sector and with a clear line of sight to the disc center. A nonzero
// miss_rate drops detections at random using `rng`.
std::vector<std::size_t> DetectHumans(std::span<const HumanAgent> humans,
                                      const Pose2D& robot,
                                      const DetectionParams& params,
                                      const OccupancyGrid& grid, Rng* rng = nullptr);

enum class LedStatus { kWaiting, kMovingToGoal, kAvoidingObstacle, kSystemError };

std::string_view ToString(LedStatus status);

LedStatus ComputeLedStatus(bool has_goal, bool avoiding, bool error);

}  // namespace uvbot

#endif  // UVBOT_SAFETY_HPP_
