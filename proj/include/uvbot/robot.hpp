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

#ifndef UVBOT_ROBOT_HPP_
#define UVBOT_ROBOT_HPP_

#include <random>
#include <span>
#include <vector>

#include "uvbot/geometry.hpp"
#include "uvbot/world.hpp"

namespace uvbot {

using Rng = std::mt19937_64;

struct LidarConfig {
  int beam_count = 360;
  double fov = kTwoPi;
  double max_range = 3.0;
  double range_noise_sigma = 0.03;
  // Extra sigma per meter of range (accuracy quoted as a percentage).
  double range_noise_per_m = 0.0;
};

struct UltrasonicConfig {
  int count = 10;
  double max_range = 2.0;
  double cone_halfangle = 0.26;
};

// Physical parameters of the platform. Sensor ranges are measured from the
// robot center.
struct RobotConfig {
  double footprint_radius = 0.25;
  double max_linear_speed = 0.6;
  double max_angular_speed = 1.0;
  LidarConfig lidar;
  UltrasonicConfig ultrasonic;
  // Drive and compute draw; with one bank on this gives exactly 4 h on a
  // full battery.
  double base_load = 180.0;
  double lamp_power_per_lamp = 30.0;
  int lamps_per_side = 4;

  void validate() const;
};

struct Twist {
  double v = 0.0;
  double w = 0.0;
  friend bool operator==(const Twist&, const Twist&) = default;
};

Twist ClampTwist(Twist t, const RobotConfig& config);

struct Scan {
  std::vector<double> ranges;
  std::vector<double> angles;  // beam bearings in the robot frame
  double max_range = 0.0;
  double timestamp = 0.0;
};

struct UltrasonicReading {
  std::vector<double> ranges;
  std::vector<double> bearings;
};

// Moving disc obstacles (people) that sensors see in addition to the grid.
struct Disc {
  Point2D center;
  double radius = 0.0;
};

// Unicycle motion with exact arc integration. Heading is normalized.
Pose2D StepKinematics(const Pose2D& pose, const Twist& twist, double dt);

// Beam bearings of the merged scan, evenly spaced over the configured field
// of view. A full circle starts at 0 and never repeats the +-pi bearing.
std::vector<double> LidarBearings(const LidarConfig& config);

// Merged 360-degree scan: per-beam raycast plus Gaussian range noise, clamped
// to [0, max_range].
Scan SimulateLidar(const OccupancyGrid& grid, const Pose2D& true_pose,
                   const LidarConfig& config, Rng& rng,
                   std::span<const Disc> discs = {}, double timestamp = 0.0);

// Ring of sensors; each reports the minimum of five rays spread over its cone.
UltrasonicReading SimulateUltrasonic(const OccupancyGrid& grid,
                                     const Pose2D& true_pose,
                                     const UltrasonicConfig& config,
                                     std::span<const Disc> discs = {});

struct BatteryState {
  double capacity = 1200.0;  // Wh
  double remaining = 1200.0;  // Wh

  bool depleted() const { return remaining <= 0.0; }
};

// Electrical load in watts for `lamps_on` lamps plus the base load.
double PowerDraw(int lamps_on, double lamp_power_per_lamp, double base_load);

// Drains (lamps_on * lamp_power + base_load) * dt, dt in seconds; floored at 0.
BatteryState ConsumePower(BatteryState battery, int lamps_on, double base_load,
                          double dt, double lamp_power_per_lamp = 30.0);

}  // namespace uvbot

#endif  // UVBOT_ROBOT_HPP_
