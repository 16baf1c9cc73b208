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

#include "uvbot/robot.hpp"

#include <algorithm>
#include <cmath>

namespace uvbot {

namespace {

double Sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void CheckStartCell(const OccupancyGrid& grid, const Pose2D& pose) {
  const CellIndex c = grid.world_to_cell(pose.position());
  if (grid.blocks(c)) throw Error("sensor pose is not in free space");
}

double NearestDisc(Point2D origin, double angle, std::span<const Disc> discs) {
  double best = std::numeric_limits<double>::infinity();
  for (const Disc& d : discs) {
    best = std::min(best, RayDiscDistance(origin, angle, d.center, d.radius));
  }
  return best;
}

}  // namespace

void RobotConfig::validate() const {
  if (!(footprint_radius > 0 && max_linear_speed > 0 && max_angular_speed > 0 &&
        base_load >= 0 && lamp_power_per_lamp > 0)) {
    throw Error("robot config: physical quantities must be positive");
  }
  if (lamps_per_side != 4) throw Error("robot config: lamps_per_side must be 4");
  if (lidar.beam_count < 1 || !(lidar.max_range > 0) || !(lidar.fov > 0) ||
      lidar.fov > kTwoPi + 1e-9 || lidar.range_noise_sigma < 0 ||
      lidar.range_noise_per_m < 0) {
    throw Error("robot config: invalid lidar parameters");
  }
  if (ultrasonic.count < 1 || !(ultrasonic.max_range > 0) ||
      ultrasonic.cone_halfangle < 0) {
    throw Error("robot config: invalid ultrasonic parameters");
  }
}

Twist ClampTwist(Twist t, const RobotConfig& config) {
  t.v = std::clamp(t.v, -config.max_linear_speed, config.max_linear_speed);
  t.w = std::clamp(t.w, -config.max_angular_speed, config.max_angular_speed);
  return t;
}

Pose2D StepKinematics(const Pose2D& pose, const Twist& twist, double dt) {
  constexpr double kStraight = 1e-12;
  if (std::abs(twist.w) < kStraight) {
    return MakePose(pose.x + twist.v * dt * std::cos(pose.theta),
                    pose.y + twist.v * dt * std::sin(pose.theta), pose.theta);
  }
  // Chord of the arc: length v*dt*sinc(w*dt/2) along the mid-arc heading.
  const double half = 0.5 * twist.w * dt;
  const double chord = twist.v * dt * Sinc(half);
  const double mid = pose.theta + half;
  return MakePose(pose.x + chord * std::cos(mid), pose.y + chord * std::sin(mid),
                  pose.theta + twist.w * dt);
}

std::vector<double> LidarBearings(const LidarConfig& config) {
  std::vector<double> angles(config.beam_count);
  const int n = config.beam_count;
  if (config.fov >= kTwoPi - 1e-9) {
    for (int i = 0; i < n; ++i) angles[i] = NormalizeAngle(kTwoPi * i / n);
  } else if (n == 1) {
    angles[0] = 0.0;
  } else {
    for (int i = 0; i < n; ++i) {
      angles[i] = -0.5 * config.fov + config.fov * i / (n - 1);
    }
  }
  return angles;
}

Scan SimulateLidar(const OccupancyGrid& grid, const Pose2D& true_pose,
                   const LidarConfig& config, Rng& rng,
                   std::span<const Disc> discs, double timestamp) {
  CheckStartCell(grid, true_pose);
  Scan scan;
  scan.angles = LidarBearings(config);
  scan.max_range = config.max_range;
  scan.timestamp = timestamp;
  scan.ranges.resize(scan.angles.size());
  std::normal_distribution<double> noise(0.0, 1.0);
  const Point2D origin = true_pose.position();
  for (std::size_t i = 0; i < scan.angles.size(); ++i) {
    const double angle = true_pose.theta + scan.angles[i];
    double r = Raycast(grid, origin, angle, config.max_range);
    r = std::min(r, NearestDisc(origin, angle, discs));
    // A beam with no return reads exactly max_range; noise applies to hits.
    if (config.range_noise_sigma > 0.0 || config.range_noise_per_m > 0.0) {
      const double e = noise(rng);
      if (r < config.max_range) {
        r += (config.range_noise_sigma + config.range_noise_per_m * r) * e;
      }
    }
    scan.ranges[i] = std::clamp(r, 0.0, config.max_range);
  }
  return scan;
}

UltrasonicReading SimulateUltrasonic(const OccupancyGrid& grid,
                                     const Pose2D& true_pose,
                                     const UltrasonicConfig& config,
                                     std::span<const Disc> discs) {
  CheckStartCell(grid, true_pose);
  constexpr int kRaysPerCone = 5;
  UltrasonicReading reading;
  reading.ranges.resize(config.count);
  reading.bearings.resize(config.count);
  const Point2D origin = true_pose.position();
  for (int i = 0; i < config.count; ++i) {
    const double bearing = NormalizeAngle(kTwoPi * i / config.count);
    reading.bearings[i] = bearing;
    double best = config.max_range;
    for (int k = 0; k < kRaysPerCone; ++k) {
      const double offset =
          config.cone_halfangle * (2.0 * k / (kRaysPerCone - 1) - 1.0);
      const double angle = true_pose.theta + bearing + offset;
      best = std::min(best, Raycast(grid, origin, angle, config.max_range));
      best = std::min(best, NearestDisc(origin, angle, discs));
    }
    reading.ranges[i] = std::clamp(best, 0.0, config.max_range);
  }
  return reading;
}

double PowerDraw(int lamps_on, double lamp_power_per_lamp, double base_load) {
  return lamps_on * lamp_power_per_lamp + base_load;
}

BatteryState ConsumePower(BatteryState battery, int lamps_on, double base_load,
                          double dt, double lamp_power_per_lamp) {
  if (!(dt > 0.0)) throw Error("consume_power: dt must be > 0");
  const double used_wh = PowerDraw(lamps_on, lamp_power_per_lamp, base_load) * dt / 3600.0;
  battery.remaining = std::max(0.0, battery.remaining - used_wh);
  return battery;
}

}  // namespace uvbot
