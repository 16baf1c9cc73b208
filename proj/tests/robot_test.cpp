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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "uvbot/robot.hpp"

namespace uvbot {
namespace {

OccupancyGrid OpenRoom() { return OccupancyGrid(200, 200, 0.05, {-5.0, -5.0}); }

TEST(KinematicsTest, SpecExamples) {
  EXPECT_EQ(StepKinematics({0, 0, 0}, {0, 0}, 1.0), Pose2D(0, 0, 0));
  const Pose2D a = StepKinematics({0, 0, 0}, {1, 0}, 2.0);
  EXPECT_NEAR(a.x, 2.0, 1e-12);
  EXPECT_NEAR(a.y, 0.0, 1e-12);
  const Pose2D b = StepKinematics({0, 0, 0}, {0, kPi / 2}, 1.0);
  EXPECT_NEAR(b.x, 0.0, 1e-12);
  EXPECT_NEAR(b.theta, kPi / 2, 1e-12);
}

TEST(KinematicsTest, QuarterCircle) {
  // Radius 1 m: v = 1, w = 1 for pi/2 seconds ends at (1, 1) facing +y.
  const Pose2D p = StepKinematics({0, 0, 0}, {1, 1}, kPi / 2);
  EXPECT_NEAR(p.x, 1.0, 1e-12);
  EXPECT_NEAR(p.y, 1.0, 1e-12);
  EXPECT_NEAR(p.theta, kPi / 2, 1e-12);
}

TEST(KinematicsTest, ArcConvergesToStraightLine) {
  const Pose2D s = StepKinematics({1, 2, 0.3}, {0.7, 0.0}, 1.5);
  const Pose2D a = StepKinematics({1, 2, 0.3}, {0.7, 1e-9}, 1.5);
  EXPECT_LT(Distance(s.position(), a.position()), 1e-6);
}

TEST(KinematicsTest, Compositional) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Pose2D p{u(rng) * 5, u(rng) * 5, u(rng) * kPi};
    const Twist tw{u(rng), u(rng) * 2};
    const double dt = 0.05 + std::abs(u(rng));
    const Pose2D twice = StepKinematics(StepKinematics(p, tw, dt), tw, dt);
    const Pose2D once = StepKinematics(p, tw, 2 * dt);
    EXPECT_NEAR(twice.x, once.x, 1e-9);
    EXPECT_NEAR(twice.y, once.y, 1e-9);
    EXPECT_NEAR(NormalizeAngle(twice.theta - once.theta), 0.0, 1e-9);
  }
}

TEST(TwistTest, ClampToLimits) {
  RobotConfig cfg;
  const Twist t = ClampTwist({5.0, -5.0}, cfg);
  EXPECT_DOUBLE_EQ(t.v, cfg.max_linear_speed);
  EXPECT_DOUBLE_EQ(t.w, -cfg.max_angular_speed);
}

TEST(LidarTest, EmptyRoomNoiselessReadsMaxRange) {
  LidarConfig cfg;
  cfg.range_noise_sigma = 0.0;
  Rng rng(1);
  const Scan scan = SimulateLidar(OpenRoom(), {0.3, -0.2, 1.0}, cfg, rng);
  ASSERT_EQ(scan.ranges.size(), 360u);
  for (double r : scan.ranges) EXPECT_DOUBLE_EQ(r, cfg.max_range);
}

TEST(LidarTest, WallNormalBeam) {
  OccupancyGrid g = OpenRoom();
  g.fill_rect({2.0, -5.0, 5.0, 5.0}, CellState::kOccupied);
  LidarConfig cfg;
  cfg.range_noise_sigma = 0.0;
  Rng rng(1);
  const Scan scan = SimulateLidar(g, {0, 0, 0}, cfg, rng);
  EXPECT_NEAR(scan.ranges[0], 2.0, g.resolution());
}

TEST(LidarTest, MissesStayAtMaxRangeUnderNoise) {
  LidarConfig cfg;
  cfg.range_noise_sigma = 0.2;
  Rng rng(2);
  const Scan scan = SimulateLidar(OpenRoom(), {0, 0, 0}, cfg, rng);
  for (double r : scan.ranges) EXPECT_DOUBLE_EQ(r, cfg.max_range);
}

TEST(LidarTest, DeterministicForSeed) {
  OccupancyGrid g = OpenRoom();
  g.fill_rect({1.0, -5.0, 5.0, 5.0}, CellState::kOccupied);
  LidarConfig cfg;
  Rng a(9), b(9);
  EXPECT_EQ(SimulateLidar(g, {0, 0, 0}, cfg, a).ranges, SimulateLidar(g, {0, 0, 0}, cfg, b).ranges);
}

TEST(LidarTest, NoiseTailWithinFourSigma) {
  OccupancyGrid g = OpenRoom();
  g.fill_rect({-5.0, -5.0, 5.0, -1.5}, CellState::kOccupied);
  g.fill_rect({1.2, -5.0, 5.0, 5.0}, CellState::kOccupied);
  LidarConfig cfg;
  cfg.range_noise_sigma = 0.03;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const Pose2D pose{0.1, 0.2, 0.4};
    const Scan scan = SimulateLidar(g, pose, cfg, rng);
    for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
      const double truth = Raycast(g, pose.position(), pose.theta + scan.angles[i], cfg.max_range);
      EXPECT_LE(scan.ranges[i], truth + 4 * cfg.range_noise_sigma);
      EXPECT_GE(scan.ranges[i], 0.0);
    }
  }
}

TEST(LidarTest, DiscsAreSeen) {
  LidarConfig cfg;
  cfg.range_noise_sigma = 0.0;
  Rng rng(1);
  const Disc person{{1.5, 0.0}, 0.25};
  const Scan scan = SimulateLidar(OpenRoom(), {0, 0, 0}, cfg, rng, {&person, 1});
  EXPECT_NEAR(scan.ranges[0], 1.25, 1e-9);
}

TEST(LidarTest, ThrowsInsideObstacle) {
  OccupancyGrid g = OpenRoom();
  g.fill_rect({-1, -1, 1, 1}, CellState::kOccupied);
  Rng rng(1);
  EXPECT_THROW(SimulateLidar(g, {0, 0, 0}, LidarConfig{}, rng), Error);
}

TEST(UltrasonicTest, EmptyRoomAllMax) {
  const UltrasonicReading r = SimulateUltrasonic(OpenRoom(), {0, 0, 0}, UltrasonicConfig{});
  ASSERT_EQ(r.ranges.size(), 10u);
  for (double v : r.ranges) EXPECT_DOUBLE_EQ(v, 2.0);
}

TEST(UltrasonicTest, WallAheadAndBehind) {
  OccupancyGrid g = OpenRoom();
  g.fill_rect({0.3, -5.0, 5.0, 5.0}, CellState::kOccupied);
  const UltrasonicReading ahead = SimulateUltrasonic(g, {0, 0, 0}, UltrasonicConfig{});
  EXPECT_NEAR(ahead.ranges[0], 0.3, 0.05);

  OccupancyGrid h = OpenRoom();
  h.fill_rect({-5.0, -5.0, -0.4, 5.0}, CellState::kOccupied);
  const UltrasonicReading behind = SimulateUltrasonic(h, {0, 0, 0}, UltrasonicConfig{});
  EXPECT_DOUBLE_EQ(behind.ranges[0], 2.0);
  EXPECT_NEAR(behind.ranges[5], 0.4, 0.05);
}

TEST(PowerTest, FourHoursOnOneSideExactlyDrains) {
  BatteryState b;
  b = ConsumePower(b, 4, 180.0, 4 * 3600.0);
  EXPECT_NEAR(b.remaining, 0.0, 1e-9);
  EXPECT_TRUE(b.depleted());
}

TEST(PowerTest, NoLoadUnchangedAndMoreLampsDrainFaster) {
  BatteryState b{1200, 700};
  EXPECT_DOUBLE_EQ(ConsumePower(b, 0, 0.0, 100.0).remaining, 700.0);
  EXPECT_LT(ConsumePower(b, 8, 180, 600).remaining, ConsumePower(b, 4, 180, 600).remaining);
  EXPECT_DOUBLE_EQ(ConsumePower(b, 8, 180, 1e6).remaining, 0.0);
  EXPECT_THROW(ConsumePower(b, 1, 1, 0.0), Error);
}

TEST(RobotConfigTest, Validation) {
  RobotConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.lamps_per_side = 3;
  EXPECT_THROW(cfg.validate(), Error);
}

}  // namespace
}  // namespace uvbot
