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
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "uvbot/planning.hpp"
#include "uvbot/sim.hpp"

namespace uvbot {
namespace {

void ExpectPoints(const std::vector<Point2D>& got, const std::vector<Point2D>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i].x, want[i].x, 1e-9) << "waypoint " << i;
    EXPECT_NEAR(got[i].y, want[i].y, 1e-9) << "waypoint " << i;
  }
}

TEST(SShapeTest, FourLanes) {
  const Trajectory t = GenerateSShape({0, 0, 4, 4}, 1.0, 0.5);
  EXPECT_EQ(t.kind, TrajectoryKind::kSShape);
  ExpectPoints(t.waypoints, {{0.5, 0.5}, {3.5, 0.5}, {3.5, 1.5}, {0.5, 1.5},
                             {0.5, 2.5}, {3.5, 2.5}, {3.5, 3.5}, {0.5, 3.5}});
}

TEST(SShapeTest, SingleLaneAndErrors) {
  EXPECT_EQ(GenerateSShape({0, 0, 4, 4}, 4.0, 0.5).waypoints.size(), 2u);
  EXPECT_THROW(GenerateSShape({0, 0, 4, 4}, 0.0, 0.5), Error);
}

TEST(RpsTest, RollingUpCornerSequence) {
  const Trajectory t = GenerateRps({0, 0, 4, 4}, 1.0, 0.5, SpiralDirection::kRollingUp);
  EXPECT_EQ(t.kind, TrajectoryKind::kRollingUpRps);
  ExpectPoints(t.waypoints, {{0.5, 0.5}, {3.5, 0.5}, {3.5, 3.5}, {0.5, 3.5}, {0.5, 1.5},
                             {2.5, 1.5}, {2.5, 2.5}, {1.5, 2.5}, {1.5, 2.0}});
}

TEST(RpsTest, UnfoldingIsReversal) {
  for (const Rect r : {Rect{0, 0, 4, 4}, Rect{0, 0, 6, 4.5}, Rect{-2, 1, 9, 4}}) {
    auto up = GenerateRps(r, 1.0, 0.45, SpiralDirection::kRollingUp).waypoints;
    const auto down = GenerateRps(r, 1.0, 0.45, SpiralDirection::kUnfolding).waypoints;
    std::reverse(up.begin(), up.end());
    ExpectPoints(down, up);
  }
}

TEST(RpsTest, SpacingSquareIsStub) {
  EXPECT_EQ(GenerateRps({0, 0, 1, 1}, 1.0, 0.0, SpiralDirection::kRollingUp).waypoints.size(), 2u);
}

// Fraction of the inset rectangle within `radius` of the polyline.
double SweptFraction(const std::vector<Point2D>& path, const Rect& inner, double radius) {
  auto seg_dist = [](Point2D p, Point2D a, Point2D b) {
    const Point2D ab = b - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    double t = len2 > 0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return Distance(p, a + t * ab);
  };
  int covered = 0, total = 0;
  const double step = 0.02;
  for (double y = inner.min_y + step / 2; y < inner.max_y; y += step) {
    for (double x = inner.min_x + step / 2; x < inner.max_x; x += step) {
      ++total;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (seg_dist({x, y}, path[i], path[i + 1]) <= radius + 1e-9) {
          ++covered;
          break;
        }
      }
    }
  }
  return static_cast<double>(covered) / total;
}

TEST(CoverageTest, WaypointsRespectInsetAndSweepCoversRect) {
  const double spacing = 1.0, inset = 0.45;
  for (const Rect r : {Rect{0, 0, 4, 4}, Rect{0, 0, 6, 4.5}, Rect{0, 0, 3.3, 7.1}}) {
    const Rect inner{r.min_x + inset, r.min_y + inset, r.max_x - inset, r.max_y - inset};
    for (TrajectoryKind kind : {TrajectoryKind::kSShape, TrajectoryKind::kRollingUpRps,
                                TrajectoryKind::kUnfoldingRps}) {
      const Trajectory t = GenerateCoverage(kind, r, spacing, inset);
      for (const Point2D& p : t.waypoints) {
        EXPECT_GE(p.x - r.min_x, inset - 1e-9);
        EXPECT_GE(r.max_x - p.x, inset - 1e-9);
        EXPECT_GE(p.y - r.min_y, inset - 1e-9);
        EXPECT_GE(r.max_y - p.y, inset - 1e-9);
      }
      EXPECT_GE(SweptFraction(t.waypoints, inner, spacing / 2), 0.99) << ToString(kind);
    }
  }
}

TEST(CoverageTest, KindNamesRoundTrip) {
  for (TrajectoryKind k : {TrajectoryKind::kSShape, TrajectoryKind::kRollingUpRps,
                           TrajectoryKind::kUnfoldingRps}) {
    EXPECT_EQ(ParseTrajectoryKind(ToString(k)), k);
  }
  EXPECT_THROW(ParseTrajectoryKind("zigzag"), Error);
}

TEST(PlanPathTest, StartEqualsGoal) {
  const Costmap cm(OccupancyGrid(40, 40, 0.1), {});
  const PlanResult r = PlanPath(cm, {2, 2}, {2, 2});
  ASSERT_EQ(r.status, PlanStatus::kOk);
  EXPECT_EQ(r.path.size(), 1u);
}

TEST(PlanPathTest, StraightLineInFreeSpace) {
  const OccupancyGrid g(140, 60, 0.05, {-1.0, -1.5});
  const Costmap cm(g, {});
  const PlanResult r = PlanPath(cm, {0, 0}, {5, 0});
  ASSERT_EQ(r.status, PlanStatus::kOk);
  EXPECT_NEAR(PathLength(r.path), 5.0, g.resolution());
}

using oracle::DijkstraCost;

TEST(PlanPathTest, UShapedWallMatchesDijkstra) {
  OccupancyGrid g(60, 60, 0.1);
  g.fill_rect({2.0, 1.5, 2.2, 4.5}, CellState::kOccupied);
  g.fill_rect({2.0, 4.3, 4.0, 4.5}, CellState::kOccupied);
  g.fill_rect({2.0, 1.5, 4.0, 1.7}, CellState::kOccupied);
  const Costmap cm(g, {0.15, 1.0, 0.3});
  const Point2D start{3.05, 3.05}, goal{0.55, 3.05};
  const PlanResult r = PlanPath(cm, start, goal, {.smooth = false});
  ASSERT_EQ(r.status, PlanStatus::kOk);
  EXPECT_NEAR(r.cost, DijkstraCost(cm, g.world_to_cell(start), g.world_to_cell(goal)), 1e-9);
}

TEST(PlanPathTest, AStarEqualsDijkstraOnRandomGrids) {
  std::mt19937_64 rng(2026);
  std::bernoulli_distribution wall(0.25);
  std::uniform_int_distribution<int> coord(0, 39);
  int solved = 0;
  for (int trial = 0; trial < 50; ++trial) {
    OccupancyGrid g(40, 40, 0.1);
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 40; ++x)
        if (wall(rng)) g.set({x, y}, CellState::kOccupied);
    const Costmap cm(g, {0.05, 2.0, 0.3});
    CellIndex s, t;
    do s = {coord(rng), coord(rng)}; while (cm.lethal(s));
    do t = {coord(rng), coord(rng)}; while (cm.lethal(t));
    const PlanResult r = PlanPath(cm, g.cell_center(s), g.cell_center(t), {.smooth = false});
    const double oracle = DijkstraCost(cm, s, t);
    if (std::isinf(oracle)) {
      EXPECT_EQ(r.status, PlanStatus::kUnreachable) << "trial " << trial;
    } else {
      ASSERT_EQ(r.status, PlanStatus::kOk) << "trial " << trial;
      EXPECT_NEAR(r.cost, oracle, 1e-9) << "trial " << trial;
      ++solved;
    }
  }
  EXPECT_GT(solved, 10);
}

TEST(PlanPathTest, SmoothedPathStaysClear) {
  OccupancyGrid g(100, 60, 0.05);
  g.fill_rect({2.0, 0.0, 2.3, 2.2}, CellState::kOccupied);
  const Costmap cm(g, {});
  const PlanResult r = PlanPath(cm, {0.5, 0.5}, {4.5, 0.5});
  ASSERT_EQ(r.status, PlanStatus::kOk);
  EXPECT_FALSE(PathBlocked(cm, r.path));
  EXPECT_GT(PathLength(r.path), 4.0 + 2 * 1.0);
}

TEST(PlanPathTest, OccupiedGoalUnreachable) {
  OccupancyGrid g(40, 40, 0.1);
  g.fill_rect({2, 2, 3, 3}, CellState::kOccupied);
  const Costmap cm(g, {});
  EXPECT_EQ(PlanPath(cm, {0.5, 0.5}, {2.5, 2.5}).status, PlanStatus::kUnreachable);
}

Scan ScanOf(const OccupancyGrid& world, const Pose2D& pose) {
  Rng rng(1);
  LidarConfig lidar;
  lidar.range_noise_sigma = 0.0;
  return SimulateLidar(world, pose, lidar, rng);
}

TEST(ReplanTest, NoNewObstacleLeavesPathAlone) {
  OccupancyGrid g(120, 80, 0.05);
  g.fill_rect({0, 0, 6, 0.05}, CellState::kOccupied);
  Costmap cm(g, {});
  const std::vector<Point2D> path{{0.5, 2.0}, {5.5, 2.0}};
  const ReplanResult r = ReplanOnObstacle(cm, ScanOf(g, {0.5, 2.0, 0}), path, {0.5, 2.0, 0});
  EXPECT_EQ(r.status, ReplanStatus::kUnchanged);
}

TEST(ReplanTest, DroppedObstacleCausesDetour) {
  const OccupancyGrid map(120, 80, 0.05);
  OccupancyGrid world = map;
  world.fill_rect({2.0, 1.8, 2.4, 2.2}, CellState::kOccupied);
  Costmap cm(map, {});
  const Pose2D pose{0.5, 2.0, 0};
  const std::vector<Point2D> path{{0.5, 2.0}, {5.5, 2.0}};
  const ReplanResult r = ReplanOnObstacle(cm, ScanOf(world, pose), path, pose);
  ASSERT_EQ(r.status, ReplanStatus::kReplanned);
  EXPECT_GT(PathLength(r.path), PathLength(path));
  // The detour clears everything the scan saw; the unseen back of the box
  // is handled by later scans.
  EXPECT_FALSE(PathBlocked(cm, r.path));
  for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
    for (double f = 0; f <= 1.0; f += 0.02) {
      EXPECT_TRUE(FootprintCollides(world, r.path[i] + f * (r.path[i + 1] - r.path[i]), 0.25) == false);
    }
  }
}

TEST(ReplanTest, BlockedCorridorIsUnreachable) {
  OccupancyGrid map(120, 24, 0.05);
  map.fill_rect({0, 0, 6, 0.05}, CellState::kOccupied);
  map.fill_rect({0, 1.15, 6, 1.2}, CellState::kOccupied);
  OccupancyGrid world = map;
  world.fill_rect({2.0, 0.05, 2.3, 1.15}, CellState::kOccupied);
  Costmap cm(map, {});
  const Pose2D pose{0.5, 0.6, 0};
  const std::vector<Point2D> path{{0.5, 0.6}, {5.5, 0.6}};
  EXPECT_EQ(ReplanOnObstacle(cm, ScanOf(world, pose), path, pose).status,
            ReplanStatus::kUnreachable);
}

TEST(CostmapTest, MarksDecay) {
  Costmap cm(OccupancyGrid(40, 40, 0.1), {});
  cm.mark_obstacle({2, 2});
  EXPECT_TRUE(cm.lethal(Point2D{2, 2}));
  cm.set_time(cm.params().obstacle_decay + 0.01);
  EXPECT_FALSE(cm.lethal(Point2D{2, 2}));
}

TEST(FollowTest, AlignedGoesStraight) {
  const std::vector<Point2D> path{{0, 0}, {5, 0}};
  FollowState st;
  const FollowResult r = Follow(path, {1, 0, 0}, {}, RobotConfig{}, st);
  EXPECT_NEAR(r.twist.w, 0.0, 1e-9);
  EXPECT_NEAR(r.twist.v, FollowParams{}.v_cruise, 1e-9);
}

TEST(FollowTest, ReversedTurnsInPlace) {
  const std::vector<Point2D> path{{0, 0}, {5, 0}};
  FollowState st;
  RobotConfig robot;
  const FollowResult r = Follow(path, {1, 0, kPi}, {}, robot, st);
  EXPECT_NEAR(r.twist.v, 0.0, 1e-9);
  EXPECT_NEAR(std::abs(r.twist.w), robot.max_angular_speed, 1e-9);
}

TEST(FollowTest, OutputWithinLimitsAndDoneAtGoal) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  const std::vector<Point2D> path{{0, 0}, {2, 1}, {2, 3}, {-1, 3}};
  RobotConfig robot;
  for (int i = 0; i < 500; ++i) {
    FollowState st;
    const FollowResult r = Follow(path, {u(rng), u(rng), u(rng)}, {.v_cruise = 5.0}, robot, st);
    EXPECT_LE(std::abs(r.twist.v), robot.max_linear_speed + 1e-12);
    EXPECT_LE(std::abs(r.twist.w), robot.max_angular_speed + 1e-12);
  }
  FollowState st;
  st.segment = path.size() - 2;
  const FollowResult done = Follow(path, {-1, 3.05, 0}, {}, robot, st);
  EXPECT_TRUE(done.done);
  EXPECT_EQ(done.twist, Twist{});
}

TEST(FollowTest, ClosedLoopCrossTrackError) {
  const std::vector<Point2D> path{{0, 0}, {20, 0}};
  RobotConfig robot;
  FollowState st;
  Pose2D pose{0, 0.3, 0.4};
  const double dt = 0.05;
  double worst_late = 0;
  for (int k = 0; k < 1200 && !st.done; ++k) {
    const FollowResult r = Follow(path, pose, {}, robot, st);
    pose = StepKinematics(pose, r.twist, dt);
    if (k * dt > 10.0) worst_late = std::max(worst_late, std::abs(pose.y));
  }
  EXPECT_LT(worst_late, 0.05);
}

}  // namespace
}  // namespace uvbot
