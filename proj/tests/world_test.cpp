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
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "uvbot/world.hpp"

namespace uvbot {
namespace {

OccupancyGrid WallAtX(double wall_x) {
  OccupancyGrid g(200, 200, 0.05, {-5.0, -5.0});
  g.fill_rect({wall_x, -5.0, 5.0, 5.0}, CellState::kOccupied);
  return g;
}

TEST(GridTest, ParsesThreeByThreeFreeGrid) {
  const OccupancyGrid g = ParseGrid("GRID 3 3 0.5 0 0\n...\n...\n...\n");
  EXPECT_EQ(g.width(), 3);
  EXPECT_EQ(g.height(), 3);
  int free = 0;
  for (CellState s : g.cells()) free += s == CellState::kFree;
  EXPECT_EQ(free, 9);
}

TEST(GridTest, TopRowIsHighestY) {
  const OccupancyGrid g = ParseGrid("GRID 2 2 1 0 0\n#.\n.?\n");
  EXPECT_EQ(g.at({0, 1}), CellState::kOccupied);
  EXPECT_EQ(g.at({1, 1}), CellState::kFree);
  EXPECT_EQ(g.at({1, 0}), CellState::kUnknown);
}

TEST(GridTest, RejectsMalformedInput) {
  EXPECT_THROW(ParseGrid("GRID 4 4 0.05 0 0\n....\n....\n....\n...\n"), Error);
  EXPECT_THROW(ParseGrid("GRID 4 4 0.05 0 0\n....\n....\n....\n"), Error);
  EXPECT_THROW(ParseGrid("GRID 2 1 0.05 0 0\n.x\n"), Error);
  EXPECT_THROW(ParseGrid("GRD 1 1 0.05 0 0\n.\n"), Error);
  EXPECT_THROW(ParseGrid("GRID 1 1 -1 0 0\n.\n"), Error);
  EXPECT_THROW(ParseGrid("GRID 0 1 0.05 0 0\n\n"), Error);
}

TEST(GridTest, SaveLoadRoundTripIsBitExact) {
  std::mt19937_64 rng(3);
  OccupancyGrid g(17, 9, 0.05, {-1.25, 2.5});
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.set(g.cell_of(i), static_cast<CellState>(rng() % 3));
  }
  const auto path = std::filesystem::temp_directory_path() / "uvbot_roundtrip.grid";
  SaveMap(g, path);
  const OccupancyGrid back = LoadMap(path);
  EXPECT_EQ(back, g);
  std::ifstream in(path, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text, FormatGrid(g));
  EXPECT_EQ(FormatGrid(back), text);
  std::filesystem::remove(path);
}

TEST(GridTest, MissingFileNamesThePath) {
  try {
    LoadMap("/nonexistent/uvbot.grid");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/uvbot.grid"), std::string::npos);
  }
}

TEST(GridTest, WorldCellRoundTrip) {
  const OccupancyGrid g(40, 30, 0.05, {-1.0, 0.5});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(0.5, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Point2D p{ux(rng), uy(rng)};
    const Point2D c = g.cell_center(g.world_to_cell(p));
    EXPECT_LE(std::abs(c.x - p.x), 0.5 * g.resolution() + 1e-12);
    EXPECT_LE(std::abs(c.y - p.y), 0.5 * g.resolution() + 1e-12);
  }
}

TEST(RaycastTest, EmptyGridReturnsMaxRange) {
  const OccupancyGrid g(200, 200, 0.05, {-5.0, -5.0});
  for (double a = -3.0; a < 3.2; a += 0.37) EXPECT_DOUBLE_EQ(Raycast(g, {0, 0}, a, 5.0), 5.0);
}

TEST(RaycastTest, WallAheadWithinResolution) {
  const OccupancyGrid g = WallAtX(3.0);
  EXPECT_NEAR(Raycast(g, {0, 0}, 0.0, 10.0), 3.0, g.resolution());
}

TEST(RaycastTest, OriginInsideWallThrows) {
  const OccupancyGrid g = WallAtX(3.0);
  EXPECT_THROW(Raycast(g, {4.0, 0.0}, 0.0, 1.0), Error);
  EXPECT_THROW(Raycast(g, {40.0, 0.0}, 0.0, 1.0), Error);
}

TEST(RaycastTest, UnknownBlocks) {
  OccupancyGrid g(100, 10, 0.1);
  g.set({50, 5}, CellState::kUnknown);
  EXPECT_NEAR(Raycast(g, {0.55, 0.55}, 0.0, 9.0), 4.45, 1e-9);
}

TEST(RaycastTest, MonotoneInMaxRangeAndFreeBeforeHit) {
  std::mt19937_64 rng(11);
  OccupancyGrid g(80, 80, 0.05);
  std::uniform_int_distribution<int> cell(0, 79);
  for (int i = 0; i < 250; ++i) g.set({cell(rng), cell(rng)}, CellState::kOccupied);
  std::uniform_real_distribution<double> pos(0.1, 3.9), ang(-kPi, kPi);
  int checked = 0;
  while (checked < 300) {
    const Point2D o{pos(rng), pos(rng)};
    if (!g.is_free(o)) continue;
    ++checked;
    const double a = ang(rng);
    const double d1 = Raycast(g, o, a, 1.0);
    const double d2 = Raycast(g, o, a, 3.0);
    EXPECT_GE(d2 + 1e-12, d1);
    EXPECT_LE(d1, 1.0);
    // Dense sampling strictly before the hit never lands on a blocked cell.
    for (double s = 0.0; s < d2 - 1e-6; s += 0.002) {
      const Point2D p{o.x + s * std::cos(a), o.y + s * std::sin(a)};
      ASSERT_TRUE(g.is_free(p)) << "s=" << s << " d=" << d2;
    }
  }
}

TEST(LineOfSightTest, BlockedByWall) {
  const OccupancyGrid g = WallAtX(1.0);
  EXPECT_TRUE(LineOfSight(g, {0, 0}, {0.9, 0.5}));
  EXPECT_FALSE(LineOfSight(g, {0, 0}, {2.0, 0.0}));
}

TEST(RayDiscTest, AnalyticDistances) {
  EXPECT_NEAR(RayDiscDistance({0, 0}, 0.0, {2, 0}, 0.5), 1.5, 1e-12);
  EXPECT_TRUE(std::isinf(RayDiscDistance({0, 0}, kPi, {2, 0}, 0.5)));
  EXPECT_TRUE(std::isinf(RayDiscDistance({0, 0}, kPi / 2, {2, 0}, 0.5)));
}

TEST(DistanceTransformTest, MatchesBruteForce) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    OccupancyGrid g(10, 10, 0.1);
    const int n = trial == 0 ? 1 : 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) g.set({int(rng() % 10), int(rng() % 10)}, CellState::kOccupied);
    const auto d = DistanceTransform(g, [&](CellIndex c) { return g.at(c) == CellState::kOccupied; });
    for (std::size_t i = 0; i < g.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (g.cells()[j] != CellState::kOccupied) continue;
        best = std::min(best, Distance(g.cell_center(g.cell_of(i)), g.cell_center(g.cell_of(j))));
      }
      EXPECT_NEAR(d[i], best, 1e-12);
    }
  }
}

TEST(HumansTest, PiecewiseLinearSchedule) {
  HumanAgent h{1, {}, 0.25, {{0.0, {0, 0}}, {10.0, {10, 0}}}};
  std::vector<HumanAgent> agents{h};
  EXPECT_NEAR(StepHumans(agents, 5.0)[0].pose.x, 5.0, 1e-12);
  EXPECT_NEAR(StepHumans(agents, 20.0)[0].pose.x, 10.0, 1e-12);
  HumanAgent still{2, {1.0, 2.0, 0.3}, 0.25, {}};
  const auto out = StepHumans({still}, 7.0);
  EXPECT_EQ(out[0].pose, still.pose);
}

TEST(HumansTest, ValidatesRadiusAndTimes) {
  EXPECT_THROW(ValidateHuman({1, {}, 0.0, {}}), Error);
  EXPECT_THROW(ValidateHuman({1, {}, 0.2, {{1.0, {}}, {1.0, {}}}}), Error);
  EXPECT_NO_THROW(ValidateHuman({1, {}, 0.2, {{0.0, {}}, {1.0, {}}}}));
}

TEST(PoseTest, NormalizeAngleRange) {
  EXPECT_DOUBLE_EQ(NormalizeAngle(kPi), kPi);
  EXPECT_DOUBLE_EQ(NormalizeAngle(-kPi), kPi);
  EXPECT_NEAR(NormalizeAngle(3 * kPi + 0.1), -kPi + 0.1, 1e-12);
}

}  // namespace
}  // namespace uvbot
