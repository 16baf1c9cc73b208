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

#include "uvbot/localization.hpp"

namespace uvbot {
namespace {

OccupancyGrid Corridor() {
  // 8 x 2 m corridor with an alcove so the two ends differ.
  OccupancyGrid g(170, 50, 0.05, {-0.25, -0.25});
  g.fill_rect({-0.25, -0.25, 8.25, 0.0}, CellState::kOccupied);
  g.fill_rect({-0.25, 2.0, 8.25, 2.25}, CellState::kOccupied);
  g.fill_rect({-0.25, -0.25, 0.0, 2.25}, CellState::kOccupied);
  g.fill_rect({8.0, -0.25, 8.25, 2.25}, CellState::kOccupied);
  g.fill_rect({2.0, 1.4, 2.6, 2.0}, CellState::kOccupied);
  return g;
}

ParticleSet Identical(const Pose2D& pose, int n, std::uint64_t seed = 1) {
  return ParticleSet(std::vector<Particle>(n, Particle{pose, 1.0 / n}), seed);
}

TEST(LikelihoodFieldTest, SingleCellMatchesEuclidean) {
  OccupancyGrid g(10, 10, 0.1);
  g.set({3, 6}, CellState::kOccupied);
  const LikelihoodField field(g);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) {
      EXPECT_NEAR(field.distance_at(CellIndex{x, y}), 0.1 * std::hypot(x - 3, y - 6), 1e-12);
    }
  }
}

TEST(LikelihoodFieldTest, AllOccupiedIsZeroAndEmptyThrows) {
  const LikelihoodField full(OccupancyGrid(5, 4, 0.1, {}, CellState::kOccupied));
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 5; ++x) EXPECT_EQ(full.distance_at(CellIndex{x, y}), 0.0);
  EXPECT_THROW(LikelihoodField(OccupancyGrid(5, 4, 0.1)), Error);
}

TEST(LikelihoodFieldTest, LipschitzOnCorridor) {
  const OccupancyGrid g = Corridor();
  const LikelihoodField field(g);
  const double bound = g.resolution() * std::sqrt(2.0) + 1e-12;
  for (int y = 0; y + 1 < g.height(); ++y) {
    for (int x = 0; x + 1 < g.width(); ++x) {
      const double d = field.distance_at(CellIndex{x, y});
      ASSERT_GE(d, 0.0);
      EXPECT_LE(std::abs(d - field.distance_at(CellIndex{x + 1, y})), bound);
      EXPECT_LE(std::abs(d - field.distance_at(CellIndex{x, y + 1})), bound);
      EXPECT_LE(std::abs(d - field.distance_at(CellIndex{x + 1, y + 1})), bound);
    }
  }
}

TEST(MotionUpdateTest, ZeroDeltaZeroNoiseIsIdentity) {
  ParticleSet set = ParticleSet::Gaussian({1, 1, 0.3}, 0.2, 0.2, 100, 4);
  const ParticleSet before = set;
  MotionUpdate(set, {0, 0, 0.1}, {});
  EXPECT_TRUE(set == before);
}

TEST(MotionUpdateTest, ShiftAlongOwnHeading) {
  ParticleSet set = ParticleSet::Gaussian({1, 1, 0.3}, 0.2, 2.0, 100, 4);
  const ParticleSet before = set;
  MotionUpdate(set, {1.0, 0.0, 1.0}, {});
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Pose2D& a = before.particles()[i].pose;
    const Pose2D& b = set.particles()[i].pose;
    EXPECT_NEAR(b.x - a.x, std::cos(a.theta), 1e-12);
    EXPECT_NEAR(b.y - a.y, std::sin(a.theta), 1e-12);
    EXPECT_EQ(set.particles()[i].weight, before.particles()[i].weight);
  }
}

TEST(MotionUpdateTest, NoiseIncreasesVariance) {
  auto var = [](const ParticleSet& s) {
    double mx = 0, my = 0;
    for (const auto& p : s.particles()) mx += p.pose.x, my += p.pose.y;
    mx /= s.size();
    my /= s.size();
    double v = 0;
    for (const auto& p : s.particles())
      v += (p.pose.x - mx) * (p.pose.x - mx) + (p.pose.y - my) * (p.pose.y - my);
    return v / s.size();
  };
  ParticleSet set = ParticleSet::Gaussian({0, 0, 0}, 0.05, 0.02, 500, 8);
  const double v0 = var(set);
  MotionUpdate(set, {0.5, 0.2, 1.0}, {0.1, 0.1});
  EXPECT_GT(var(set), v0);
  EXPECT_THROW(MotionUpdate(set, {1, 0, 0.0}, {}), Error);
}

Scan TrueScan(const OccupancyGrid& g, const Pose2D& pose, std::uint64_t seed = 3) {
  Rng rng(seed);
  LidarConfig lidar;
  lidar.max_range = 6.0;
  return SimulateLidar(g, pose, lidar, rng);
}

TEST(MeasurementUpdateTest, WeightsSumToOne) {
  const OccupancyGrid g = Corridor();
  const LikelihoodField field(g);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ParticleSet set = ParticleSet::Uniform(field, 300, seed);
    for (int i = 0; i < 5; ++i) {
      const Scan scan = TrueScan(g, {1.0 + i, 1.0, 0.2 * i}, seed + i);
      MeasurementUpdate(set, scan, field, {});
      double sum = 0.0;
      for (const auto& p : set.particles()) {
        ASSERT_GE(p.weight, 0.0);
        sum += p.weight;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(MeasurementUpdateTest, AllAtTruePoseGivesUniform) {
  const OccupancyGrid g = Corridor();
  const LikelihoodField field(g);
  ParticleSet set = Identical({3, 1, 0.5}, 50);
  MeasurementUpdate(set, TrueScan(g, {3, 1, 0.5}), field, {});
  for (const auto& p : set.particles()) EXPECT_NEAR(p.weight, 1.0 / 50, 1e-12);
}

TEST(MeasurementUpdateTest, OnPoseBeatsOffsetPose) {
  const OccupancyGrid g = Corridor();
  const LikelihoodField field(g);
  ParticleSet set({{{4, 1, 0}, 0.5}, {{6, 1, 0}, 0.5}}, 1);
  MeasurementUpdate(set, TrueScan(g, {4, 1, 0}), field, {});
  EXPECT_GT(set.particles()[0].weight, set.particles()[1].weight);
}

TEST(MeasurementUpdateTest, MaxRangeOnlyScanIsUninformative) {
  const OccupancyGrid g = Corridor();
  const LikelihoodField field(g);
  ParticleSet set({{{4, 1, 0}, 0.25}, {{6, 1, 0}, 0.25}, {{1, 1, 2}, 0.25}, {{7, 0.5, -1}, 0.25}}, 1);
  Scan scan;
  scan.max_range = 3.0;
  scan.angles = LidarBearings({});
  scan.ranges.assign(scan.angles.size(), 3.0);
  EXPECT_EQ(MeasurementUpdate(set, scan, field, {}), MeasurementStatus::kUpdated);
  for (const auto& p : set.particles()) EXPECT_NEAR(p.weight, 0.25, 1e-12);
}

TEST(MeasurementUpdateTest, UnderflowResetsFilter) {
  const OccupancyGrid g = Corridor();
  const LikelihoodField field(g);
  ParticleSet set(std::vector<Particle>(20, Particle{{4, 1, 0}, 0.0}), 2);
  EXPECT_EQ(MeasurementUpdate(set, TrueScan(g, {4, 1, 0}), field, {}),
            MeasurementStatus::kFilterReset);
  EXPECT_NEAR(set.weight_sum(), 1.0, 1e-9);
}

TEST(ResampleTest, SevenThreeSplit) {
  std::vector<double> w(10, 0.0);
  w[0] = 0.7;
  w[1] = 0.3;
  const auto idx = SystematicResample(w, 0.05);
  EXPECT_EQ(std::count(idx.begin(), idx.end(), 0u), 7);
  EXPECT_EQ(std::count(idx.begin(), idx.end(), 1u), 3);
}

TEST(ResampleTest, CountsWithinFloorAndCeil) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 5 + trial % 40;
    std::vector<double> w(n);
    double sum = 0;
    for (double& x : w) sum += (x = u(rng) * u(rng));
    for (double& x : w) x /= sum;
    const auto idx = SystematicResample(w, u(rng) / n);
    ASSERT_EQ(idx.size(), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto c = std::count(idx.begin(), idx.end(), static_cast<std::size_t>(i));
      EXPECT_GE(c, std::floor(n * w[i] - 1e-9));
      EXPECT_LE(c, std::ceil(n * w[i] + 1e-9));
    }
  }
}

TEST(ResampleTest, UniformWeightsUntouched) {
  ParticleSet set = ParticleSet::Gaussian({0, 0, 0}, 1, 1, 64, 3);
  const ParticleSet before = set;
  EXPECT_FALSE(Resample(set));
  EXPECT_TRUE(set == before);
}

TEST(ResampleTest, SingleHeavyParticleIsCopied) {
  std::vector<Particle> ps(30, Particle{{0, 0, 0}, 0.0});
  for (int i = 0; i < 30; ++i) ps[i].pose.x = i;
  ps[17].weight = 1.0;
  ParticleSet set(ps, 1);
  EXPECT_TRUE(Resample(set));
  ASSERT_EQ(set.size(), 30u);
  for (const auto& p : set.particles()) {
    EXPECT_EQ(p.pose.x, 17.0);
    EXPECT_DOUBLE_EQ(p.weight, 1.0 / 30);
  }
}

TEST(ResampleTest, OutputsAreDrawnFromInput) {
  std::mt19937_64 rng(11);
  std::exponential_distribution<double> e(1.0);
  std::vector<Particle> ps(100);
  double sum = 0;
  for (int i = 0; i < 100; ++i) {
    ps[i].pose.x = i;
    ps[i].weight = std::pow(e(rng), 4);
    sum += ps[i].weight;
  }
  for (auto& p : ps) p.weight /= sum;
  ParticleSet set(ps, 2);
  Resample(set);
  ASSERT_EQ(set.size(), 100u);
  for (const auto& p : set.particles()) {
    const int i = static_cast<int>(p.pose.x);
    EXPECT_GT(ps[i].weight, 0.0);
  }
}

TEST(EstimateTest, IdenticalParticles) {
  const PoseEstimate e = Estimate(Identical({1.5, -2, 0.7}, 10));
  EXPECT_NEAR(e.pose.x, 1.5, 1e-12);
  EXPECT_NEAR(e.pose.y, -2.0, 1e-12);
  EXPECT_NEAR(e.pose.theta, 0.7, 1e-12);
  EXPECT_NEAR(e.covariance.norm(), 0.0, 1e-12);
}

TEST(EstimateTest, CircularMeanWraps) {
  ParticleSet set({{{0, 0, 3.1}, 0.5}, {{0, 0, -3.1}, 0.5}}, 1);
  const PoseEstimate e = Estimate(set);
  EXPECT_NEAR(std::abs(e.pose.theta), kPi, 1e-9);
  EXPECT_NEAR(e.covariance(2, 2), std::pow(kPi - 3.1, 2), 1e-9);
}

TEST(EstimateTest, UniformSegmentVariance) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Particle> ps(5000);
  for (auto& p : ps) p = {{u(rng), 0, 0}, 1.0 / 5000};
  const PoseEstimate e = Estimate(ParticleSet(ps, 1));
  EXPECT_NEAR(e.covariance(0, 0), 1.0 / 12, 0.1 / 12);
}

TEST(ParticleSetTest, DeterministicForSeed) {
  const LikelihoodField field(Corridor());
  ParticleSet a = ParticleSet::Uniform(field, 200, 42);
  ParticleSet b = ParticleSet::Uniform(field, 200, 42);
  EXPECT_TRUE(a == b);
  for (auto* s : {&a, &b}) {
    MotionUpdate(*s, {0.3, 0.1, 0.1}, {0.05, 0.05});
    MeasurementUpdate(*s, TrueScan(Corridor(), {3, 1, 0}), field, {});
    Resample(*s);
  }
  EXPECT_TRUE(a == b);
}

}  // namespace
}  // namespace uvbot
