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

#ifndef UVBOT_LOCALIZATION_HPP_
#define UVBOT_LOCALIZATION_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "uvbot/geometry.hpp"
#include "uvbot/robot.hpp"
#include "uvbot/world.hpp"

namespace uvbot {

// Distance from every cell center to the nearest occupied cell center,
// together with the free cells used for uniform (re)initialization.
class LikelihoodField {
 public:
  // Throws when the grid has no occupied cell.
  explicit LikelihoodField(const OccupancyGrid& grid);

  // Distance in meters; +inf outside the map.
  double distance_at(Point2D p) const;
  double distance_at(CellIndex c) const { return distances_[geometry_.index(c)]; }

  const OccupancyGrid& geometry() const { return geometry_; }
  std::span<const std::size_t> free_cells() const { return free_cells_; }

 private:
  OccupancyGrid geometry_;
  std::vector<double> distances_;
  std::vector<std::size_t> free_cells_;
};

struct Particle {
  Pose2D pose;
  double weight = 0.0;
};

class ParticleSet {
 public:
  ParticleSet(std::vector<Particle> particles, std::uint64_t seed);

  // N particles spread uniformly over the field's free cells with uniform
  // headings.
  static ParticleSet Uniform(const LikelihoodField& field, int n,
                             std::uint64_t seed);
  // N particles drawn around `pose` with independent Gaussian errors.
  static ParticleSet Gaussian(const Pose2D& pose, double sigma_xy,
                              double sigma_theta, int n, std::uint64_t seed);

  std::size_t size() const { return particles_.size(); }
  std::span<const Particle> particles() const { return particles_; }
  std::span<Particle> particles() { return particles_; }
  Rng& rng() { return rng_; }

  void reinitialize_uniform(const LikelihoodField& field);
  double weight_sum() const;

  friend bool operator==(const ParticleSet& a, const ParticleSet& b);

 private:
  std::vector<Particle> particles_;
  Rng rng_;
};

struct OdometryDelta {
  double v = 0.0;
  double w = 0.0;
  double dt = 0.0;
};

struct MotionNoise {
  double sigma_v = 0.0;
  double sigma_w = 0.0;
};

struct MeasurementParams {
  double z_hit = 0.95;
  double z_rand = 0.05;
  double sigma_hit = 0.1;
  int beam_subsample = 10;
};

enum class MeasurementStatus { kUpdated, kFilterReset };

// Advances every particle with its own Gaussian-perturbed copy of the
// odometry twist. Weights are untouched.
void MotionUpdate(ParticleSet& set, const OdometryDelta& odom,
                  const MotionNoise& noise);

// Multiplies each weight by the likelihood-field probability of the
// subsampled beams and renormalizes. Max-range beams carry no information and
// are skipped. When the total weight underflows 1e-300 the set is
// reinitialized uniformly over free space.
MeasurementStatus MeasurementUpdate(ParticleSet& set, const Scan& scan,
                                    const LikelihoodField& field,
                                    const MeasurementParams& params);

double EffectiveSampleSize(const ParticleSet& set);

// Low-variance resampler: indices selected by N evenly spaced pointers that
// start at `offset` in [0, 1/N).
std::vector<std::size_t> SystematicResample(std::span<const double> weights,
                                            double offset);

// Systematic resampling gated on N_eff < N/2. Returns true if it resampled.
bool Resample(ParticleSet& set);

struct PoseEstimate {
  Pose2D pose;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
};

// Weighted mean with a circular mean for the heading; angular covariance
// terms use wrapped angle differences.
PoseEstimate Estimate(const ParticleSet& set);

}  // namespace uvbot

#endif  // UVBOT_LOCALIZATION_HPP_
