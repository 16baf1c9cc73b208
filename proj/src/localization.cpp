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

#include "uvbot/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uvbot {

LikelihoodField::LikelihoodField(const OccupancyGrid& grid)
    : geometry_(grid) {
  bool any = false;
  for (CellState s : grid.cells()) any = any || s == CellState::kOccupied;
  if (!any) throw Error("likelihood field: map has no obstacles");
  distances_ = DistanceTransform(grid, [&](CellIndex c) {
    return grid.at(c) == CellState::kOccupied;
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.cells()[i] == CellState::kFree) free_cells_.push_back(i);
  }
}

double LikelihoodField::distance_at(Point2D p) const {
  const CellIndex c = geometry_.world_to_cell(p);
  if (!geometry_.contains(c)) return std::numeric_limits<double>::infinity();
  return distances_[geometry_.index(c)];
}

ParticleSet::ParticleSet(std::vector<Particle> particles, std::uint64_t seed)
    : particles_(std::move(particles)), rng_(seed) {
  if (particles_.empty()) throw Error("particle set must not be empty");
  for (const Particle& p : particles_) {
    if (!(p.weight >= 0.0)) throw Error("particle weights must be >= 0");
  }
}

ParticleSet ParticleSet::Uniform(const LikelihoodField& field, int n,
                                 std::uint64_t seed) {
  ParticleSet set(std::vector<Particle>(std::max(n, 1)), seed);
  set.reinitialize_uniform(field);
  return set;
}

ParticleSet ParticleSet::Gaussian(const Pose2D& pose, double sigma_xy,
                                  double sigma_theta, int n, std::uint64_t seed) {
  ParticleSet set(std::vector<Particle>(std::max(n, 1)), seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double w = 1.0 / set.size();
  for (Particle& p : set.particles_) {
    const double dx = sigma_xy * gauss(set.rng_);
    const double dy = sigma_xy * gauss(set.rng_);
    const double dt = sigma_theta * gauss(set.rng_);
    p = {MakePose(pose.x + dx, pose.y + dy, pose.theta + dt), w};
  }
  return set;
}

void ParticleSet::reinitialize_uniform(const LikelihoodField& field) {
  const auto free = field.free_cells();
  if (free.empty()) throw Error("particle init: map has no free cells");
  const OccupancyGrid& g = field.geometry();
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double w = 1.0 / particles_.size();
  for (Particle& p : particles_) {
    const CellIndex c = g.cell_of(free[pick(rng_)]);
    const double x = g.origin().x + (c.x + unit(rng_)) * g.resolution();
    const double y = g.origin().y + (c.y + unit(rng_)) * g.resolution();
    const double theta = -kPi + kTwoPi * unit(rng_);
    p = {MakePose(x, y, theta), w};
  }
}

double ParticleSet::weight_sum() const {
  double sum = 0.0;
  for (const Particle& p : particles_) sum += p.weight;
  return sum;
}

bool operator==(const ParticleSet& a, const ParticleSet& b) {
  if (a.particles_.size() != b.particles_.size() || a.rng_ != b.rng_) return false;
  for (std::size_t i = 0; i < a.particles_.size(); ++i) {
    if (!(a.particles_[i].pose == b.particles_[i].pose) ||
        a.particles_[i].weight != b.particles_[i].weight) {
      return false;
    }
  }
  return true;
}

void MotionUpdate(ParticleSet& set, const OdometryDelta& odom,
                  const MotionNoise& noise) {
  if (!(odom.dt > 0.0)) throw Error("motion_update: dt must be > 0");
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool noisy = noise.sigma_v > 0.0 || noise.sigma_w > 0.0;
  for (Particle& p : set.particles()) {
    Twist twist{odom.v, odom.w};
    if (noisy) {
      twist.v += noise.sigma_v * gauss(set.rng());
      twist.w += noise.sigma_w * gauss(set.rng());
    }
    p.pose = StepKinematics(p.pose, twist, odom.dt);
  }
}

MeasurementStatus MeasurementUpdate(ParticleSet& set, const Scan& scan,
                                    const LikelihoodField& field,
                                    const MeasurementParams& params) {
  const int stride = std::max(params.beam_subsample, 1);
  std::vector<Point2D> endpoints;
  for (std::size_t i = 0; i < scan.ranges.size(); i += stride) {
    const double r = scan.ranges[i];
    if (r >= scan.max_range || r <= 0.0) continue;
    endpoints.push_back({r * std::cos(scan.angles[i]), r * std::sin(scan.angles[i])});
  }

  const double norm = 1.0 / (params.sigma_hit * std::sqrt(kTwoPi));
  const double inv_two_var = 1.0 / (2.0 * params.sigma_hit * params.sigma_hit);
  const double rand_term = params.z_rand / scan.max_range;

  auto particles = set.particles();
  std::vector<double> log_w(particles.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < particles.size(); ++k) {
    const Pose2D& pose = particles[k].pose;
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    double log_like = 0.0;
    for (const Point2D& e : endpoints) {
      const Point2D world{pose.x + c * e.x - s * e.y, pose.y + s * e.x + c * e.y};
      const double d = field.distance_at(world);
      const double p = params.z_hit * norm * std::exp(-d * d * inv_two_var) + rand_term;
      log_like += std::log(p);
    }
    log_w[k] = particles[k].weight > 0.0
                   ? std::log(particles[k].weight) + log_like
                   : -std::numeric_limits<double>::infinity();
    max_log = std::max(max_log, log_w[k]);
  }

  double shifted_sum = 0.0;
  if (std::isfinite(max_log)) {
    for (double lw : log_w) shifted_sum += std::exp(lw - max_log);
  }
  const double log_total = std::isfinite(max_log) ? max_log + std::log(shifted_sum)
                                                  : max_log;
  if (!(log_total >= std::log(1e-300))) {
    set.reinitialize_uniform(field);
    return MeasurementStatus::kFilterReset;
  }
  for (std::size_t k = 0; k < particles.size(); ++k) {
    particles[k].weight = std::exp(log_w[k] - max_log) / shifted_sum;
  }
  return MeasurementStatus::kUpdated;
}

double EffectiveSampleSize(const ParticleSet& set) {
  double sum_sq = 0.0;
  for (const Particle& p : set.particles()) sum_sq += p.weight * p.weight;
  return sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
}

std::vector<std::size_t> SystematicResample(std::span<const double> weights,
                                            double offset) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> indices(n);
  const double step = 1.0 / n;
  double cumulative = weights.empty() ? 0.0 : weights[0];
  std::size_t i = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const double pointer = offset + m * step;
    while (pointer > cumulative && i + 1 < n) cumulative += weights[++i];
    indices[m] = i;
  }
  return indices;
}

bool Resample(ParticleSet& set) {
  const double n = static_cast<double>(set.size());
  if (!(EffectiveSampleSize(set) < n / 2.0)) return false;
  auto particles = set.particles();
  std::vector<double> weights(particles.size());
  for (std::size_t k = 0; k < particles.size(); ++k) weights[k] = particles[k].weight;
  std::uniform_real_distribution<double> start(0.0, 1.0 / n);
  const auto indices = SystematicResample(weights, start(set.rng()));
  std::vector<Particle> copy(particles.begin(), particles.end());
  for (std::size_t k = 0; k < particles.size(); ++k) {
    particles[k] = {copy[indices[k]].pose, 1.0 / n};
  }
  return true;
}

PoseEstimate Estimate(const ParticleSet& set) {
  double total = 0.0, mx = 0.0, my = 0.0, sc = 0.0, ss = 0.0;
  for (const Particle& p : set.particles()) {
    total += p.weight;
    mx += p.weight * p.pose.x;
    my += p.weight * p.pose.y;
    sc += p.weight * std::cos(p.pose.theta);
    ss += p.weight * std::sin(p.pose.theta);
  }
  if (!(total > 0.0)) throw Error("estimate: particle weights sum to zero");
  PoseEstimate est;
  est.pose = MakePose(mx / total, my / total, std::atan2(ss, sc));
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Particle& p : set.particles()) {
    const Eigen::Vector3d d(p.pose.x - est.pose.x, p.pose.y - est.pose.y,
                            NormalizeAngle(p.pose.theta - est.pose.theta));
    cov += p.weight * d * d.transpose();
  }
  est.covariance = cov / total;
  return est;
}

}  // namespace uvbot
