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


#include "uvbot/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <sstream>

namespace uvbot {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t SplitMix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Twist ScriptTwist(std::span<const ScriptStep> script, double t) {
  constexpr double kEps = 1e-9;
  for (const ScriptStep& step : script) {
    if (t + kEps >= step.start && t + kEps < step.start + step.duration) {
      return step.twist;
    }
  }
  return {};
}

// Planning grid for the unknown-map mode: unexplored space is optimistic.
OccupancyGrid UnknownAsFree(OccupancyGrid grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.cells()[i] == CellState::kUnknown) grid.set(grid.cell_of(i), CellState::kFree);
  }
  return grid;
}

bool HasOccupied(const OccupancyGrid& grid) {
  return std::any_of(grid.cells().begin(), grid.cells().end(),
                     [](CellState s) { return s == CellState::kOccupied; });
}

double RectDistance(const Rect& r, Point2D p) {
  const double dx = std::max({r.min_x - p.x, 0.0, p.x - r.max_x});
  const double dy = std::max({r.min_y - p.y, 0.0, p.y - r.max_y});
  return std::hypot(dx, dy);
}

// Obstacles due at t. One that would land within `clearance` of the robot is
// held back until the robot has moved away; once placed it stays until it
// vanishes.
std::vector<bool> ActiveObstacles(std::span<const TimedObstacle> obstacles, double t,
                                  const std::vector<bool>& previous, Point2D robot,
                                  double clearance) {
  std::vector<bool> active(obstacles.size(), false);
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const TimedObstacle& o = obstacles[i];
    if (!(t >= o.appear && t < o.vanish)) continue;
    active[i] = previous[i] || RectDistance(o.rect, robot) > clearance;
  }
  return active;
}

OccupancyGrid BuildWorld(const OccupancyGrid& map, std::span<const TimedObstacle> obstacles,
                         const std::vector<bool>& active) {
  OccupancyGrid world = map;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (active[i]) world.fill_rect(obstacles[i].rect, CellState::kOccupied);
  }
  return world;
}

template <typename Fn>
void ForCellsInDisc(const OccupancyGrid& grid, Point2D center, double radius, Fn&& fn) {
  const CellIndex lo = grid.world_to_cell({center.x - radius, center.y - radius});
  const CellIndex hi = grid.world_to_cell({center.x + radius, center.y + radius});
  const double half = 0.5 * grid.resolution();
  for (int y = lo.y; y <= hi.y; ++y) {
    for (int x = lo.x; x <= hi.x; ++x) {
      const Point2D c = grid.cell_center({x, y});
      // Closest point of the cell square to the disc center.
      const double dx = std::max(std::abs(center.x - c.x) - half, 0.0);
      const double dy = std::max(std::abs(center.y - c.y) - half, 0.0);
      if (dx * dx + dy * dy < radius * radius) fn(CellIndex{x, y});
    }
  }
}

// Autonomous navigation state: the path being followed and how it is kept
// valid against newly seen obstacles.
class Navigator {
 public:
  Navigator(const Scenario& scenario, const OccupancyGrid& planning_map)
      : scenario_(scenario),
        costmap_(std::make_unique<Costmap>(planning_map, scenario.params.costmap)) {
    const Task& task = scenario.task;
    if (task.kind == TaskKind::kCoverage) {
      const Trajectory traj =
          GenerateCoverage(task.trajectory, task.rect, task.spacing, task.inset);
      const Point2D start = scenario.initial_pose.position();
      if (Distance(start, traj.waypoints.front()) > scenario.params.follow.goal_tolerance) {
        path_.push_back(start);
      }
      path_.insert(path_.end(), traj.waypoints.begin(), traj.waypoints.end());
      active_ = true;
    } else if (task.kind == TaskKind::kGoToGoal) {
      active_ = true;
      need_plan_ = true;
    }
  }

  bool active() const { return active_; }
  const std::vector<Point2D>& path() const { return path_; }

  void set_planning_map(const OccupancyGrid& map) {
    costmap_ = std::make_unique<Costmap>(map, scenario_.params.costmap);
    map_changed_ = true;
  }

  // Returns the commanded twist; appends events for this tick.
  Twist step(double t, const Pose2D& est, const Scan& scan,
             std::vector<EventType>& events, bool& avoiding) {
    if (!active_) return {};
    costmap_->set_time(t);
    if (need_plan_) {
      if (t < next_attempt_) return {};
      PlanResult plan = PlanPath(*costmap_, est.position(), scenario_.task.goal);
      if (plan.status != PlanStatus::kOk) {
        block(t, events);
        return {};
      }
      path_ = std::move(plan.path);
      state_ = {};
      need_plan_ = false;
      blocked_ = false;
    }

    // Replan only up to the next coverage vertex so the rest of the pattern
    // is kept; a goal task replans to the goal.
    const bool coverage = scenario_.task.kind == TaskKind::kCoverage;
    const std::size_t target =
        coverage ? std::min(state_.segment + 1, path_.size() - 1) : path_.size() - 1;
    const std::span<const Point2D> leg(path_.data(), target + 1);
    ReplanResult replan;
    if (map_changed_ && PathBlocked(*costmap_, leg, state_.segment)) {
      PlanResult plan = PlanPath(*costmap_, est.position(), leg.back());
      replan.status = plan.status == PlanStatus::kOk ? ReplanStatus::kReplanned
                                                     : ReplanStatus::kUnreachable;
      replan.path = std::move(plan.path);
    } else {
      replan = ReplanOnObstacle(*costmap_, scan, leg, est, state_.segment);
    }
    map_changed_ = false;
    if (replan.status == ReplanStatus::kUnreachable) {
      block(t, events);
      return {};
    }
    blocked_ = false;
    if (replan.status == ReplanStatus::kReplanned) {
      std::vector<Point2D> next = std::move(replan.path);
      next.insert(next.end(), path_.begin() + target + 1, path_.end());
      path_ = std::move(next);
      state_ = {};
      avoid_until_ = t + 1.0;
      events.push_back(EventType::kReplanned);
    }
    if (t < avoid_until_) avoiding = true;

    const FollowResult result =
        Follow(path_, est, scenario_.params.follow, scenario_.params.robot, state_);
    if (result.done) {
      active_ = false;
      events.push_back(EventType::kTrajectoryDone);
    }
    return result.twist;
  }

 private:
  void block(double t, std::vector<EventType>& events) {
    if (!blocked_) events.push_back(EventType::kGoalBlocked);
    blocked_ = true;
    next_attempt_ = t + 1.0;
  }

  const Scenario& scenario_;
  std::unique_ptr<Costmap> costmap_;
  std::vector<Point2D> path_;
  FollowState state_;
  bool active_ = false;
  bool need_plan_ = false;
  bool blocked_ = false;
  bool map_changed_ = false;
  double next_attempt_ = kNegInf;
  double avoid_until_ = kNegInf;
};

}  // namespace

std::string_view ToString(Mode mode) {
  switch (mode) {
    case Mode::kManual: return "manual";
    case Mode::kKnownMap: return "known_map";
    case Mode::kUnknownMap: return "unknown_map";
  }
  return "manual";
}

Mode ParseMode(std::string_view name) {
  if (name == "manual") return Mode::kManual;
  if (name == "known_map") return Mode::kKnownMap;
  if (name == "unknown_map") return Mode::kUnknownMap;
  throw Error("unknown mode '" + std::string(name) + "'");
}

std::string_view ToString(EventType type) {
  switch (type) {
    case EventType::kTrajectoryDone: return "TrajectoryDone";
    case EventType::kGoalBlocked: return "GoalBlocked";
    case EventType::kReplanned: return "Replanned";
    case EventType::kFilterReset: return "FilterReset";
    case EventType::kBatteryDepleted: return "BatteryDepleted";
    case EventType::kCollision: return "Collision";
    case EventType::kExposure: return "Exposure";
  }
  return "Unknown";
}

void Scenario::validate() const {
  if (!(dt > 0.0)) throw Error("scenario: dt must be > 0");
  if (!(duration >= 0.0)) throw Error("scenario: duration must be >= 0");
  params.robot.validate();
  params.lamp.validate();
  if (params.particles < 1) throw Error("scenario: particles must be >= 1");
  if (!(params.map_update_period > 0.0)) {
    throw Error("scenario: map_update_period must be > 0");
  }
  if (!(params.battery_capacity > 0.0)) throw Error("scenario: battery capacity must be > 0");
  if (params.lamps_left < 0 || params.lamps_left > 4 || params.lamps_right < 0 ||
      params.lamps_right > 4) {
    throw Error("scenario: lamps per bank must lie in [0, 4]");
  }
  if (!(params.guard.stop_distance > 0.0) ||
      !(params.guard.slow_distance > params.guard.stop_distance)) {
    throw Error("scenario: guard needs 0 < stop_distance < slow_distance");
  }
  if (!map.is_free(initial_pose.position())) {
    throw Error("scenario: initial pose is not in free space");
  }
  for (const HumanAgent& h : humans) ValidateHuman(h);
  for (const ScriptStep& s : script) {
    if (!(s.duration >= 0.0)) throw Error("scenario: script step with negative duration");
  }
  for (const TimedObstacle& o : obstacles) {
    if (!(o.rect.max_x > o.rect.min_x) || !(o.rect.max_y > o.rect.min_y)) {
      throw Error("scenario: obstacle rectangle is empty");
    }
  }
  if (mode != Mode::kManual && task.kind == TaskKind::kGoToGoal &&
      !map.bounds().contains(task.goal)) {
    throw Error("scenario: goal lies outside the map");
  }
}

bool FootprintCollides(const OccupancyGrid& grid, Point2D center, double radius) {
  bool hit = false;
  ForCellsInDisc(grid, center, radius, [&](CellIndex c) {
    if (grid.contains(c) && grid.at(c) == CellState::kOccupied) hit = true;
  });
  return hit;
}

OccupancyGrid TrueWorld(const OccupancyGrid& map,
                        std::span<const TimedObstacle> obstacles, double t) {
  OccupancyGrid world = map;
  for (const TimedObstacle& o : obstacles) {
    if (t >= o.appear && t < o.vanish) world.fill_rect(o.rect, CellState::kOccupied);
  }
  return world;
}

SimReport RunScenario(const Scenario& scenario) {
  scenario.validate();
  const SimParams& p = scenario.params;
  const double dt = scenario.dt;
  const auto tick_count =
      static_cast<std::size_t>(std::floor(scenario.duration / dt + 1e-9));

  std::uint64_t seed_state = scenario.seed;
  Rng sensor_rng(SplitMix64(seed_state));
  Rng odometry_rng(SplitMix64(seed_state));
  Rng detection_rng(SplitMix64(seed_state));
  const std::uint64_t particle_seed = SplitMix64(seed_state);

  SimReport report;
  report.initial_pose = scenario.initial_pose;
  report.dose = DoseField(scenario.map);
  report.ticks.reserve(tick_count);

  GuardParams guard = p.guard;
  guard.max_speed = p.robot.max_linear_speed;

  // Localization and, in unknown-map mode, mapping.
  const bool unknown = scenario.mode == Mode::kUnknownMap;
  std::optional<LogOddsMap> logodds;
  std::unique_ptr<LikelihoodField> field;
  if (unknown) {
    logodds = LogOddsMap::Like(scenario.map, p.logodds);
  } else if (HasOccupied(scenario.map)) {
    field = std::make_unique<LikelihoodField>(scenario.map);
  }
  // With a known map the operator's initial estimate is itself off by the
  // prior spread; the unknown-map mode defines its frame by the start pose.
  Pose2D prior = scenario.initial_pose;
  if (!unknown) {
    Rng guess_rng(SplitMix64(seed_state));
    std::normal_distribution<double> gauss(0.0, 1.0);
    prior.x += p.init_sigma_xy * gauss(guess_rng);
    prior.y += p.init_sigma_xy * gauss(guess_rng);
    prior.theta = NormalizeAngle(prior.theta + p.init_sigma_theta * gauss(guess_rng));
  }
  ParticleSet particles =
      p.uniform_init && field
          ? ParticleSet::Uniform(*field, p.particles, particle_seed)
          : ParticleSet::Gaussian(prior, p.init_sigma_xy, p.init_sigma_theta,
                                  p.particles, particle_seed);
  Pose2D dead_reckoning = prior;
  const auto map_period_ticks = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(p.map_update_period / dt)));

  std::optional<Navigator> navigator;
  if (scenario.mode != Mode::kManual) {
    navigator.emplace(scenario, unknown ? UnknownAsFree(OccupancyGrid(
                                              scenario.map.width(), scenario.map.height(),
                                              scenario.map.resolution(),
                                              scenario.map.origin()))
                                        : scenario.map);
  }

  const double clearance = p.guard.stop_distance + 0.1;
  std::vector<bool> active(scenario.obstacles.size(), false);
  active = ActiveObstacles(scenario.obstacles, 0.0, active,
                           scenario.initial_pose.position(), clearance);
  OccupancyGrid world = BuildWorld(scenario.map, scenario.obstacles, active);

  LampBanks banks = MakeBanks(p.lamps_left, p.lamps_right);
  BatteryState battery{p.battery_capacity, p.battery_capacity};
  Pose2D true_pose = scenario.initial_pose;
  Twist previous_applied;
  double energy_wh = 0.0;
  std::vector<bool> swept(scenario.map.size(), false);
  SimMetrics& metrics = report.metrics;

  for (std::size_t k = 0; k < tick_count; ++k) {
    const double t = static_cast<double>(k) * dt;
    TickRecord rec;
    rec.t = t;
    rec.true_pose = true_pose;

    // (1) humans and the dynamic part of the world.
    const std::vector<HumanAgent> humans = StepHumans(scenario.humans, t);
    std::vector<Disc> discs;
    for (const HumanAgent& h : humans) discs.push_back({h.pose.position(), h.radius});
    if (std::vector<bool> now = ActiveObstacles(scenario.obstacles, t, active,
                                                true_pose.position(), clearance);
        now != active) {
      active = std::move(now);
      world = BuildWorld(scenario.map, scenario.obstacles, active);
    }

    // (2) sensors.
    const Scan scan = SimulateLidar(world, true_pose, p.robot.lidar, sensor_rng, discs, t);
    const UltrasonicReading sonar =
        SimulateUltrasonic(world, true_pose, p.robot.ultrasonic, discs);

    // (3) localization and mapping.
    bool error = false;
    if (k > 0) {
      std::normal_distribution<double> gauss(0.0, 1.0);
      OdometryDelta odom{previous_applied.v, previous_applied.w, dt};
      odom.v += p.odometry_noise.sigma_v * gauss(odometry_rng);
      odom.w += p.odometry_noise.sigma_w * gauss(odometry_rng);
      MotionUpdate(particles, odom, p.particle_noise);
      dead_reckoning = StepKinematics(dead_reckoning, {odom.v, odom.w}, dt);
    }
    Pose2D est = dead_reckoning;
    if (field) {
      if (MeasurementUpdate(particles, scan, *field, p.measurement) ==
          MeasurementStatus::kFilterReset) {
        rec.events.push_back(EventType::kFilterReset);
        error = true;
      }
      Resample(particles);
      est = Estimate(particles).pose;
    } else if (unknown) {
      est = Estimate(particles).pose;
    }
    if (unknown) {
      UpdateOccupancy(*logodds, est, scan);
      if (k % map_period_ticks == 0) {
        const OccupancyGrid built = logodds->classify();
        if (HasOccupied(built)) field = std::make_unique<LikelihoodField>(built);
        if (navigator) navigator->set_planning_map(UnknownAsFree(built));
      }
    }
    rec.est_pose = est;

    // (4) planning or script, (5) guard.
    bool avoiding = false;
    Twist commanded;
    if (navigator) {
      commanded = navigator->step(t, est, scan, rec.events, avoiding);
      const Twist guarded = CollisionGuard(commanded, scan, sonar, guard);
      // Blocked ahead: keep only the rotation so the robot can turn toward
      // the replanned route instead of waiting on the obstacle.
      if (commanded.v != 0.0 && guarded.v == 0.0) {
        commanded.v = 0.0;
        avoiding = true;
      }
    } else {
      commanded = ClampTwist(ScriptTwist(scenario.script, t), p.robot);
    }
    const Twist applied = CollisionGuard(commanded, scan, sonar, guard);
    if (!(applied == commanded)) avoiding = true;
    rec.commanded = commanded;
    rec.applied = applied;

    // (6) detection, interlock, LED.
    const std::vector<std::size_t> seen =
        DetectHumans(humans, true_pose, p.detection, world,
                     p.detection.miss_rate > 0.0 ? &detection_rng : nullptr);
    std::vector<bool> is_seen(humans.size(), false);
    std::vector<Point2D> detected;
    for (std::size_t i : seen) {
      is_seen[i] = true;
      detected.push_back(humans[i].pose.position());
    }
    banks = LampInterlock(banks, detected, true_pose, world, p.interlock, t);
    bool exposed = false;
    for (std::size_t i = 0; i < humans.size(); ++i) {
      HumanObservation obs{humans[i].id, humans[i].pose.position(), is_seen[i], 0.0};
      if (!obs.detected) {
        for (const LampBank& bank : banks) {
          if (bank.lamps_on > 0 && InHazardZone(true_pose, bank.side, obs.position, world,
                                                p.interlock.safety_radius)) {
            obs.irradiance = IrradianceAt(true_pose, banks, obs.position, world, p.lamp);
            exposed = true;
            break;
          }
        }
      }
      rec.humans.push_back(obs);
    }
    if (exposed) {
      ++metrics.exposure_incidents;
      rec.events.push_back(EventType::kExposure);
    }
    rec.lamps = {banks[0].lamps_on, banks[1].lamps_on};

    // (7) kinematics on the true pose.
    const Pose2D next = StepKinematics(true_pose, applied, dt);
    if (FootprintCollides(world, next.position(), p.robot.footprint_radius)) {
      ++metrics.collisions;
      rec.events.push_back(EventType::kCollision);
    }

    // (8) dose, (9) power.
    report.dose.accumulate(true_pose, banks, world, p.lamp, dt);
    const int lamps_on = banks[0].lamps_on + banks[1].lamps_on;
    battery = ConsumePower(battery, lamps_on, p.robot.base_load, dt,
                           p.robot.lamp_power_per_lamp);
    energy_wh += PowerDraw(lamps_on, p.robot.lamp_power_per_lamp, p.robot.base_load) *
                 dt / 3600.0;
    rec.battery_wh = battery.remaining;
    if (battery.depleted()) {
      rec.events.push_back(EventType::kBatteryDepleted);
      error = true;
    }
    const bool has_goal = navigator && navigator->active();
    rec.led = ComputeLedStatus(has_goal, avoiding, error);

    ForCellsInDisc(scenario.map, true_pose.position(), p.robot.footprint_radius,
                   [&](CellIndex c) {
                     if (scenario.map.contains(c)) swept[scenario.map.index(c)] = true;
                   });

    // (10) record.
    const bool done = std::find(rec.events.begin(), rec.events.end(),
                                EventType::kTrajectoryDone) != rec.events.end();
    for (EventType e : rec.events) report.events.push_back({t, e});
    report.ticks.push_back(std::move(rec));
    true_pose = next;
    previous_applied = applied;
    if (battery.depleted()) break;
    if (done && p.end_on_done) break;
  }

  report.final_pose = true_pose;
  if (navigator) report.planned_path = navigator->path();
  if (logodds) report.built_map = logodds->classify();

  metrics.ticks = report.ticks.size();
  if (!report.ticks.empty()) metrics.trajectory = ComputeMetrics(report);
  metrics.total_energy_wh = energy_wh;
  metrics.final_battery_wh = battery.remaining;
  const bool use_rect = scenario.task.kind == TaskKind::kCoverage;
  std::size_t area = 0, covered = 0, free_cells = 0, dosed = 0;
  for (std::size_t i = 0; i < scenario.map.size(); ++i) {
    if (scenario.map.cells()[i] != CellState::kFree) continue;
    ++free_cells;
    if (TbcDecrease(report.dose.values()[i], p.survival) >= 90.0) ++dosed;
    const Point2D c = scenario.map.cell_center(scenario.map.cell_of(i));
    if (use_rect && !scenario.task.rect.contains(c)) continue;
    ++area;
    if (swept[i]) ++covered;
  }
  metrics.coverage_percent = area ? 100.0 * covered / area : 0.0;
  metrics.dosed_percent = free_cells ? 100.0 * dosed / free_cells : 0.0;
  return report;
}

TrajectoryMetrics ComputeMetrics(const SimReport& report) {
  if (report.ticks.empty()) throw Error("compute_metrics: report has no ticks");
  double sum_sq = 0.0;
  double worst = 0.0;
  for (const TickRecord& r : report.ticks) {
    const double e = Distance(r.est_pose.position(), r.true_pose.position());
    sum_sq += e * e;
    worst = std::max(worst, e);
  }
  // Guard the rmse <= max invariant against rounding in the mean.
  const double rmse = std::sqrt(sum_sq / static_cast<double>(report.ticks.size()));
  return {std::min(rmse, worst), worst};
}

namespace {

void Append(std::string& out, const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, value);
  out += buf;
}

}  // namespace

void WriteReport(const SimReport& report, std::ostream& out) {
  out << "# uvbot report v1\n"
      << "# fields: t,true_x,true_y,true_theta,est_x,est_y,est_theta,cmd_v,cmd_w,"
         "applied_v,applied_w,left_lamps,right_lamps,led,battery_wh,humans,events\n"
      << "# humans: id:x:y:detected:irradiance separated by '|'; events separated by '|'\n";
  std::string line;
  Append(line, "# initial_pose %.6f", report.initial_pose.x);
  Append(line, " %.6f", report.initial_pose.y);
  Append(line, " %.6f\n", report.initial_pose.theta);
  out << line;
  for (const TickRecord& r : report.ticks) {
    line.clear();
    Append(line, "%.4f", r.t);
    for (double v : {r.true_pose.x, r.true_pose.y, r.true_pose.theta, r.est_pose.x,
                     r.est_pose.y, r.est_pose.theta, r.commanded.v, r.commanded.w,
                     r.applied.v, r.applied.w}) {
      Append(line, ",%.6f", v);
    }
    line += "," + std::to_string(r.lamps[0]) + "," + std::to_string(r.lamps[1]) + ",";
    line += ToString(r.led);
    Append(line, ",%.6f,", r.battery_wh);
    for (std::size_t i = 0; i < r.humans.size(); ++i) {
      const HumanObservation& h = r.humans[i];
      if (i > 0) line += '|';
      line += std::to_string(h.id);
      Append(line, ":%.4f", h.position.x);
      Append(line, ":%.4f", h.position.y);
      line += h.detected ? ":1" : ":0";
      Append(line, ":%.6g", h.irradiance);
    }
    line += ',';
    for (std::size_t i = 0; i < r.events.size(); ++i) {
      if (i > 0) line += '|';
      line += ToString(r.events[i]);
    }
    line += '\n';
    out << line;
  }
  line.clear();
  Append(line, "# final_pose %.6f", report.final_pose.x);
  Append(line, " %.6f", report.final_pose.y);
  Append(line, " %.6f\n", report.final_pose.theta);
  out << line;
}

std::string FormatReport(const SimReport& report) {
  std::ostringstream out;
  WriteReport(report, out);
  return out.str();
}

void WriteMetrics(const SimMetrics& m, std::ostream& out, TableFormat format) {
  const char* sep = format == TableFormat::kKv ? " = " : ",";
  if (format == TableFormat::kCsv) out << "key,value\n";
  auto put = [&](const char* key, double value, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, value);
    out << key << sep << buf << '\n';
  };
  put("ticks", static_cast<double>(m.ticks), "%.0f");
  put("rmse", m.trajectory.rmse, "%.6f");
  put("max_error", m.trajectory.max_error, "%.6f");
  put("coverage_percent", m.coverage_percent, "%.3f");
  put("dosed_percent", m.dosed_percent, "%.3f");
  put("total_energy_wh", m.total_energy_wh, "%.6f");
  put("final_battery_wh", m.final_battery_wh, "%.6f");
  put("exposure_incidents", m.exposure_incidents, "%.0f");
  put("collisions", m.collisions, "%.0f");
}

void WriteTrajectoryCsv(const SimReport& report, bool estimated, std::ostream& out) {
  out << "t,x,y,theta\n";
  char buf[128];
  for (const TickRecord& r : report.ticks) {
    const Pose2D& pose = estimated ? r.est_pose : r.true_pose;
    std::snprintf(buf, sizeof(buf), "%.4f,%.6f,%.6f,%.6f\n", r.t, pose.x, pose.y, pose.theta);
    out << buf;
  }
}

}  // namespace uvbot
