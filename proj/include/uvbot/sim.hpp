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


#ifndef UVBOT_SIM_HPP_
#define UVBOT_SIM_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uvbot/disinfection.hpp"
#include "uvbot/geometry.hpp"
#include "uvbot/localization.hpp"
#include "uvbot/mapping.hpp"
#include "uvbot/planning.hpp"
#include "uvbot/robot.hpp"
#include "uvbot/safety.hpp"
#include "uvbot/world.hpp"

namespace uvbot {

enum class Mode { kManual, kKnownMap, kUnknownMap };

std::string_view ToString(Mode mode);
Mode ParseMode(std::string_view name);

// Manual-mode command: `twist` is held on [start, start + duration).
struct ScriptStep {
  double start = 0.0;
  double duration = 0.0;
  Twist twist;
};

enum class TaskKind { kNone, kCoverage, kGoToGoal };

struct Task {
  TaskKind kind = TaskKind::kNone;
  // Coverage.
  TrajectoryKind trajectory = TrajectoryKind::kRollingUpRps;
  Rect rect;
  double spacing = 1.0;
  double inset = 0.45;
  // GoToGoal.
  Point2D goal;
};

// Box that is part of the true world on [appear, vanish). Not in the map the
// robot is given. One due while the robot is within reach of it is placed
// once the robot has moved clear.
struct TimedObstacle {
  Rect rect;
  double appear = 0.0;
  double vanish = std::numeric_limits<double>::infinity();
};

struct SimParams {
  RobotConfig robot;
  MotionNoise odometry_noise{0.02, 0.02};  // encoder noise on the reported twist
  MotionNoise particle_noise{0.05, 0.05};  // diffusion inside the filter
  MeasurementParams measurement;
  int particles = 500;
  bool uniform_init = false;
  double init_sigma_xy = 0.1;
  double init_sigma_theta = 0.05;
  CostmapParams costmap;
  FollowParams follow;
  GuardParams guard;
  InterlockParams interlock;
  DetectionParams detection;
  LampModel lamp;
  SurvivalModel survival;
  LogOddsParams logodds;
  double map_update_period = 1.0;  // unknown-map mode: field/costmap rebuild
  double battery_capacity = 1200.0;
  int lamps_left = 4;
  int lamps_right = 4;
  // Stop the run on the tick a trajectory or goal is completed.
  bool end_on_done = false;
};

struct Scenario {
  OccupancyGrid map{1, 1, 0.05};
  Pose2D initial_pose;
  Mode mode = Mode::kKnownMap;
  Task task;
  std::vector<ScriptStep> script;
  std::vector<HumanAgent> humans;
  std::vector<TimedObstacle> obstacles;
  double duration = 60.0;
  double dt = 0.05;
  std::uint64_t seed = 1;
  SimParams params;

  void validate() const;
};

enum class EventType {
  kTrajectoryDone,
  kGoalBlocked,
  kReplanned,
  kFilterReset,
  kBatteryDepleted,
  kCollision,
  kExposure,
};

std::string_view ToString(EventType type);

struct Event {
  double t = 0.0;
  EventType type = EventType::kTrajectoryDone;
};

struct HumanObservation {
  int id = 0;
  Point2D position;
  bool detected = false;
  double irradiance = 0.0;  // W/m^2 received while undetected
};

// One tick. Poses, banks and human positions are those at the start of the
// tick, when the sensors were read and the interlock evaluated.
struct TickRecord {
  double t = 0.0;
  Pose2D true_pose;
  Pose2D est_pose;
  Twist commanded;
  Twist applied;
  std::array<int, 2> lamps{};  // left, right
  LedStatus led = LedStatus::kWaiting;
  double battery_wh = 0.0;
  std::vector<HumanObservation> humans;
  std::vector<EventType> events;
};

struct TrajectoryMetrics {
  double rmse = 0.0;
  double max_error = 0.0;
};

struct SimMetrics {
  TrajectoryMetrics trajectory;
  double coverage_percent = 0.0;  // free cells of the task area swept by the footprint
  double dosed_percent = 0.0;     // free cells predicted >= 90 % decrease
  double total_energy_wh = 0.0;
  int exposure_incidents = 0;     // ticks with an irradiated undetected human
  int collisions = 0;             // ticks with the footprint on an obstacle
  std::size_t ticks = 0;
  double final_battery_wh = 0.0;
};

struct SimReport {
  Pose2D initial_pose;
  Pose2D final_pose;  // true pose after the last tick
  std::vector<TickRecord> ticks;
  std::vector<Event> events;
  std::vector<Point2D> planned_path;  // path being followed at the end
  SimMetrics metrics;
  DoseField dose{OccupancyGrid{1, 1, 0.05}};
  // Classified log-odds map, unknown-map mode only.
  std::optional<OccupancyGrid> built_map;
};

// Runs the fixed-step loop: humans, sensors, localization (and mapping),
// planning, guard, detection and interlock, kinematics, dose, power, record.
SimReport RunScenario(const Scenario& scenario);

// RMSE and max planar error of the estimate over all ticks. Throws on an
// empty report.
TrajectoryMetrics ComputeMetrics(const SimReport& report);

// True if a disc of `radius` at `center` overlaps an occupied cell.
bool FootprintCollides(const OccupancyGrid& grid, Point2D center, double radius);

// The world as it is at time t: the map plus the active timed obstacles.
OccupancyGrid TrueWorld(const OccupancyGrid& map,
                        std::span<const TimedObstacle> obstacles, double t);

// Line-delimited tick records under a commented header that names the fields.
void WriteReport(const SimReport& report, std::ostream& out);
std::string FormatReport(const SimReport& report);

enum class TableFormat { kKv, kCsv };

// Flat metrics block, "key = value" or "key,value" lines.
void WriteMetrics(const SimMetrics& metrics, std::ostream& out,
                  TableFormat format = TableFormat::kKv);

// "t,x,y,theta" rows of the true or estimated trajectory.
void WriteTrajectoryCsv(const SimReport& report, bool estimated, std::ostream& out);

}  // namespace uvbot

#endif  // UVBOT_SIM_HPP_
