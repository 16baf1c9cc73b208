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


#include "uvbot/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace uvbot {
namespace {

using Tokens = std::vector<std::string>;
using Setter = std::function<void(ScenarioConfig&, const Tokens&)>;

struct Entry {
  ConfigKey key;
  Setter apply;
};

Tokens Split(std::string_view text) {
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

double ToDouble(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ConfigError("'" + std::string(s) + "' is not a number");
  }
  return value;
}

template <typename Int>
Int ToInt(std::string_view s) {
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("'" + std::string(s) + "' is not an integer");
  }
  return value;
}

bool ToBool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("'" + std::string(s) + "' is not a boolean");
}

void Arity(const Tokens& t, std::size_t lo, std::size_t hi) {
  if (t.size() < lo || t.size() > hi) {
    throw ConfigError(lo == hi ? "expected " + std::to_string(lo) + " value(s)"
                               : "expected " + std::to_string(lo) + " to " +
                                     std::to_string(hi) + " values");
  }
}

Setter Real(std::function<double&(ScenarioConfig&)> field) {
  return [field](ScenarioConfig& c, const Tokens& t) {
    Arity(t, 1, 1);
    field(c) = ToDouble(t[0]);
  };
}

Setter Integer(std::function<int&(ScenarioConfig&)> field) {
  return [field](ScenarioConfig& c, const Tokens& t) {
    Arity(t, 1, 1);
    field(c) = ToInt<int>(t[0]);
  };
}

Setter Flag(std::function<bool&(ScenarioConfig&)> field) {
  return [field](ScenarioConfig& c, const Tokens& t) {
    Arity(t, 1, 1);
    field(c) = ToBool(t[0]);
  };
}

#define FIELD(expr) [](ScenarioConfig& c) -> auto& { return c.expr; }

const std::vector<Entry>& Registry() {
  static const std::vector<Entry> entries = {
      // Scenario.
      {{"map", "", "Occupancy grid file (GRID format), relative to the config file. "
                   "Empty selects a walled 6 x 4.5 m room at 0.05 m resolution."},
       [](ScenarioConfig& c, const Tokens& t) {
         Arity(t, 0, 1);
         c.map = t.empty() ? "" : t[0];
       }},
      {{"mode", "known_map", "manual, known_map or unknown_map."},
       [](ScenarioConfig& c, const Tokens& t) {
         Arity(t, 1, 1);
         try {
           c.scenario.mode = ParseMode(t[0]);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       }},
      {{"task", "coverage", "Autonomous task: coverage, goto or none."},
       [](ScenarioConfig& c, const Tokens& t) {
         Arity(t, 1, 1);
         if (t[0] != "coverage" && t[0] != "goto" && t[0] != "none") {
           throw ConfigError("unknown task '" + t[0] + "'");
         }
         c.task = t[0];
       }},
      {{"trajectory", "rolling_up_rps",
        "Coverage pattern: s_shape, rolling_up_rps or unfolding_rps."},
       [](ScenarioConfig& c, const Tokens& t) {
         Arity(t, 1, 1);
         try {
           c.scenario.task.trajectory = ParseTrajectoryKind(t[0]);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
         if (c.scenario.task.trajectory == TrajectoryKind::kPlanned) {
           throw ConfigError("'planned' is not a coverage pattern");
         }
       }},
      {{"rect", "", "Coverage area min_x min_y max_x max_y in m. Empty: bounding box "
                    "of the free cells."},
       [](ScenarioConfig& c, const Tokens& t) {
         if (t.empty()) {
           c.rect.reset();
           return;
         }
         Arity(t, 4, 4);
         c.rect = Rect{ToDouble(t[0]), ToDouble(t[1]), ToDouble(t[2]), ToDouble(t[3])};
       }},
      {{"spacing", "1.0", "Coverage lane pitch, m."}, Real(FIELD(scenario.task.spacing))},
      {{"inset", "0.45", "Clearance of coverage waypoints from the area edge, m."},
       Real(FIELD(scenario.task.inset))},
      {{"goal", "", "GoToGoal target x y in m (required for task = goto)."},
       [](ScenarioConfig& c, const Tokens& t) {
         if (t.empty()) {
           c.has_goal = false;
           return;
         }
         Arity(t, 2, 2);
         c.scenario.task.goal = {ToDouble(t[0]), ToDouble(t[1])};
         c.has_goal = true;
       }},
      {{"start", "", "Initial pose x y theta (m, rad). Empty: the first coverage "
                     "waypoint facing along the first leg, otherwise the area center "
                     "facing +x."},
       [](ScenarioConfig& c, const Tokens& t) {
         if (t.empty()) {
           c.start.reset();
           return;
         }
         Arity(t, 3, 3);
         c.start = MakePose(ToDouble(t[0]), ToDouble(t[1]), ToDouble(t[2]));
       }},
      {{"duration", "600", "Simulated time, s."}, Real(FIELD(scenario.duration))},
      {{"dt", "0.05", "Time step, s."}, Real(FIELD(scenario.dt))},
      {{"seed", "1", "Seed for every random draw (overridden by --seed)."},
       [](ScenarioConfig& c, const Tokens& t) {
         Arity(t, 1, 1);
         c.scenario.seed = ToInt<std::uint64_t>(t[0]);
       }},
      {{"end_on_done", "false", "Stop the run once the trajectory or goal is done."},
       Flag(FIELD(scenario.params.end_on_done))},
      {{"lamps", "4 4", "Lamps requested on the left and right banks, 0..4 each."},
       [](ScenarioConfig& c, const Tokens& t) {
         Arity(t, 2, 2);
         c.scenario.params.lamps_left = ToInt<int>(t[0]);
         c.scenario.params.lamps_right = ToInt<int>(t[1]);
       }},
      {{"human", "", "Person: id radius t:x:y [t:x:y ...]; linear motion between "
                     "timed waypoints.", true},
       [](ScenarioConfig& c, const Tokens& t) {
         if (t.size() < 3) throw ConfigError("expected id radius and waypoints");
         HumanAgent h;
         h.id = ToInt<int>(t[0]);
         h.radius = ToDouble(t[1]);
         for (std::size_t i = 2; i < t.size(); ++i) {
           const auto a = t[i].find(':');
           const auto b = t[i].find(':', a == std::string::npos ? a : a + 1);
           if (a == std::string::npos || b == std::string::npos) {
             throw ConfigError("waypoint '" + t[i] + "' is not t:x:y");
           }
           std::string_view s = t[i];
           h.schedule.push_back({ToDouble(s.substr(0, a)),
                                 {ToDouble(s.substr(a + 1, b - a - 1)),
                                  ToDouble(s.substr(b + 1))}});
         }
         h.pose = {h.schedule.front().position.x, h.schedule.front().position.y, 0.0};
         try {
           ValidateHuman(h);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
         c.scenario.humans.push_back(std::move(h));
       }},
      {{"script", "", "Manual command: start duration v w (s, s, m/s, rad/s).", true},
       [](ScenarioConfig& c, const Tokens& t) {
         Arity(t, 4, 4);
         c.scenario.script.push_back(
             {ToDouble(t[0]), ToDouble(t[1]), {ToDouble(t[2]), ToDouble(t[3])}});
       }},
      {{"obstacle", "", "Box absent from the robot's map: appear min_x min_y max_x "
                        "max_y [vanish].", true},
       [](ScenarioConfig& c, const Tokens& t) {
         Arity(t, 5, 6);
         TimedObstacle o;
         o.appear = ToDouble(t[0]);
         o.rect = {ToDouble(t[1]), ToDouble(t[2]), ToDouble(t[3]), ToDouble(t[4])};
         if (t.size() == 6) o.vanish = ToDouble(t[5]);
         c.scenario.obstacles.push_back(o);
       }},
      // Robot.
      {{"footprint_radius", "0.25", "Robot disc radius, m."},
       Real(FIELD(scenario.params.robot.footprint_radius))},
      {{"max_linear_speed", "0.6", "m/s."}, Real(FIELD(scenario.params.robot.max_linear_speed))},
      {{"max_angular_speed", "1.0", "rad/s."},
       Real(FIELD(scenario.params.robot.max_angular_speed))},
      {{"base_load", "180", "Electrical load without lamps, W."},
       Real(FIELD(scenario.params.robot.base_load))},
      {{"lamp_power", "30", "Electrical draw per lit lamp, W."},
       Real(FIELD(scenario.params.robot.lamp_power_per_lamp))},
      {{"battery_capacity", "1200", "Wh."}, Real(FIELD(scenario.params.battery_capacity))},
      {{"lidar_beams", "360", "Beams per scan."}, Integer(FIELD(scenario.params.robot.lidar.beam_count))},
      {{"lidar_fov", "6.283185307179586", "Field of view, rad."},
       Real(FIELD(scenario.params.robot.lidar.fov))},
      {{"lidar_max_range", "3.0", "m."}, Real(FIELD(scenario.params.robot.lidar.max_range))},
      {{"lidar_noise", "0.03", "Range noise sigma, m."},
       Real(FIELD(scenario.params.robot.lidar.range_noise_sigma))},
      {{"lidar_noise_per_m", "0.0", "Additional range noise sigma per meter of range."},
       Real(FIELD(scenario.params.robot.lidar.range_noise_per_m))},
      {{"ultrasonic_count", "10", "Sensors evenly spaced around the body."},
       Integer(FIELD(scenario.params.robot.ultrasonic.count))},
      {{"ultrasonic_max_range", "2.0", "m."},
       Real(FIELD(scenario.params.robot.ultrasonic.max_range))},
      {{"ultrasonic_cone", "0.26", "Cone half-angle, rad."},
       Real(FIELD(scenario.params.robot.ultrasonic.cone_halfangle))},
      // Localization.
      {{"particles", "500", "Particle count."}, Integer(FIELD(scenario.params.particles))},
      {{"uniform_init", "false", "Start the filter spread over all free space instead "
                                 "of around the start pose."},
       Flag(FIELD(scenario.params.uniform_init))},
      {{"init_sigma_xy", "0.1", "Initial position spread, m."},
       Real(FIELD(scenario.params.init_sigma_xy))},
      {{"init_sigma_theta", "0.05", "Initial heading spread, rad."},
       Real(FIELD(scenario.params.init_sigma_theta))},
      {{"odom_sigma_v", "0.02", "Odometry noise on v, m/s."},
       Real(FIELD(scenario.params.odometry_noise.sigma_v))},
      {{"odom_sigma_w", "0.02", "Odometry noise on w, rad/s."},
       Real(FIELD(scenario.params.odometry_noise.sigma_w))},
      {{"particle_sigma_v", "0.05", "Motion-model noise on v, m/s."},
       Real(FIELD(scenario.params.particle_noise.sigma_v))},
      {{"particle_sigma_w", "0.05", "Motion-model noise on w, rad/s."},
       Real(FIELD(scenario.params.particle_noise.sigma_w))},
      {{"z_hit", "0.95", "Likelihood-field hit weight."}, Real(FIELD(scenario.params.measurement.z_hit))},
      {{"z_rand", "0.05", "Likelihood-field random weight."},
       Real(FIELD(scenario.params.measurement.z_rand))},
      {{"sigma_hit", "0.1", "Likelihood-field sigma, m."},
       Real(FIELD(scenario.params.measurement.sigma_hit))},
      {{"beam_subsample", "10", "Use every n-th beam."},
       Integer(FIELD(scenario.params.measurement.beam_subsample))},
      // Planning.
      {{"inflation_radius", "0.35", "Lethal distance around obstacles, m."},
       Real(FIELD(scenario.params.costmap.inflation_radius))},
      {{"cost_scale", "2.0", "Extra cost just outside the lethal zone."},
       Real(FIELD(scenario.params.costmap.cost_scale))},
      {{"cost_falloff", "0.3", "Decay length of the extra cost, m."},
       Real(FIELD(scenario.params.costmap.cost_falloff))},
      {{"obstacle_decay", "5.0", "Lifetime of obstacles marked from scans, s."},
       Real(FIELD(scenario.params.costmap.obstacle_decay))},
      {{"static_tolerance", "0.25", "Scan hits this close to the map are not marked, m."},
       Real(FIELD(scenario.params.costmap.static_tolerance))},
      {{"mark_range", "2.5", "Only scan hits within this range mark obstacles, m."},
       Real(FIELD(scenario.params.costmap.mark_range))},
      {{"lookahead", "0.5", "Pure-pursuit lookahead, m."}, Real(FIELD(scenario.params.follow.lookahead))},
      {{"k_heading", "1.5", "Heading gain, 1/s."}, Real(FIELD(scenario.params.follow.k_heading))},
      {{"v_cruise", "0.3", "Cruise speed, m/s."}, Real(FIELD(scenario.params.follow.v_cruise))},
      {{"goal_tolerance", "0.1", "m."}, Real(FIELD(scenario.params.follow.goal_tolerance))},
      // Safety.
      {{"stop_distance", "0.35", "Guard stop range, m."},
       Real(FIELD(scenario.params.guard.stop_distance))},
      {{"slow_distance", "0.7", "Guard slow-down range, m."},
       Real(FIELD(scenario.params.guard.slow_distance))},
      {{"guard_halfangle", "1.0471975511965976", "Guard sector half-angle, rad."},
       Real(FIELD(scenario.params.guard.sector_halfangle))},
      {{"safety_radius", "3.0", "Lamp interlock radius, m."},
       Real(FIELD(scenario.params.interlock.safety_radius))},
      {{"holdoff", "3.0", "Clear time before a bank relights, s."},
       Real(FIELD(scenario.params.interlock.holdoff))},
      {{"detect_range", "5.0", "Camera range, m."}, Real(FIELD(scenario.params.detection.detect_range))},
      {{"miss_rate", "0.0", "Probability that a visible person is missed."},
       Real(FIELD(scenario.params.detection.miss_rate))},
      // Disinfection.
      {{"uvc_power_per_lamp", "12", "UV-C output per lamp, W."},
       Real(FIELD(scenario.params.lamp.uvc_power_per_lamp))},
      {{"reflector_gain", "1.3", "Reflector gain."}, Real(FIELD(scenario.params.lamp.reflector_gain))},
      {{"r_min", "0.3", "Near-field distance clamp, m."}, Real(FIELD(scenario.params.lamp.r_min))},
      {{"survival_k", "1.0561e-3", "Inactivation constant, m^2/J."},
       Real(FIELD(scenario.params.survival.k))},
      // Mapping.
      {{"l_occ", "0.85", "Log-odds added at a beam endpoint."}, Real(FIELD(scenario.params.logodds.l_occ))},
      {{"l_free", "0.4", "Log-odds removed along a beam."}, Real(FIELD(scenario.params.logodds.l_free))},
      {{"logodds_clamp", "10", "Log-odds bound."}, Real(FIELD(scenario.params.logodds.clamp))},
      {{"map_update_period", "1.0", "Unknown-map mode: rebuild interval of the "
                                    "localization and planning maps, s."},
       Real(FIELD(scenario.params.map_update_period))},
  };
  return entries;
}

#undef FIELD

const std::map<std::string_view, const Entry*>& Index() {
  static const auto index = [] {
    std::map<std::string_view, const Entry*> m;
    for (const Entry& e : Registry()) m.emplace(e.key.name, &e);
    return m;
  }();
  return index;
}

ScenarioConfig Defaults() {
  ScenarioConfig config;
  for (const Entry& e : Registry()) {
    if (!e.key.repeated) e.apply(config, Split(e.key.default_value));
  }
  return config;
}

}  // namespace

std::span<const ConfigKey> ConfigKeys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const Entry& e : Registry()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

ScenarioConfig ParseConfig(std::string_view text, const std::filesystem::path& base_dir) {
  ScenarioConfig config = Defaults();
  config.base_dir = base_dir;
  std::set<std::string> seen;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (Split(line).empty()) continue;
    const auto eq = line.find('=');
    auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (eq == std::string::npos) throw ConfigError(where() + "expected 'key = value'");
    const Tokens key_tokens = Split(std::string_view(line).substr(0, eq));
    if (key_tokens.size() != 1) throw ConfigError(where() + "malformed key");
    const std::string& key = key_tokens[0];
    const auto it = Index().find(key);
    if (it == Index().end()) throw ConfigError(where() + "unknown key '" + key + "'");
    const Entry& entry = *it->second;
    if (!entry.key.repeated && !seen.insert(key).second) {
      throw ConfigError(where() + "key '" + key + "' given twice");
    }
    try {
      entry.apply(config, Split(std::string_view(line).substr(eq + 1)));
    } catch (const Error& e) {
      throw ConfigError(where() + key + ": " + e.what());
    }
  }
  if (config.task == "goto" && !config.has_goal) {
    throw ConfigError("task = goto needs a goal");
  }
  return config;
}

ScenarioConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return ParseConfig(text.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

OccupancyGrid MakeRoom(double width, double height, double resolution) {
  const int w = static_cast<int>(std::lround(width / resolution)) + 2;
  const int h = static_cast<int>(std::lround(height / resolution)) + 2;
  OccupancyGrid grid(w, h, resolution, {-resolution, -resolution}, CellState::kFree);
  for (int x = 0; x < w; ++x) {
    grid.set({x, 0}, CellState::kOccupied);
    grid.set({x, h - 1}, CellState::kOccupied);
  }
  for (int y = 0; y < h; ++y) {
    grid.set({0, y}, CellState::kOccupied);
    grid.set({w - 1, y}, CellState::kOccupied);
  }
  return grid;
}

Scenario BuildScenario(const ScenarioConfig& config) {
  Scenario s = config.scenario;
  if (config.map.empty()) {
    s.map = MakeRoom(6.0, 4.5, 0.05);
  } else {
    std::filesystem::path path = config.map;
    if (path.is_relative()) path = config.base_dir / path;
    s.map = LoadMap(path);
  }

  Rect area;
  if (config.rect) {
    area = *config.rect;
  } else {
    bool any = false;
    const double res = s.map.resolution();
    for (std::size_t i = 0; i < s.map.size(); ++i) {
      if (s.map.cells()[i] != CellState::kFree) continue;
      const Point2D c = s.map.cell_center(s.map.cell_of(i));
      const Rect cell{c.x - 0.5 * res, c.y - 0.5 * res, c.x + 0.5 * res, c.y + 0.5 * res};
      if (!any) {
        area = cell;
        any = true;
      }
      area = {std::min(area.min_x, cell.min_x), std::min(area.min_y, cell.min_y),
              std::max(area.max_x, cell.max_x), std::max(area.max_y, cell.max_y)};
    }
    if (!any) throw ConfigError("map has no free cell");
  }
  s.task.rect = area;

  if (config.task == "coverage") {
    s.task.kind = TaskKind::kCoverage;
  } else if (config.task == "goto") {
    s.task.kind = TaskKind::kGoToGoal;
  } else {
    s.task.kind = TaskKind::kNone;
  }
  if (s.mode == Mode::kManual) s.task.kind = TaskKind::kNone;

  if (config.start) {
    s.initial_pose = *config.start;
  } else if (s.task.kind == TaskKind::kCoverage) {
    const Trajectory traj =
        GenerateCoverage(s.task.trajectory, area, s.task.spacing, s.task.inset);
    const Point2D a = traj.waypoints[0];
    const Point2D b = traj.waypoints.size() > 1 ? traj.waypoints[1] : a + Point2D{1.0, 0.0};
    s.initial_pose = MakePose(a.x, a.y, std::atan2(b.y - a.y, b.x - a.x));
  } else {
    const Point2D c = area.center();
    s.initial_pose = {c.x, c.y, 0.0};
  }
  return s;
}

std::string ConfigHelp() {
  std::ostringstream out;
  out << "Scenario files hold 'key = value' lines; '#' starts a comment.\n"
         "Keys marked [repeatable] may appear any number of times.\n\n";
  for (const ConfigKey& k : ConfigKeys()) {
    out << k.name;
    if (k.repeated) {
      out << " [repeatable]";
    } else {
      out << " (default: " << (k.default_value.empty() ? "unset" : k.default_value) << ")";
    }
    out << "\n    " << k.doc << '\n';
  }
  return out.str();
}

}  // namespace uvbot
