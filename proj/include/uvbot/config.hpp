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


#ifndef UVBOT_CONFIG_HPP_
#define UVBOT_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "uvbot/sim.hpp"

namespace uvbot {

// Malformed or inconsistent configuration (usage error, exit status 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Scenario file contents before the map is loaded and defaults that depend
// on it are resolved.
struct ScenarioConfig {
  std::filesystem::path base_dir;  // relative paths resolve against this
  std::string map;                 // empty: the built-in 6 x 4.5 m room
  std::string task = "coverage";
  std::optional<Rect> rect;
  std::optional<Pose2D> start;
  bool has_goal = false;
  Scenario scenario;
};

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;  // as written in a config file
  std::string_view doc;
  bool repeated = false;
};

// Every accepted key, in help order.
std::span<const ConfigKey> ConfigKeys();

// "key = value" lines; '#' starts a comment. Unknown keys, repeated
// single-valued keys and malformed values throw ConfigError.
ScenarioConfig ParseConfig(std::string_view text,
                           const std::filesystem::path& base_dir = {});
ScenarioConfig LoadConfig(const std::filesystem::path& path);

// Loads the map and fills in the map-dependent defaults (area, start pose).
Scenario BuildScenario(const ScenarioConfig& config);

// Walled room with the given interior, interior corner at the origin.
OccupancyGrid MakeRoom(double width, double height, double resolution);

std::string ConfigHelp();

}  // namespace uvbot

#endif  // UVBOT_CONFIG_HPP_
