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


// uvbot: run scenarios, compare coverage patterns and calibrate the
// survival model from exposure measurements.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "uvbot/commands.hpp"
#include "uvbot/config.hpp"

#ifndef UVBOT_DATA_DIR
#define UVBOT_DATA_DIR "data"
#endif

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

void SetUpLogging() {
  auto logger = spdlog::stderr_color_mt("uvbot");
  logger->set_pattern("uvbot: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::err);
  if (const char* env = std::getenv("UVBOT_LOG")) {
    const std::string level = env;
    if (level == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
      spdlog::set_level(spdlog::level::info);
    } else if (level != "error") {
      spdlog::warn("ignoring UVBOT_LOG={} (expected error, info or debug)", level);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  SetUpLogging();
  CLI::App app{"UV-C disinfection robot simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string format = "kv";
  std::uint64_t seed = 0;
  int seeds = 20;
  std::string table_path = std::string(UVBOT_DATA_DIR) + "/table1.csv";
  double exposure = 600.0;
  double near_max = 2.8;

  CLI::App* run = app.add_subcommand("run", "Run one scenario and write its artifacts");
  run->add_option("config", config_path, "Scenario file")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--format", format, "Metrics format: kv or csv")->capture_default_str();

  CLI::App* compare =
      app.add_subcommand("compare", "Compare the three coverage patterns over seeds");
  compare->add_option("config", config_path, "Scenario file")->required();
  compare->add_option("--seeds", seeds, "Seeds per pattern")->capture_default_str();
  CLI::Option* first_seed_opt =
      compare->add_option("--seed", seed, "First seed (default: the scenario seed)");
  compare->add_option("--out", out_dir, "Directory for the per-pattern CSV files")
      ->capture_default_str();
  compare->add_option("--format", format, "Table format: kv or csv")->capture_default_str();

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Fit the survival constant to an exposure table");
  calibrate->add_option("--table", table_path, "distance,height,before,after CSV")
      ->capture_default_str();
  calibrate->add_option("--exposure", exposure, "Exposure time of every row, s")
      ->capture_default_str();
  calibrate->add_option("--near-max", near_max, "Rows up to this distance are fitted, m")
      ->capture_default_str();
  calibrate->add_option("--format", format, "Output format: kv or csv")->capture_default_str();

  CLI::App* keys = app.add_subcommand("config-help", "Document every scenario key");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const uvbot::TableFormat table_format = uvbot::ParseTableFormat(format);
    if (*keys) {
      std::cout << uvbot::ConfigHelp();
      return 0;
    }
    if (*calibrate) {
      const auto rows = uvbot::LoadExposureTable(table_path);
      spdlog::info("calibrating on {} rows from {}", rows.size(), table_path);
      const auto report = uvbot::CalibrateTable(rows, uvbot::LampModel{}, exposure, near_max);
      uvbot::WriteCalibration(report, std::cout, table_format);
      return 0;
    }
    const uvbot::ScenarioConfig config = uvbot::LoadConfig(config_path);
    if (*run) {
      uvbot::RunOptions options;
      if (*seed_opt) options.seed = seed;
      options.out_dir = out_dir;
      options.format = table_format;
      spdlog::info("running {} into {}", config_path, out_dir);
      const uvbot::SimReport report = uvbot::RunCommand(config, options);
      for (const uvbot::Event& e : report.events) {
        spdlog::debug("t={:.2f} {}", e.t, uvbot::ToString(e.type));
      }
      uvbot::WriteMetrics(report.metrics, std::cout, table_format);
      return 0;
    }
    if (*compare) {
      const std::uint64_t first = *first_seed_opt ? seed : config.scenario.seed;
      spdlog::info("comparing patterns over {} seeds from {}", seeds, first);
      const uvbot::CompareResult result =
          uvbot::CompareTrajectories(config, seeds, first);
      std::filesystem::create_directories(out_dir);
      for (uvbot::TrajectoryKind kind : uvbot::kCoverageKinds) {
        const auto path = std::filesystem::path(out_dir) /
                          ("compare_" + std::string(uvbot::ToString(kind)) + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw uvbot::Error("cannot write '" + path.string() + "'");
        uvbot::WriteCompareRows(result, kind, out);
      }
      uvbot::WriteCompareTable(result, std::cout, table_format);
      return 0;
    }
  } catch (const uvbot::ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
  return 0;
}
