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


#ifndef UVBOT_COMMANDS_HPP_
#define UVBOT_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "uvbot/config.hpp"
#include "uvbot/disinfection.hpp"
#include "uvbot/sim.hpp"

namespace uvbot {

TableFormat ParseTableFormat(std::string_view name);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = ".";
  TableFormat format = TableFormat::kKv;
};

// Runs one scenario and writes report.txt, metrics.{txt,csv}, dose.pgm,
// dose.csv, trajectory_true.csv, trajectory_est.csv and path.csv (plus
// built_map.grid in unknown-map mode) to the output directory.
SimReport RunCommand(const ScenarioConfig& config, const RunOptions& options);

struct CompareRow {
  TrajectoryKind kind = TrajectoryKind::kSShape;
  std::uint64_t seed = 0;
  TrajectoryMetrics metrics;
};

struct KindSummary {
  TrajectoryKind kind = TrajectoryKind::kSShape;
  int runs = 0;
  double rmse_mean = 0.0;
  double rmse_std = 0.0;  // sample standard deviation, 0 for a single run
  double max_mean = 0.0;
  double max_std = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;  // sorted by kind, then seed
  std::vector<KindSummary> summary;
};

inline constexpr TrajectoryKind kCoverageKinds[] = {
    TrajectoryKind::kSShape, TrajectoryKind::kRollingUpRps, TrajectoryKind::kUnfoldingRps};

// Runs every coverage pattern for seeds first_seed .. first_seed + seeds - 1.
// Scenarios are independent and run on up to `threads` workers.
CompareResult CompareTrajectories(const ScenarioConfig& config, int seeds,
                                  std::uint64_t first_seed, unsigned threads = 0);

void WriteCompareTable(const CompareResult& result, std::ostream& out, TableFormat format);
void WriteCompareRows(const CompareResult& result, TrajectoryKind kind, std::ostream& out);

struct ExposureRow {
  double distance = 0.0;  // m
  double height = 0.0;    // m
  double before = 0.0;    // colony count
  double after = 0.0;

  double decrease() const { return 100.0 * (before - after) / before; }
};

// CSV "distance,height,before,after" with a header line; '#' comments.
std::vector<ExposureRow> ParseExposureTable(std::string_view text);
std::vector<ExposureRow> LoadExposureTable(const std::filesystem::path& path);

struct CalibrationReport {
  double near_max = 0.0;
  double exposure = 0.0;
  CalibrationResult fit;                // near rows
  std::vector<CalibrationRow> far;      // report only
};

// Fits k on rows with distance <= near_max and evaluates it on the rest.
CalibrationReport CalibrateTable(std::span<const ExposureRow> rows, const LampModel& lamp,
                                 double exposure = 600.0, double near_max = 2.8);

void WriteCalibration(const CalibrationReport& report, std::ostream& out,
                      TableFormat format);

}  // namespace uvbot

#endif  // UVBOT_COMMANDS_HPP_
