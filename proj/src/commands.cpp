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


#include "uvbot/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace uvbot {
namespace {

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

void MeanStd(std::span<const double> xs, double& mean, double& sd) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

std::string Fmt(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

TableFormat ParseTableFormat(std::string_view name) {
  if (name == "kv") return TableFormat::kKv;
  if (name == "csv") return TableFormat::kCsv;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected csv or kv)");
}

SimReport RunCommand(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioConfig c = config;
  if (options.seed) c.scenario.seed = *options.seed;
  const Scenario scenario = BuildScenario(c);
  SimReport report = RunScenario(scenario);

  const std::filesystem::path& dir = options.out_dir;
  std::filesystem::create_directories(dir);
  {
    auto out = OpenOut(dir / "report.txt");
    WriteReport(report, out);
  }
  {
    auto out = OpenOut(dir / (options.format == TableFormat::kKv ? "metrics.txt"
                                                                  : "metrics.csv"));
    WriteMetrics(report.metrics, out, options.format);
  }
  WriteDosePgm(report.dose, dir / "dose.pgm");
  WriteDoseCsv(report.dose, scenario.params.survival, dir / "dose.csv");
  {
    auto out = OpenOut(dir / "trajectory_true.csv");
    WriteTrajectoryCsv(report, false, out);
  }
  {
    auto out = OpenOut(dir / "trajectory_est.csv");
    WriteTrajectoryCsv(report, true, out);
  }
  {
    auto out = OpenOut(dir / "path.csv");
    out << "x,y\n";
    for (const Point2D& p : report.planned_path) {
      out << Fmt("%.6f", p.x) << ',' << Fmt("%.6f", p.y) << '\n';
    }
  }
  if (report.built_map) SaveMap(*report.built_map, dir / "built_map.grid");
  return report;
}

CompareResult CompareTrajectories(const ScenarioConfig& config, int seeds,
                                  std::uint64_t first_seed, unsigned threads) {
  if (seeds < 1) throw ConfigError("--seeds must be >= 1");
  struct Job {
    TrajectoryKind kind;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (TrajectoryKind kind : kCoverageKinds) {
    for (int i = 0; i < seeds; ++i) jobs.push_back({kind, first_seed + static_cast<std::uint64_t>(i)});
  }
  // Build (and validate) every scenario up front so errors surface before
  // any work is spread over threads.
  std::vector<Scenario> scenarios;
  for (const Job& job : jobs) {
    ScenarioConfig c = config;
    c.task = "coverage";
    c.scenario.task.trajectory = job.kind;
    c.scenario.seed = job.seed;
    scenarios.push_back(BuildScenario(c));
  }

  CompareResult result;
  result.rows.resize(jobs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const SimReport report = RunScenario(scenarios[i]);
        result.rows[i] = {jobs[i].kind, jobs[i].seed, ComputeMetrics(report)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (TrajectoryKind kind : kCoverageKinds) {
    std::vector<double> rmse, max_error;
    for (const CompareRow& row : result.rows) {
      if (row.kind != kind) continue;
      rmse.push_back(row.metrics.rmse);
      max_error.push_back(row.metrics.max_error);
    }
    KindSummary s{kind, static_cast<int>(rmse.size())};
    MeanStd(rmse, s.rmse_mean, s.rmse_std);
    MeanStd(max_error, s.max_mean, s.max_std);
    result.summary.push_back(s);
  }
  return result;
}

void WriteCompareTable(const CompareResult& result, std::ostream& out, TableFormat format) {
  if (format == TableFormat::kCsv) {
    out << "kind,runs,rmse_mean,rmse_std,max_error_mean,max_error_std\n";
    for (const KindSummary& s : result.summary) {
      out << ToString(s.kind) << ',' << s.runs << ',' << Fmt("%.6f", s.rmse_mean) << ','
          << Fmt("%.6f", s.rmse_std) << ',' << Fmt("%.6f", s.max_mean) << ','
          << Fmt("%.6f", s.max_std) << '\n';
    }
    return;
  }
  for (const KindSummary& s : result.summary) {
    const std::string k(ToString(s.kind));
    out << k << ".runs = " << s.runs << '\n'
        << k << ".rmse_mean = " << Fmt("%.6f", s.rmse_mean) << '\n'
        << k << ".rmse_std = " << Fmt("%.6f", s.rmse_std) << '\n'
        << k << ".max_error_mean = " << Fmt("%.6f", s.max_mean) << '\n'
        << k << ".max_error_std = " << Fmt("%.6f", s.max_std) << '\n';
  }
}

void WriteCompareRows(const CompareResult& result, TrajectoryKind kind, std::ostream& out) {
  out << "seed,rmse,max_error\n";
  for (const CompareRow& row : result.rows) {
    if (row.kind != kind) continue;
    out << row.seed << ',' << Fmt("%.6f", row.metrics.rmse) << ','
        << Fmt("%.6f", row.metrics.max_error) << '\n';
  }
}

std::vector<ExposureRow> ParseExposureTable(std::string_view text) {
  std::vector<ExposureRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> fields;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        fields.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw Error("");
      } catch (...) {
        throw ConfigError("table line " + std::to_string(line_no) + ": bad number '" +
                          cell + "'");
      }
    }
    if (fields.size() != 4) {
      throw ConfigError("table line " + std::to_string(line_no) + ": expected 4 columns");
    }
    ExposureRow row{fields[0], fields[1], fields[2], fields[3]};
    if (!(row.distance > 0.0) || !(row.before > 0.0) || row.after < 0.0 ||
        row.after > row.before) {
      throw ConfigError("table line " + std::to_string(line_no) +
                        ": need distance > 0 and 0 <= after <= before");
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ConfigError("exposure table has no rows");
  return rows;
}

std::vector<ExposureRow> LoadExposureTable(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read table '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseExposureTable(text.str());
}

CalibrationReport CalibrateTable(std::span<const ExposureRow> rows, const LampModel& lamp,
                                 double exposure, double near_max) {
  std::vector<ExposureObservation> near, far;
  for (const ExposureRow& row : rows) {
    ExposureObservation obs{row.distance, exposure, row.decrease()};
    (row.distance <= near_max ? near : far).push_back(obs);
  }
  if (near.empty()) throw Error("calibrate: no rows within the near range");
  CalibrationReport report;
  report.near_max = near_max;
  report.exposure = exposure;
  report.fit = Calibrate(lamp, near);
  report.far = PredictRows(lamp, report.fit.k, far);
  return report;
}

void WriteCalibration(const CalibrationReport& report, std::ostream& out,
                      TableFormat format) {
  auto rows_out = [&](const std::vector<CalibrationRow>& rows, const char* role) {
    for (const CalibrationRow& r : rows) {
      out << Fmt("%.2f", r.observation.distance) << ',' << Fmt("%.1f", r.observation.exposure)
          << ',' << Fmt("%.3f", r.dose) << ',' << Fmt("%.2f", r.observation.decrease) << ','
          << Fmt("%.2f", r.predicted) << ',' << Fmt("%.2f", r.residual) << ',' << role
          << '\n';
    }
  };
  if (format == TableFormat::kKv) {
    out << "k = " << Fmt("%.6e", report.fit.k) << '\n'
        << "near_max = " << Fmt("%.2f", report.near_max) << '\n'
        << "exposure_s = " << Fmt("%.1f", report.exposure) << '\n'
        << "fit_rows = " << report.fit.rows.size() << '\n'
        << "report_rows = " << report.far.size() << '\n';
  } else {
    out << "# k," << Fmt("%.6e", report.fit.k) << '\n';
  }
  out << "distance,exposure,dose,measured,predicted,residual,role\n";
  rows_out(report.fit.rows, "fit");
  rows_out(report.far, "report_only");
}

}  // namespace uvbot
