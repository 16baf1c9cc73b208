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

#include "uvbot/disinfection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace uvbot {

void LampModel::validate() const {
  if (!(uvc_power_per_lamp > 0.0)) throw Error("lamp: uvc power must be > 0");
  if (lamps_per_side != 4) throw Error("lamp: lamps_per_side must be 4");
  if (!(reflector_gain >= 1.0)) throw Error("lamp: reflector_gain must be >= 1");
  if (!(r_min > 0.0)) throw Error("lamp: r_min must be > 0");
}

double LampModel::bank_irradiance(int lamps_on, double r) const {
  const double clamped = std::max(r, r_min);
  return lamps_on * uvc_power_per_lamp * reflector_gain /
         (4.0 * kPi * clamped * clamped);
}

double IrradianceAt(const Pose2D& robot, const LampBanks& banks, Point2D point,
                    const OccupancyGrid& grid, const LampModel& lamp) {
  double total = 0.0;
  bool visible_known = false;
  bool visible = false;
  for (const LampBank& bank : banks) {
    if (bank.lamps_on <= 0 || !InHalfPlane(robot, bank.side, point)) continue;
    if (!visible_known) {
      visible = LineOfSight(grid, robot.position(), point);
      visible_known = true;
    }
    if (!visible) return 0.0;
    total += lamp.bank_irradiance(bank.lamps_on, Distance(robot.position(), point));
  }
  return total;
}

DoseField::DoseField(const OccupancyGrid& grid)
    : geometry_(grid), dose_(grid.size(), 0.0) {}

double DoseField::max() const {
  return dose_.empty() ? 0.0 : *std::max_element(dose_.begin(), dose_.end());
}

void DoseField::accumulate(const Pose2D& robot, const LampBanks& banks,
                           const OccupancyGrid& grid, const LampModel& lamp,
                           double dt) {
  if (!(dt > 0.0)) throw Error("accumulate_dose: dt must be > 0");
  if (grid.width() != geometry_.width() || grid.height() != geometry_.height()) {
    throw Error("accumulate_dose: grid does not match the dose field");
  }
  if (std::none_of(banks.begin(), banks.end(),
                   [](const LampBank& b) { return b.lamps_on > 0; })) {
    return;
  }
  for (std::size_t i = 0; i < dose_.size(); ++i) {
    if (grid.cells()[i] != CellState::kFree) continue;
    const Point2D center = grid.cell_center(grid.cell_of(i));
    dose_[i] += IrradianceAt(robot, banks, center, grid, lamp) * dt;
  }
}

double TbcDecrease(double dose, const SurvivalModel& model) {
  if (dose < 0.0) throw Error("tbc_decrease: negative dose");
  return 100.0 * -std::expm1(-model.k * dose);
}

double BankDose(const LampModel& lamp, double distance, double exposure) {
  return lamp.bank_irradiance(lamp.lamps_per_side, distance) * exposure;
}

std::vector<CalibrationRow> PredictRows(const LampModel& lamp, double k,
                                        std::span<const ExposureObservation> rows) {
  std::vector<CalibrationRow> out;
  for (const ExposureObservation& obs : rows) {
    CalibrationRow row{obs, BankDose(lamp, obs.distance, obs.exposure)};
    row.predicted = TbcDecrease(row.dose, SurvivalModel{k});
    row.residual = row.predicted - obs.decrease;
    out.push_back(row);
  }
  return out;
}

CalibrationResult Calibrate(const LampModel& lamp,
                            std::span<const ExposureObservation> observations) {
  if (observations.empty()) throw Error("calibrate: no observations");
  double sum_dy = 0.0;
  double sum_dd = 0.0;
  for (const ExposureObservation& obs : observations) {
    if (obs.decrease < 0.0 || obs.decrease > 100.0) {
      throw Error("calibrate: decrease must lie in [0, 100]");
    }
    if (!(obs.distance > 0.0) || !(obs.exposure > 0.0)) {
      throw Error("calibrate: distance and exposure must be > 0");
    }
    if (obs.decrease >= 100.0) continue;
    const double dose = BankDose(lamp, obs.distance, obs.exposure);
    const double y = -std::log1p(-obs.decrease / 100.0);
    sum_dy += dose * y;
    sum_dd += dose * dose;
  }
  if (sum_dd == 0.0) {
    throw Error("calibrate: every observation is at 100 % (log singularity)");
  }
  CalibrationResult result;
  result.k = sum_dy / sum_dd;
  if (!(result.k > 0.0)) throw Error("calibrate: fitted k is not positive");
  result.rows = PredictRows(lamp, result.k, observations);
  return result;
}

std::string FormatDosePgm(const DoseField& field) {
  const OccupancyGrid& g = field.geometry();
  const double peak = field.max();
  char header[160];
  std::snprintf(header, sizeof(header),
                "P5\n# max_dose_j_per_m2 %.9g\n%d %d\n65535\n", peak, g.width(),
                g.height());
  std::string out(header);
  out.reserve(out.size() + 2 * g.size());
  for (int y = g.height() - 1; y >= 0; --y) {
    for (int x = 0; x < g.width(); ++x) {
      const double v = peak > 0.0 ? field.at({x, y}) / peak : 0.0;
      const auto level = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
      out.push_back(static_cast<char>((level >> 8) & 0xFF));
      out.push_back(static_cast<char>(level & 0xFF));
    }
  }
  return out;
}

void WriteDosePgm(const DoseField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << FormatDosePgm(field);
}

void WriteDoseCsv(const DoseField& field, const SurvivalModel& model,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "x,y,dose,predicted_decrease\n";
  const OccupancyGrid& g = field.geometry();
  char line[128];
  for (std::size_t i = 0; i < g.size(); ++i) {
    const CellIndex c = g.cell_of(i);
    const Point2D p = g.cell_center(c);
    const double dose = field.values()[i];
    std::snprintf(line, sizeof(line), "%.4f,%.4f,%.6g,%.4f\n", p.x, p.y, dose,
                  TbcDecrease(dose, model));
    out << line;
  }
}

}  // namespace uvbot
