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

#ifndef UVBOT_DISINFECTION_HPP_
#define UVBOT_DISINFECTION_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "uvbot/geometry.hpp"
#include "uvbot/safety.hpp"
#include "uvbot/world.hpp"

namespace uvbot {

// Two banks of germicidal lamps, each emitting into its own half-plane. The
// lamp column is collapsed to a point source at the robot center.
struct LampModel {
  double uvc_power_per_lamp = 12.0;  // W of UV-C output
  int lamps_per_side = 4;
  double reflector_gain = 1.3;
  double r_min = 0.3;  // near-field clamp, m

  void validate() const;
  // Irradiance (W/m^2) of one bank with `lamps_on` lamps at distance r, in
  // its half-plane and unobstructed.
  double bank_irradiance(int lamps_on, double r) const;
};

// Sum over lit banks of lamps * P * gain / (4 pi max(r, r_min)^2) for
// points in the bank's half-plane with a clear line of sight.
double IrradianceAt(const Pose2D& robot, const LampBanks& banks, Point2D point,
                    const OccupancyGrid& grid, const LampModel& lamp);

// Accumulated fluence (J/m^2) per grid cell.
class DoseField {
 public:
  explicit DoseField(const OccupancyGrid& grid);

  const OccupancyGrid& geometry() const { return geometry_; }
  double at(CellIndex c) const { return dose_[geometry_.index(c)]; }
  std::span<const double> values() const { return dose_; }
  double max() const;

  // Adds irradiance_at(cell center) * dt to every free cell.
  void accumulate(const Pose2D& robot, const LampBanks& banks,
                  const OccupancyGrid& grid, const LampModel& lamp, double dt);

 private:
  OccupancyGrid geometry_;
  std::vector<double> dose_;
};

// Log-linear survival: S(D) = exp(-k D).
struct SurvivalModel {
  double k = 1.0561e-3;  // m^2/J, fitted to the near rows of the lab table
};

// Percent reduction of the bacterial count after `dose`: 100 (1 - exp(-k D)).
double TbcDecrease(double dose, const SurvivalModel& model);

struct ExposureObservation {
  double distance = 0.0;  // m
  double exposure = 0.0;  // s
  double decrease = 0.0;  // percent
};

struct CalibrationRow {
  ExposureObservation observation;
  double dose = 0.0;  // J/m^2
  double predicted = 0.0;  // percent
  double residual = 0.0;  // predicted - measured, percentage points
};

struct CalibrationResult {
  double k = 0.0;
  std::vector<CalibrationRow> rows;
};

// Dose a full bank delivers at `distance` over `exposure` seconds.
double BankDose(const LampModel& lamp, double distance, double exposure);

// Least-squares fit through the origin of y = -ln(1 - decrease/100) against
// the bank dose D: k = sum(D y) / sum(D^2). Rows at 100 % are skipped.
CalibrationResult Calibrate(const LampModel& lamp,
                            std::span<const ExposureObservation> observations);

// Evaluates an already fitted k on further rows (residuals only).
std::vector<CalibrationRow> PredictRows(const LampModel& lamp, double k,
                                        std::span<const ExposureObservation> rows);

// 16-bit binary PGM with the top map row first, scaled linearly so that
// 65535 corresponds to the declared maximum (recorded in a header comment).
void WriteDosePgm(const DoseField& field, const std::filesystem::path& path);
std::string FormatDosePgm(const DoseField& field);

// CSV rows "x,y,dose,predicted_decrease" for every cell center.
void WriteDoseCsv(const DoseField& field, const SurvivalModel& model,
                  const std::filesystem::path& path);

}  // namespace uvbot

#endif  // UVBOT_DISINFECTION_HPP_
