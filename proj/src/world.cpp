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

#include "uvbot/world.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace uvbot {

namespace {

std::string FormatNumber(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

template <typename T>
T ParseNumber(std::string_view token, std::string_view what) {
  T value{};
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    throw Error("grid header: bad " + std::string(what) + " '" +
                std::string(token) + "'");
  }
  return value;
}

char CellChar(CellState s) {
  switch (s) {
    case CellState::kFree: return '.';
    case CellState::kOccupied: return '#';
    case CellState::kUnknown: return '?';
  }
  return '?';
}

}  // namespace

OccupancyGrid::OccupancyGrid(int width, int height, double resolution,
                             Point2D origin, CellState fill)
    : width_(width), height_(height), resolution_(resolution), origin_(origin) {
  if (width < 1 || height < 1) throw Error("grid dimensions must be >= 1");
  if (!(resolution > 0.0)) throw Error("grid resolution must be > 0");
  cells_.assign(static_cast<std::size_t>(width) * height, fill);
}

Rect OccupancyGrid::bounds() const {
  return {origin_.x, origin_.y, origin_.x + width_ * resolution_,
          origin_.y + height_ * resolution_};
}

void OccupancyGrid::fill_rect(const Rect& r, CellState s) {
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (r.contains(cell_center({x, y}))) set({x, y}, s);
    }
  }
}

OccupancyGrid ParseGrid(std::string_view text) {
  const auto eol = text.find('\n');
  if (eol == std::string_view::npos) throw Error("grid: missing header line");
  std::string_view header = text.substr(0, eol);
  std::vector<std::string_view> tokens;
  while (!header.empty()) {
    const auto start = header.find_first_not_of(' ');
    if (start == std::string_view::npos) break;
    header.remove_prefix(start);
    const auto stop = std::min(header.find(' '), header.size());
    tokens.push_back(header.substr(0, stop));
    header.remove_prefix(stop);
  }
  if (tokens.size() != 6 || tokens[0] != "GRID") {
    throw Error("grid: header must be 'GRID <w> <h> <res> <ox> <oy>'");
  }
  const int width = ParseNumber<int>(tokens[1], "width");
  const int height = ParseNumber<int>(tokens[2], "height");
  const double res = ParseNumber<double>(tokens[3], "resolution");
  const Point2D origin{ParseNumber<double>(tokens[4], "origin_x"),
                       ParseNumber<double>(tokens[5], "origin_y")};
  if (width < 1 || height < 1 || !(res > 0.0)) {
    throw Error("grid: dimensions and resolution must be positive");
  }
  OccupancyGrid grid(width, height, res, origin);

  std::string_view body = text.substr(eol + 1);
  std::size_t cells_read = 0;
  int row = 0;
  while (!body.empty()) {
    const auto end = body.find('\n');
    std::string_view line = body.substr(0, end);
    body = end == std::string_view::npos ? std::string_view{} : body.substr(end + 1);
    if (row >= height) {
      throw Error("grid: more rows than the declared height " +
                  std::to_string(height));
    }
    if (static_cast<int>(line.size()) != width) {
      throw Error("grid: row " + std::to_string(row) + " has " +
                  std::to_string(line.size()) + " cells, expected " +
                  std::to_string(width));
    }
    const int y = height - 1 - row;
    for (int x = 0; x < width; ++x) {
      CellState s;
      switch (line[x]) {
        case '.': s = CellState::kFree; break;
        case '#': s = CellState::kOccupied; break;
        case '?': s = CellState::kUnknown; break;
        default:
          throw Error("grid: invalid cell character '" + std::string(1, line[x]) +
                      "' at row " + std::to_string(row));
      }
      grid.set({x, y}, s);
    }
    cells_read += line.size();
    ++row;
  }
  if (row != height) {
    throw Error("grid: expected " + std::to_string(width * height) +
                " cells, found " + std::to_string(cells_read));
  }
  return grid;
}

std::string FormatGrid(const OccupancyGrid& grid) {
  std::string out = "GRID " + std::to_string(grid.width()) + " " +
                    std::to_string(grid.height()) + " " +
                    FormatNumber(grid.resolution()) + " " +
                    FormatNumber(grid.origin().x) + " " +
                    FormatNumber(grid.origin().y) + "\n";
  out.reserve(out.size() + grid.size() + grid.height());
  for (int y = grid.height() - 1; y >= 0; --y) {
    for (int x = 0; x < grid.width(); ++x) out.push_back(CellChar(grid.at({x, y})));
    out.push_back('\n');
  }
  return out;
}

OccupancyGrid LoadMap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open map file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseGrid(buffer.str());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void SaveMap(const OccupancyGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write map file '" + path.string() + "'");
  out << FormatGrid(grid);
}

double Raycast(const OccupancyGrid& grid, Point2D origin, double angle,
               double max_range) {
  const CellIndex start = grid.world_to_cell(origin);
  if (!grid.contains(start)) throw Error("raycast origin outside the map");
  if (grid.blocks(start)) throw Error("raycast origin inside an obstacle");
  const Point2D end{origin.x + max_range * std::cos(angle),
                    origin.y + max_range * std::sin(angle)};
  double hit = max_range;
  TraverseSegment(grid, origin, end, [&](CellIndex c, double t) {
    if (grid.blocks(c)) {
      hit = t;
      return false;
    }
    return true;
  });
  return std::min(hit, max_range);
}

bool LineOfSight(const OccupancyGrid& grid, Point2D a, Point2D b) {
  return TraverseSegment(grid, a, b,
                         [&](CellIndex c, double) { return !grid.blocks(c); });
}

double RayDiscDistance(Point2D origin, double angle, Point2D center,
                       double radius) {
  const double ux = std::cos(angle);
  const double uy = std::sin(angle);
  const double ox = center.x - origin.x;
  const double oy = center.y - origin.y;
  const double along = ox * ux + oy * uy;
  const double perp_sq = ox * ox + oy * oy - along * along;
  const double r_sq = radius * radius;
  if (perp_sq > r_sq) return std::numeric_limits<double>::infinity();
  const double half_chord = std::sqrt(r_sq - perp_sq);
  const double near = along - half_chord;
  if (near >= 0.0) return near;
  // Origin inside the disc.
  if (along + half_chord >= 0.0) return 0.0;
  return std::numeric_limits<double>::infinity();
}

void ValidateHuman(const HumanAgent& agent) {
  if (!(agent.radius > 0.0)) {
    throw Error("human " + std::to_string(agent.id) + ": radius must be > 0");
  }
  for (std::size_t i = 1; i < agent.schedule.size(); ++i) {
    if (!(agent.schedule[i].t > agent.schedule[i - 1].t)) {
      throw Error("human " + std::to_string(agent.id) +
                  ": schedule times must be strictly increasing");
    }
  }
}

std::vector<HumanAgent> StepHumans(std::vector<HumanAgent> agents, double t) {
  for (HumanAgent& agent : agents) {
    const auto& sched = agent.schedule;
    if (sched.empty()) continue;
    Point2D p;
    double heading = agent.pose.theta;
    if (t <= sched.front().t) {
      p = sched.front().position;
    } else if (t >= sched.back().t) {
      p = sched.back().position;
      if (sched.size() >= 2) {
        const Point2D d = sched.back().position - sched[sched.size() - 2].position;
        if (Norm(d) > 0.0) heading = std::atan2(d.y, d.x);
      }
    } else {
      const auto next = std::upper_bound(
          sched.begin(), sched.end(), t,
          [](double value, const Waypoint& w) { return value < w.t; });
      const Waypoint& b = *next;
      const Waypoint& a = *(next - 1);
      const double alpha = (t - a.t) / (b.t - a.t);
      p = a.position + alpha * (b.position - a.position);
      const Point2D d = b.position - a.position;
      if (Norm(d) > 0.0) heading = std::atan2(d.y, d.x);
    }
    agent.pose = MakePose(p.x, p.y, heading);
  }
  return agents;
}

}  // namespace uvbot
