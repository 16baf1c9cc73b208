#!/usr/bin/env python3
# Copyright 2026 The uvbot Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the fixture maps in data/maps."""

import pathlib

RES = 0.05


class Grid:
    def __init__(self, width_m, height_m):
        # One wall cell on every side; the interior starts at the origin.
        self.w = round(width_m / RES) + 2
        self.h = round(height_m / RES) + 2
        self.cells = [["."] * self.w for _ in range(self.h)]
        self.box(-RES, -RES, width_m + RES, 0.0)
        self.box(-RES, height_m, width_m + RES, height_m + RES)
        self.box(-RES, -RES, 0.0, height_m + RES)
        self.box(width_m, -RES, width_m + RES, height_m + RES)

    def box(self, x0, y0, x1, y1):
        for y in range(self.h):
            cy = -RES + (y + 0.5) * RES
            if not y0 < cy < y1:
                continue
            for x in range(self.w):
                cx = -RES + (x + 0.5) * RES
                if x0 < cx < x1:
                    self.cells[y][x] = "#"
        return self

    def text(self):
        lines = [f"GRID {self.w} {self.h} {RES:g} {-RES:g} {-RES:g}"]
        lines += ["".join(row) for row in reversed(self.cells)]
        return "\n".join(lines) + "\n"


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "maps"
    out.mkdir(parents=True, exist_ok=True)
    maps = {
        "room_6x4.5.grid": Grid(6.0, 4.5),
        "lane_8x1.grid": Grid(8.0, 1.0),
        # Corridor with irregular wall bumps so that no two stretches look
        # alike from the middle of the hall.
        "corridor_8x2.4.grid": Grid(8.0, 2.4)
        .box(1.5, 0.0, 2.0, 0.4)
        .box(4.0, 0.0, 4.3, 0.3)
        .box(6.2, 0.0, 7.0, 0.5)
        .box(2.8, 1.9, 3.4, 2.4)
        .box(5.0, 2.1, 5.2, 2.4)
        .box(7.3, 2.0, 7.6, 2.4),
        # Room with a shelf that hides part of the floor from the robot.
        "room_shelf_6x4.5.grid": Grid(6.0, 4.5).box(2.6, 2.6, 3.4, 3.0),
        "warehouse_20x12.grid": Grid(20.0, 12.0)
        .box(3.0, 2.0, 8.0, 2.6)
        .box(3.0, 5.0, 8.0, 5.6)
        .box(3.0, 8.0, 8.0, 8.6)
        .box(11.0, 2.0, 16.0, 2.6)
        .box(11.0, 5.0, 16.0, 5.6)
        .box(11.0, 8.0, 16.0, 8.6)
        .box(18.5, 10.5, 20.0, 12.0),
    }
    for name, grid in maps.items():
        (out / name).write_text(grid.text())


if __name__ == "__main__":
    main()
