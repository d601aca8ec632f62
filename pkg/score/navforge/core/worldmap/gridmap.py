# *******************************************************************************
# Copyright (c) 2026 Contributors to the Eclipse Foundation
#
# See the NOTICE file(s) distributed with this work for additional
# information regarding copyright ownership.
#
# This program and the accompanying materials are made available under the
# terms of the Apache License Version 2.0 which is available at
# https://www.apache.org/licenses/LICENSE-2.0
#
# SPDX-License-Identifier: Apache-2.0
# *******************************************************************************
"""Metric occupancy grid maps and their ``.gridmap`` text format.

File format::

    <width_cells> <height_cells> <resolution>
    <row of '#' (occupied) and '.' (free)>
    ...

Rows are written top to bottom, i.e. the first row after the header holds
the cells with the largest y index. Internally cell ``(ix, iy)`` covers
``[ix*res, (ix+1)*res) x [iy*res, (iy+1)*res)`` and is stored at
``cells[iy, ix]``.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import ndimage

from score.navforge.errors import ContractError, MapParseError


logger = logging.getLogger(__name__)

OCCUPIED_CHAR = "#"
FREE_CHAR = "."


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ContractError(f"Point coordinates must be finite, got ({self.x}, {self.y})")

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(other.x - self.x, other.y - self.y)


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    theta: float

    @property
    def position(self) -> Point2:
        return Point2(self.x, self.y)


class GridMap:
    """Immutable occupancy grid with an occupied boundary ring."""

    def __init__(self, occupied: np.ndarray, resolution: float):
        """Create a grid map from a boolean occupancy array.

        :param np.ndarray occupied: Boolean array of shape (height_cells, width_cells), True where occupied.
        :param float resolution: Cell edge length in meters.
        :raises ContractError: On empty arrays or non-positive resolution.
        """
        occupied = np.array(occupied, dtype=bool, copy=True)
        if occupied.ndim != 2 or occupied.shape[0] < 1 or occupied.shape[1] < 1:
            raise ContractError(f"Occupancy array must be two-dimensional and non-empty, got shape {occupied.shape}")
        if not (resolution > 0 and math.isfinite(resolution)):
            raise ContractError(f"Resolution must be positive, got {resolution}")

        occupied[0, :] = True
        occupied[-1, :] = True
        occupied[:, 0] = True
        occupied[:, -1] = True
        occupied.setflags(write=False)

        self._occupied = occupied
        self.resolution = float(resolution)

    @property
    def width_cells(self) -> int:
        return self._occupied.shape[1]

    @property
    def height_cells(self) -> int:
        return self._occupied.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self._occupied.shape

    @property
    def occupied(self) -> np.ndarray:
        """Read-only boolean view indexed ``[iy, ix]``."""
        return self._occupied

    @property
    def width_m(self) -> float:
        return self.width_cells * self.resolution

    @property
    def height_m(self) -> float:
        return self.height_cells * self.resolution

    @property
    def diagonal_m(self) -> float:
        return math.hypot(self.width_m, self.height_m)

    @property
    def free_cell_count(self) -> int:
        return int(self._occupied.size - np.count_nonzero(self._occupied))

    def is_occupied(self, ix: int, iy: int) -> bool:
        """Cells outside the grid count as occupied."""
        if 0 <= ix < self.width_cells and 0 <= iy < self.height_cells:
            return bool(self._occupied[iy, ix])
        return True

    def __eq__(self, other):
        if not isinstance(other, GridMap):
            return NotImplemented
        return self.resolution == other.resolution and np.array_equal(self._occupied, other._occupied)

    def __hash__(self):
        return hash((self.resolution, self._occupied.shape, self._occupied.tobytes()))

    def __repr__(self):
        return f"GridMap({self.width_cells}x{self.height_cells} cells, resolution={self.resolution})"


def world_to_cell(gridmap: GridMap, p: Point2) -> Optional[tuple[int, int]]:
    """Return the ``(ix, iy)`` index of the cell containing ``p``, or None when out of bounds."""
    ix = math.floor(p.x / gridmap.resolution)
    iy = math.floor(p.y / gridmap.resolution)
    if 0 <= ix < gridmap.width_cells and 0 <= iy < gridmap.height_cells:
        return ix, iy
    return None


def cell_center(gridmap: GridMap, cell: tuple[int, int]) -> Point2:
    ix, iy = cell
    return Point2((ix + 0.5) * gridmap.resolution, (iy + 0.5) * gridmap.resolution)


def disc_overlaps_occupied(gridmap: GridMap, center: Point2, radius: float) -> bool:
    """Check whether a disc intersects any occupied cell (or leaves the grid).

    A cell overlaps when the closest point of its square lies strictly inside
    the disc. A zero radius degenerates to "the point lies in an occupied cell".
    """
    res = gridmap.resolution
    ix_lo = math.floor((center.x - radius) / res)
    ix_hi = math.floor((center.x + radius) / res)
    iy_lo = math.floor((center.y - radius) / res)
    iy_hi = math.floor((center.y + radius) / res)
    if ix_lo < 0 or iy_lo < 0 or ix_hi >= gridmap.width_cells or iy_hi >= gridmap.height_cells:
        return True

    window = gridmap.occupied[iy_lo : iy_hi + 1, ix_lo : ix_hi + 1]
    if not window.any():
        return False

    iys, ixs = np.nonzero(window)
    ixs = ixs + ix_lo
    iys = iys + iy_lo
    nearest_x = np.clip(center.x, ixs * res, (ixs + 1) * res)
    nearest_y = np.clip(center.y, iys * res, (iys + 1) * res)
    dist2 = (nearest_x - center.x) ** 2 + (nearest_y - center.y) ** 2
    if radius <= 0:
        return bool(np.any(dist2 <= 0.0))
    return bool(np.any(dist2 < radius * radius))


def free_space_is_connected(free: np.ndarray) -> bool:
    """Return True when the True cells of ``free`` form one 4-connected component."""
    _, count = ndimage.label(free)
    return count <= 1


def serialize_map(gridmap: GridMap) -> str:
    lines = [f"{gridmap.width_cells} {gridmap.height_cells} {gridmap.resolution!r}"]
    for iy in range(gridmap.height_cells - 1, -1, -1):
        row = gridmap.occupied[iy]
        lines.append("".join(OCCUPIED_CHAR if cell else FREE_CHAR for cell in row))
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> tuple[int, int, float]:
    parts = line.split()
    if len(parts) != 3:
        raise MapParseError(f"header must be 'width_cells height_cells resolution', got '{line}'", 1)
    try:
        width, height, resolution = int(parts[0]), int(parts[1]), float(parts[2])
    except ValueError as exc:
        raise MapParseError(f"header values are not numeric: '{line}'", 1) from exc
    if width <= 0 or height <= 0:
        raise MapParseError(f"map dimensions must be positive, got {width}x{height}", 1)
    if not (resolution > 0 and math.isfinite(resolution)):
        raise MapParseError(f"resolution must be positive, got {resolution}", 1)
    return width, height, resolution


def load_map(text: str) -> GridMap:
    """Parse ``.gridmap`` text.

    :param str text: Map file content.
    :returns: The parsed map, with the boundary ring forced to occupied.
    :raises MapParseError: On malformed header, ragged or missing rows and unknown characters.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MapParseError("empty map file", 1)

    width, height, resolution = _parse_header(lines[0])
    rows = lines[1:]
    if len(rows) != height:
        line_number = height + 2 if len(rows) > height else len(lines) + 1
        raise MapParseError(f"expected {height} rows, found {len(rows)}", line_number)

    occupied = np.zeros((height, width), dtype=bool)
    for row_number, row in enumerate(rows):
        line_number = row_number + 2
        row = row.rstrip("\r")
        if len(row) != width:
            raise MapParseError(f"expected {width} cells, found {len(row)}", line_number)
        invalid = set(row) - {OCCUPIED_CHAR, FREE_CHAR}
        if invalid:
            raise MapParseError(f"unexpected characters {sorted(invalid)}", line_number)
        occupied[height - 1 - row_number] = np.frombuffer(row.encode("ascii"), dtype=np.uint8) == ord(OCCUPIED_CHAR)

    return GridMap(occupied, resolution)


def read_map(path: str | Path) -> GridMap:
    logger.debug(f"Reading map from {path}")
    return load_map(Path(path).read_text(encoding="utf-8"))


def write_map(gridmap: GridMap, path: str | Path) -> None:
    Path(path).write_text(serialize_map(gridmap), encoding="utf-8")
    logger.info(f"Map {gridmap!r} written to {path}")
