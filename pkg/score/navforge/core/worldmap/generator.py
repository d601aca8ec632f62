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
"""Procedural map generation.

Maps are closed square rooms filled with axis-aligned rectangular clutter,
optionally split into a grid of sub-rooms by partition walls with door gaps.
Every clutter block keeps a free margin of ``gap`` cells to all other
occupied cells, which keeps the free space (and, with ``clearance_m`` set,
the space a robot disc can reach) in one connected component. The result is
still checked with a flood fill before it is returned.
"""

import logging
import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from score.navforge.core.worldmap.gridmap import GridMap, free_space_is_connected
from score.navforge.errors import MapGenerationError


logger = logging.getLogger(__name__)

MAX_DENSITY = 0.4
DENSITY_TOLERANCE = 0.1


class RoomStyle(str, Enum):
    OPEN = "open"
    ROOMS = "rooms"


class MapSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    size_m: float = Field(gt=0)
    obstacle_density: float = Field(default=0.0, ge=0.0, le=MAX_DENSITY)
    room_style: RoomStyle = RoomStyle.OPEN
    resolution: float = Field(default=0.1, gt=0)
    clearance_m: float = Field(default=0.0, ge=0.0)
    block_min_m: float = Field(default=0.3, gt=0)
    block_max_m: float = Field(default=1.5, gt=0)
    room_size_m: float = Field(default=5.0, gt=0)
    door_width_m: float = Field(default=1.2, gt=0)
    wall_thickness_cells: int = Field(default=2, ge=1)


def interior_density(occupied: np.ndarray) -> float:
    """Occupied fraction of the cells inside the boundary ring."""
    interior = occupied[1:-1, 1:-1]
    if interior.size == 0:
        return 0.0
    return float(np.count_nonzero(interior)) / interior.size


def _closed_room(cells: int) -> np.ndarray:
    occupied = np.zeros((cells, cells), dtype=bool)
    occupied[0, :] = occupied[-1, :] = True
    occupied[:, 0] = occupied[:, -1] = True
    return occupied


def _wall_positions(cells: int, spec: MapSpec) -> list[int]:
    rooms = max(1, round(spec.size_m / spec.room_size_m))
    return [round(i * cells / rooms) for i in range(1, rooms)]


def _add_partition_walls(occupied: np.ndarray, rng: np.random.Generator, spec: MapSpec) -> None:
    cells = occupied.shape[0]
    thickness = spec.wall_thickness_cells
    door = max(1, round(spec.door_width_m / spec.resolution))
    positions = _wall_positions(cells, spec)

    for pos in positions:
        occupied[:, pos : pos + thickness] = True
        occupied[pos : pos + thickness, :] = True

    # one door per wall segment between two crossings keeps every room reachable
    starts = [1] + [pos + thickness for pos in positions]
    ends = positions + [cells - 1]
    for pos in positions:
        for seg_lo, seg_hi in zip(starts, ends):
            width = min(door, seg_hi - seg_lo - 2)
            if width < 1:
                continue
            start = int(rng.integers(seg_lo + 1, seg_hi - width))
            occupied[start : start + width, pos : pos + thickness] = False
            start = int(rng.integers(seg_lo + 1, seg_hi - width))
            occupied[pos : pos + thickness, start : start + width] = False


def _scatter_clutter(occupied: np.ndarray, rng: np.random.Generator, spec: MapSpec, gap: int) -> bool:
    cells = occupied.shape[0]
    interior_size = (cells - 2) ** 2
    target = spec.obstacle_density * interior_size
    upper = target * (1.0 + DENSITY_TOLERANCE)
    lower = target * (1.0 - DENSITY_TOLERANCE)
    count = float(np.count_nonzero(occupied[1:-1, 1:-1]))

    if count > upper:
        raise MapGenerationError(
            f"Partition walls alone occupy {count / interior_size:.3f} of the interior, "
            f"above the requested density {spec.obstacle_density}"
        )

    side_min = max(1, round(spec.block_min_m / spec.resolution))
    side_max = max(side_min, round(spec.block_max_m / spec.resolution))
    budget = 200 + int(50 * target / max(1, side_min * side_min))

    for _ in range(budget):
        if count >= target:
            return True
        room = upper - count
        if room < 1:
            break
        width = int(rng.integers(side_min, side_max + 1))
        height = int(rng.integers(side_min, side_max + 1))
        if width * height > room:
            scale = math.sqrt(room / (width * height))
            width = max(1, math.floor(width * scale))
            height = max(1, math.floor(height * scale))
            if width * height > room:
                continue
        x_hi, y_hi = cells - gap - width, cells - gap - height
        if x_hi <= 1 + gap or y_hi <= 1 + gap:
            continue
        x0 = int(rng.integers(1 + gap, x_hi))
        y0 = int(rng.integers(1 + gap, y_hi))
        x1, y1 = x0 + width, y0 + height
        if occupied[y0 - gap : y1 + gap, x0 - gap : x1 + gap].any():
            continue
        occupied[y0:y1, x0:x1] = True
        count += width * height

    return count >= lower


def generate_map(seed: int, spec: MapSpec, max_attempts: int = 8) -> GridMap:
    """Generate a closed map with connected free space.

    :param int seed: Seed of the generation; equal seeds and specs give equal maps.
    :param MapSpec spec: Size, clutter density and layout style.
    :param int max_attempts: Number of layouts tried before giving up.
    :returns: The generated map.
    :raises MapGenerationError: If no layout satisfies density and connectivity.
    """
    cells = round(spec.size_m / spec.resolution)
    if cells < 3:
        raise MapGenerationError(f"Map of {spec.size_m} m at {spec.resolution} m/cell has no interior")
    gap = max(1, math.ceil(2 * spec.clearance_m / spec.resolution) + 1)

    for attempt in range(max_attempts):
        rng = np.random.default_rng([seed, attempt])
        occupied = _closed_room(cells)
        if spec.room_style == RoomStyle.ROOMS:
            _add_partition_walls(occupied, rng, spec)
        if not _scatter_clutter(occupied, rng, spec, gap):
            logger.debug(f"Attempt {attempt} for seed {seed} fell short of density {spec.obstacle_density}")
            continue
        if not free_space_is_connected(~occupied):
            logger.debug(f"Attempt {attempt} for seed {seed} produced disconnected free space")
            continue
        gridmap = GridMap(occupied, spec.resolution)
        logger.debug(f"Generated {gridmap!r} with density {interior_density(occupied):.3f} (seed {seed})")
        return gridmap

    raise MapGenerationError(
        f"Could not generate a {spec.size_m} m map with density {spec.obstacle_density} "
        f"after {max_attempts} attempts (seed {seed})"
    )
