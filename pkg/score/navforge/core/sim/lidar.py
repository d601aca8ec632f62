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
"""Planar LiDAR simulation by grid traversal.

Rays are traced with the Amanatides-Woo voxel traversal, vectorized over all
beams of a scan: every iteration advances each still-active ray into its next
cell along whichever axis boundary it reaches first. A ray ends when it
enters an occupied cell (the range is the exact distance to that cell's
boundary) or when its next boundary lies at or beyond its range limit.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from score.navforge.config import LIDAR_BEAMS, LIDAR_FOV_DEG
from score.navforge.core.sim.state import RobotState
from score.navforge.core.worldmap.gridmap import GridMap, Point2, world_to_cell
from score.navforge.errors import ContractError


logger = logging.getLogger(__name__)

BEAM_OFFSETS = np.deg2rad(-0.5 * LIDAR_FOV_DEG + np.arange(LIDAR_BEAMS) * LIDAR_FOV_DEG / (LIDAR_BEAMS - 1))
BEAM_SPACING = math.radians(LIDAR_FOV_DEG / (LIDAR_BEAMS - 1))
BEAM_OFFSETS.setflags(write=False)


@dataclass(frozen=True)
class RayTrace:
    distances: np.ndarray
    # flat cell indices ``iy * width + ix`` entered by the rays, origin cell included; may repeat
    cells: Optional[np.ndarray] = None


@dataclass(frozen=True)
class LidarScan:
    ranges: np.ndarray
    max_range: float
    traversed_cells: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.ranges)


def _origin_cell(gridmap: GridMap, origin: Point2) -> tuple[int, int]:
    cell = world_to_cell(gridmap, origin)
    if cell is None or gridmap.is_occupied(*cell):
        raise ContractError(f"Ray origin ({origin.x}, {origin.y}) is not in free space of {gridmap!r}")
    return cell


def trace_rays(
    gridmap: GridMap,
    origin: Point2,
    angles: np.ndarray,
    limits: float | np.ndarray,
    record_cells: bool = False,
) -> RayTrace:
    """Trace rays from a common origin through the grid.

    :param GridMap gridmap: Map to trace in.
    :param Point2 origin: Ray origin, must lie in a free cell.
    :param np.ndarray angles: Ray directions in radians, world frame.
    :param limits: Range limit in meters, scalar or one per ray.
    :param bool record_cells: Also return the cells every ray entered.
    :returns: Distances clipped to the limits, and the entered cells when requested.
    :raises ContractError: If the origin lies in an occupied cell or off the grid.
    """
    ix0, iy0 = _origin_cell(gridmap, origin)
    angles = np.asarray(angles, dtype=np.float64)
    n = angles.size
    limits = np.broadcast_to(np.asarray(limits, dtype=np.float64), (n,))
    res = gridmap.resolution
    width, height = gridmap.width_cells, gridmap.height_cells
    occupied = gridmap.occupied

    dx = np.cos(angles)
    dy = np.sin(angles)
    step_x = np.sign(dx).astype(np.int64)
    step_y = np.sign(dy).astype(np.int64)
    with np.errstate(divide="ignore", invalid="ignore"):
        boundary_x = (ix0 + (step_x > 0)) * res
        boundary_y = (iy0 + (step_y > 0)) * res
        t_max_x = np.where(step_x != 0, (boundary_x - origin.x) / dx, np.inf)
        t_max_y = np.where(step_y != 0, (boundary_y - origin.y) / dy, np.inf)
        t_delta_x = np.where(step_x != 0, res / np.abs(dx), np.inf)
        t_delta_y = np.where(step_y != 0, res / np.abs(dy), np.inf)

    cx = np.full(n, ix0, dtype=np.int64)
    cy = np.full(n, iy0, dtype=np.int64)
    distances = limits.copy()
    active = np.ones(n, dtype=bool)
    recorded = [np.array([iy0 * width + ix0], dtype=np.int64)] if record_cells else None

    while active.any():
        idx = np.flatnonzero(active)
        along_x = t_max_x[idx] <= t_max_y[idx]
        t_entry = np.where(along_x, t_max_x[idx], t_max_y[idx])

        reached = t_entry >= limits[idx]
        active[idx[reached]] = False
        moving = idx[~reached]
        along_x = along_x[~reached]
        t_entry = t_entry[~reached]

        mx = moving[along_x]
        my = moving[~along_x]
        cx[mx] += step_x[mx]
        t_max_x[mx] += t_delta_x[mx]
        cy[my] += step_y[my]
        t_max_y[my] += t_delta_y[my]

        inside = (cx[moving] >= 0) & (cx[moving] < width) & (cy[moving] >= 0) & (cy[moving] < height)
        hit = ~inside
        hit[inside] = occupied[cy[moving][inside], cx[moving][inside]]
        distances[moving[hit]] = t_entry[hit]
        active[moving[hit]] = False

        if record_cells:
            recorded.append(cy[moving][inside] * width + cx[moving][inside])

    cells = np.concatenate(recorded) if record_cells else None
    return RayTrace(distances, cells)


def raycast(gridmap: GridMap, origin: Point2, angle: float, max_range: float) -> float:
    """Distance from ``origin`` to the first occupied cell along ``angle``, capped at ``max_range``."""
    return float(trace_rays(gridmap, origin, np.array([angle]), max_range).distances[0])


def beam_angles(theta: float) -> np.ndarray:
    """World-frame directions of all beams for a robot heading ``theta``."""
    return theta + BEAM_OFFSETS


def scan(gridmap: GridMap, state: RobotState, max_range: float, record_cells: bool = False) -> LidarScan:
    """Cast all beams from the robot center.

    :param GridMap gridmap: Map to scan.
    :param RobotState state: Robot state, its center must be in free space.
    :param float max_range: Sensor range in meters.
    :param bool record_cells: Keep the traversed cells for the occupancy tracker.
    :returns: Scan with beam ``i`` at ``theta - 135 deg + i * 270/683 deg``.
    """
    trace = trace_rays(gridmap, state.position, beam_angles(state.pose.theta), max_range, record_cells)
    ranges = trace.distances
    ranges.setflags(write=False)
    return LidarScan(ranges, max_range, trace.cells)
