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
"""Fine-step ray-marching reference for the grid raycaster.

The oracle samples each ray every ``step`` meters and reports the first
sample that falls into an occupied cell. Where two consecutive samples lie
in diagonal neighbours, the cell the ray clipped in between is resolved from
the two boundary crossing times, so corner clips shorter than ``step`` are
not missed.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from score.navforge.core.sim.lidar import raycast
from score.navforge.core.worldmap.gridmap import GridMap, Point2
from score.navforge.core.worldmap.roster import sample_free_pose


logger = logging.getLogger(__name__)

ORACLE_STEP = 1e-4


def _occupied_at(gridmap: GridMap, ix: np.ndarray, iy: np.ndarray) -> np.ndarray:
    inside = (ix >= 0) & (ix < gridmap.width_cells) & (iy >= 0) & (iy < gridmap.height_cells)
    result = np.ones(ix.shape, dtype=bool)
    result[inside] = gridmap.occupied[iy[inside], ix[inside]]
    return result


def march_ray(gridmap: GridMap, origin: Point2, angle: float, max_range: float, step: float = ORACLE_STEP) -> float:
    res = gridmap.resolution
    dx, dy = math.cos(angle), math.sin(angle)
    t = np.arange(0.0, max_range + step, step)
    t[-1] = min(t[-1], max_range)
    ix = np.floor((origin.x + t * dx) / res).astype(np.int64)
    iy = np.floor((origin.y + t * dy) / res).astype(np.int64)

    hit = _occupied_at(gridmap, ix, iy)
    # diagonal jumps between consecutive samples pass through one more cell
    diagonal = np.flatnonzero((ix[1:] != ix[:-1]) & (iy[1:] != iy[:-1]))
    corner_t = np.full(t.shape, np.inf)
    for k in diagonal:
        bx = max(ix[k], ix[k + 1]) * res
        by = max(iy[k], iy[k + 1]) * res
        tx = (bx - origin.x) / dx
        ty = (by - origin.y) / dy
        between = (ix[k + 1], iy[k]) if tx < ty else (ix[k], iy[k + 1])
        if _occupied_at(gridmap, np.array([between[0]]), np.array([between[1]]))[0]:
            hit[k + 1] = True
            corner_t[k + 1] = min(tx, ty)

    first = np.flatnonzero(hit)
    if first.size == 0:
        return float(max_range)
    k = first[0]
    return float(min(t[k], corner_t[k], max_range))


@dataclass(frozen=True)
class OracleComparison:
    rays: int
    max_error: float
    mean_error: float

    def passes(self, tolerance: float) -> bool:
        return self.max_error <= tolerance


def compare_with_oracle(
    gridmap: GridMap,
    rng: np.random.Generator,
    rays: int,
    max_range: float,
    clearance: float = 0.0,
) -> OracleComparison:
    """Compare :func:`raycast` against :func:`march_ray` on random free origins and directions."""
    errors = np.empty(rays)
    for i in range(rays):
        pose = sample_free_pose(gridmap, rng, clearance)
        origin = Point2(
            pose.x + rng.uniform(-0.5, 0.5) * gridmap.resolution * 0.999,
            pose.y + rng.uniform(-0.5, 0.5) * gridmap.resolution * 0.999,
        )
        expected = march_ray(gridmap, origin, pose.theta, max_range)
        errors[i] = abs(raycast(gridmap, origin, pose.theta, max_range) - expected)
    comparison = OracleComparison(rays, float(errors.max(initial=0.0)), float(errors.mean()) if rays else 0.0)
    logger.debug(f"Oracle comparison over {rays} rays: max error {comparison.max_error:.3e} m")
    return comparison
