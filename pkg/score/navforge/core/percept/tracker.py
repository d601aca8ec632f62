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
"""Per-episode seen-cell tracker yielding the map information gain G.

A cell is seen once any beam traversed it. The gain of a scan is the number
of cells it marks for the first time.
"""

import logging
from pathlib import Path

import numpy as np

from score.navforge.core.sim.lidar import LidarScan, beam_angles, trace_rays
from score.navforge.core.sim.state import RobotState
from score.navforge.core.worldmap.gridmap import GridMap
from score.navforge.errors import ContractError


logger = logging.getLogger(__name__)


class OccupancyTracker:
    def __init__(self, shape: tuple[int, int]):
        self.seen = np.zeros(shape, dtype=bool)
        self.seen_count = 0

    @classmethod
    def for_map(cls, gridmap: GridMap) -> "OccupancyTracker":
        return cls(gridmap.shape)

    def reset(self):
        self.seen[:] = False
        self.seen_count = 0

    def mark(self, flat_cells: np.ndarray) -> int:
        """Mark flat cell indices as seen and return how many were new."""
        view = self.seen.reshape(-1)
        cells = np.unique(flat_cells)
        gain = int(np.count_nonzero(~view[cells]))
        view[cells] = True
        self.seen_count += gain
        return gain


def update_tracker(tracker: OccupancyTracker, gridmap: GridMap, state: RobotState, scan: LidarScan) -> int:
    """Mark every cell traversed by the beams of ``scan`` and return the gain G.

    Cells are taken from the scan when it was recorded with traversed cells,
    otherwise the beams are traced again with the same traversal.

    :raises ContractError: If tracker and map grids differ in size.
    """
    if tracker.seen.shape != gridmap.shape:
        raise ContractError(f"Tracker grid {tracker.seen.shape} does not match map grid {gridmap.shape}")
    cells = scan.traversed_cells
    if cells is None:
        cells = trace_rays(
            gridmap, state.position, beam_angles(state.pose.theta), scan.max_range, record_cells=True
        ).cells
    return tracker.mark(cells)


def dump_pgm(tracker: OccupancyTracker, path: str | Path, gridmap: GridMap | None = None) -> None:
    """Write the tracker as a plain PGM (P2) image, top row first.

    Unseen cells are 0, seen free cells 255, seen occupied cells 128 when a
    map is given.
    """
    image = np.where(tracker.seen, 255, 0).astype(np.int64)
    if gridmap is not None:
        image[tracker.seen & gridmap.occupied] = 128
    height, width = image.shape
    lines = ["P2", f"{width} {height}", "255"]
    lines += [" ".join(str(value) for value in row) for row in image[::-1]]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
    logger.debug(f"Tracker with {tracker.seen_count} seen cells written to {path}")
