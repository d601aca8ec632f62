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
"""Start/goal scenario rosters and free-pose sampling.

Roster files hold one pair per line::

    # start_x start_y heading goal_x goal_y
    1.5 1.5 0.0 10.0 10.0

Coordinates are meters, the heading is in radians. Blank lines and text
after ``#`` are ignored.
"""

import functools
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from score.navforge.core.worldmap.gridmap import GridMap, Point2, Pose, cell_center, disc_overlaps_occupied
from score.navforge.errors import ConfigError, MapParseError, SamplingError


logger = logging.getLogger(__name__)

DEFAULT_ROSTER_SIZE = 15


@dataclass(frozen=True)
class ScenarioPair:
    start: Pose
    goal: Point2

    @property
    def separation(self) -> float:
        return self.start.position.distance_to(self.goal)


@dataclass(frozen=True)
class ScenarioRoster:
    map_id: str
    pairs: tuple[ScenarioPair, ...] = field(default_factory=tuple)

    def __len__(self):
        return len(self.pairs)

    def pair_for_trial(self, trial: int) -> ScenarioPair:
        return self.pairs[trial % len(self.pairs)]


def _uniform_heading(rng: np.random.Generator) -> float:
    # uniform on (-pi, pi]
    return math.pi - rng.uniform(0.0, 2.0 * math.pi)


@functools.lru_cache(maxsize=16)
def clearance_candidates(gridmap: GridMap, clearance: float) -> np.ndarray:
    """Return ``(iy, ix)`` indices of free cells whose centers may satisfy ``clearance``.

    A cell center whose nearest occupied cell center is closer than
    ``clearance + resolution / 2`` cannot keep a disc of radius ``clearance``
    off every occupied square, so only the remaining cells need an exact check.
    """
    free = ~gridmap.occupied
    distance = ndimage.distance_transform_edt(free) * gridmap.resolution
    necessary = free & (distance >= clearance + 0.5 * gridmap.resolution - 1e-9)
    candidates = np.argwhere(necessary)
    candidates.setflags(write=False)
    return candidates


def sample_free_pose(gridmap: GridMap, rng: np.random.Generator, clearance: float) -> Pose:
    """Sample a cell-center pose with no occupied cell within ``clearance``.

    :param GridMap gridmap: Map to sample in.
    :param np.random.Generator rng: Random stream owned by the caller.
    :param float clearance: Minimum distance in meters to every occupied cell.
    :returns: Pose at a qualifying cell center, heading uniform in (-pi, pi].
    :raises SamplingError: If no free cell has the requested clearance.
    """
    candidates = clearance_candidates(gridmap, clearance)
    for index in rng.permutation(len(candidates)):
        iy, ix = candidates[index]
        center = cell_center(gridmap, (int(ix), int(iy)))
        if not disc_overlaps_occupied(gridmap, center, clearance):
            return Pose(center.x, center.y, _uniform_heading(rng))
    raise SamplingError(f"No free cell of {gridmap!r} has a clearance of {clearance} m")


def sample_start_goal(
    gridmap: GridMap,
    rng: np.random.Generator,
    clearance: float,
    min_separation: float,
    max_tries: int = 200,
) -> ScenarioPair:
    """Sample a start pose and a goal at least ``min_separation`` meters apart."""
    for _ in range(max_tries):
        start = sample_free_pose(gridmap, rng, clearance)
        goal = sample_free_pose(gridmap, rng, clearance)
        pair = ScenarioPair(start, goal.position)
        if pair.separation >= min_separation:
            return pair
    raise SamplingError(
        f"No start/goal pair {min_separation} m apart found in {gridmap!r} after {max_tries} tries"
    )


def generate_roster(
    gridmap: GridMap,
    map_id: str,
    seed: int,
    count: int = DEFAULT_ROSTER_SIZE,
    clearance: float = 0.3,
    min_separation: float = 2.0,
) -> ScenarioRoster:
    rng = np.random.default_rng(seed)
    pairs = tuple(sample_start_goal(gridmap, rng, clearance, min_separation) for _ in range(count))
    return ScenarioRoster(map_id, pairs)


def validate_roster(gridmap: GridMap, roster: ScenarioRoster, clearance: float) -> None:
    """Check every start and goal of a roster against the map.

    :raises ConfigError: Naming the first infeasible pair.
    """
    if not roster.pairs:
        raise ConfigError(f"Roster for map '{roster.map_id}' is empty")
    for index, pair in enumerate(roster.pairs):
        for name, point in (("start", pair.start.position), ("goal", pair.goal)):
            if disc_overlaps_occupied(gridmap, point, clearance):
                raise ConfigError(
                    f"Roster pair {index} of map '{roster.map_id}': {name} ({point.x}, {point.y}) "
                    f"is not free with clearance {clearance} m"
                )


def load_roster(text: str, map_id: str) -> ScenarioRoster:
    pairs = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise MapParseError(f"expected 'start_x start_y heading goal_x goal_y', got '{raw}'", line_number)
        try:
            sx, sy, heading, gx, gy = (float(part) for part in parts)
            pairs.append(ScenarioPair(Pose(sx, sy, heading), Point2(gx, gy)))
        except ValueError as exc:
            raise MapParseError(f"non-numeric value in '{raw}'", line_number) from exc
    return ScenarioRoster(map_id, tuple(pairs))


def serialize_roster(roster: ScenarioRoster) -> str:
    lines = [f"# roster for {roster.map_id}: start_x start_y heading goal_x goal_y"]
    for pair in roster.pairs:
        lines.append(f"{pair.start.x!r} {pair.start.y!r} {pair.start.theta!r} {pair.goal.x!r} {pair.goal.y!r}")
    return "\n".join(lines) + "\n"


def read_roster(path: str | Path, map_id: str) -> ScenarioRoster:
    return load_roster(Path(path).read_text(encoding="utf-8"), map_id)


def write_roster(roster: ScenarioRoster, path: str | Path) -> None:
    Path(path).write_text(serialize_roster(roster), encoding="utf-8")
    logger.info(f"Roster with {len(roster)} pairs written to {path}")
