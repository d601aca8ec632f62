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
"""Bundled maps and rosters.

The bundled maps are committed ``.gridmap`` files with a committed default
roster each: training-style maps of 12, 20 and 40 m, test-style maps of 40,
40 and 60 m, and a low-clutter 12 m map for quick learning runs. They are
frozen fixtures; ``navforge map-gen`` draws candidates for new ones. A map
reference is either one of these ids or a path to a ``.gridmap`` file.
"""

import functools
import logging
from pathlib import Path

from score.navforge.core.worldmap.gridmap import GridMap, read_map
from score.navforge.core.worldmap.roster import (
    DEFAULT_ROSTER_SIZE,
    ScenarioRoster,
    generate_roster,
    read_roster,
)
from score.navforge.errors import ConfigError


logger = logging.getLogger(__name__)

MAP_SUFFIX = ".gridmap"
ROSTER_SUFFIX = ".roster"
ROBOT_CLEARANCE_M = 0.3
BUNDLED_DIR = Path(__file__).resolve().parent / "bundled"

BUNDLED_MAPS: dict[str, str] = {
    "desk-12": "12 m open floor, low clutter",
    "train-12": "12 m open floor",
    "train-20": "20 m open floor",
    "train-40": "40 m, 8 m rooms joined by doors",
    "test-40a": "40 m open floor",
    "test-40b": "40 m, 8 m rooms joined by doors, dense clutter",
    "test-60": "60 m, 10 m rooms joined by doors, dense clutter",
}

# seed for rosters of maps outside the catalog
GENERATED_ROSTER_SEED = 1000


def _bundled_path(map_id: str, suffix: str) -> Path:
    if map_id not in BUNDLED_MAPS:
        raise ConfigError(f"Unknown map id '{map_id}', known ids: {sorted(BUNDLED_MAPS)}")
    return BUNDLED_DIR / f"{map_id}{suffix}"


@functools.lru_cache(maxsize=None)
def bundled_map(map_id: str) -> GridMap:
    path = _bundled_path(map_id, MAP_SUFFIX)
    logger.info(f"Loading bundled map '{map_id}' ({BUNDLED_MAPS[map_id]})")
    return read_map(path)


def bundled_roster(map_id: str, count: int = DEFAULT_ROSTER_SIZE) -> ScenarioRoster:
    """First ``count`` pairs of the committed roster of a bundled map.

    :raises ConfigError: If the map id is unknown or the roster holds fewer pairs.
    """
    roster = read_roster(_bundled_path(map_id, ROSTER_SUFFIX), map_id)
    if count > len(roster):
        raise ConfigError(
            f"The bundled roster of '{map_id}' holds {len(roster)} pairs, {count} requested; pass a roster file"
        )
    return ScenarioRoster(map_id, roster.pairs[:count])


def map_id_of(map_ref: str) -> str:
    if map_ref in BUNDLED_MAPS:
        return map_ref
    return Path(map_ref).stem


def resolve_map(map_ref: str) -> tuple[str, GridMap]:
    """Resolve a catalog id or a ``.gridmap`` path to ``(map_id, GridMap)``.

    :raises ConfigError: If the reference is neither a known id nor an existing file.
    """
    if map_ref in BUNDLED_MAPS:
        return map_ref, bundled_map(map_ref)
    path = Path(map_ref)
    if path.suffix == MAP_SUFFIX and path.is_file():
        return path.stem, read_map(path)
    raise ConfigError(f"Map reference '{map_ref}' is neither a bundled map id nor a {MAP_SUFFIX} file")


def default_roster(map_id: str, gridmap: GridMap, count: int = DEFAULT_ROSTER_SIZE) -> ScenarioRoster:
    """Committed roster of a bundled map, or a fixed-seed roster of ``count`` feasible pairs otherwise.

    A map file that only shares its name with a bundled map gets a generated roster.
    """
    if map_id in BUNDLED_MAPS and gridmap == bundled_map(map_id):
        return bundled_roster(map_id, count)
    return generate_roster(gridmap, map_id, GENERATED_ROSTER_SEED, count=count, clearance=ROBOT_CLEARANCE_M)


def resolve_roster(map_id: str, gridmap: GridMap, roster_path: str | Path | None, count: int) -> ScenarioRoster:
    if roster_path is None:
        return default_roster(map_id, gridmap, count)
    return read_roster(roster_path, map_id)
