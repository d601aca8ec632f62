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
import logging
import os
from pathlib import Path

from score.navforge.config import NavforgeConfig
from score.navforge.core.worldmap.gridmap import GridMap, free_space_is_connected
from score.navforge.core.worldmap.roster import clearance_candidates
from score.navforge.errors import ConfigError


logger = logging.getLogger(__name__)


def pre_training_phase(config: NavforgeConfig, maps: dict[str, GridMap], output_dir: Path):
    _check_spawn_clearance(config)
    for map_id, gridmap in maps.items():
        _check_map(map_id, gridmap, config.train.spawn_clearance)
    _check_output_dir(output_dir)


def _check_spawn_clearance(config: NavforgeConfig):
    """Spawned robots must not start in contact with an obstacle.

    :raises ConfigError: If the spawn clearance is below the robot radius.
    """
    if config.train.spawn_clearance < config.sim.robot_radius:
        raise ConfigError(
            f"train.spawn_clearance ({config.train.spawn_clearance} m) is below "
            f"sim.robot_radius ({config.sim.robot_radius} m)"
        )
    logger.info("Check spawn clearance: OK")


def _check_map(map_id: str, gridmap: GridMap, clearance: float):
    """Check that a training map is closed, connected and has room to spawn.

    :raises ConfigError: If any of the conditions does not hold.
    """
    occupied = gridmap.occupied
    if not (occupied[0].all() and occupied[-1].all() and occupied[:, 0].all() and occupied[:, -1].all()):
        raise ConfigError(f"Map '{map_id}' is not closed")
    if not free_space_is_connected(~occupied):
        logger.warning(f"Map '{map_id}' has disconnected free regions, some start/goal pairs may be infeasible")
    if len(clearance_candidates(gridmap, clearance)) == 0:
        raise ConfigError(f"Map '{map_id}' has no free cell with {clearance} m clearance")
    logger.info(f"Check map '{map_id}' ({gridmap.free_cell_count} free cells): OK")


def _check_output_dir(output_dir: Path):
    if not os.access(output_dir, os.W_OK):
        raise ConfigError(f"Output directory '{output_dir}' is not writable")
    logger.info("Check output directory: OK")
