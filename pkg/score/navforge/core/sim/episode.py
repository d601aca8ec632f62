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
"""Episode lifecycle: one control step with collision, arrival and timeout checks."""

import logging
from dataclasses import dataclass, replace

from score.navforge.config import SimConfig
from score.navforge.core.sim.kinematics import integrate
from score.navforge.core.sim.state import Action, EpisodeState, EpisodeStatus, RobotState, clamp_action
from score.navforge.core.worldmap.gridmap import GridMap, disc_overlaps_occupied
from score.navforge.errors import ContractError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepResult:
    episode: EpisodeState
    # the commanded action was outside the limits and had to be clamped
    clamped: bool = False


def distance_to_goal(ep: EpisodeState) -> float:
    return ep.robot.position.distance_to(ep.goal)


def step(ep: EpisodeState, action: Action, cfg: SimConfig, gridmap: GridMap) -> StepResult:
    """Advance an episode by one control period.

    Realized velocities equal the (clamped) command. The pose moves along the
    exact unicycle arc; the robot disc is checked against the grid at the
    half-step and full-step poses. On collision the pose stays at the last
    free pose. Arrival is checked before the timeout.

    :param EpisodeState ep: Running episode.
    :param Action action: Commanded velocities in physical units.
    :param SimConfig cfg: Simulator constants.
    :param GridMap gridmap: Map the episode runs on.
    :returns: The next episode state and the clamp flag.
    :raises ContractError: If the episode has already ended.
    """
    if ep.status.terminal:
        raise ContractError(f"Episode already ended with status '{ep.status.value}', no further steps accepted")

    action, clamped = clamp_action(action, cfg.v_max, cfg.omega_max)
    if clamped:
        logger.warning(f"Action clamped to ({action.v_cmd}, {action.omega_cmd}) at step {ep.step_count}")

    pose = ep.robot.pose
    midway = integrate(pose, action.v_cmd, action.omega_cmd, 0.5 * cfg.dt)
    moved = integrate(pose, action.v_cmd, action.omega_cmd, cfg.dt)
    step_count = ep.step_count + 1

    if disc_overlaps_occupied(gridmap, midway.position, cfg.robot_radius) or disc_overlaps_occupied(
        gridmap, moved.position, cfg.robot_radius
    ):
        robot = RobotState(pose, action.v_cmd, action.omega_cmd)
        return StepResult(replace(ep, robot=robot, step_count=step_count, status=EpisodeStatus.COLLIDED), clamped)

    robot = RobotState(moved, action.v_cmd, action.omega_cmd)
    status = EpisodeStatus.RUNNING
    if robot.position.distance_to(ep.goal) <= cfg.d_min:
        status = EpisodeStatus.ARRIVED
    elif step_count >= ep.timeout:
        status = EpisodeStatus.TIMED_OUT
    return StepResult(replace(ep, robot=robot, step_count=step_count, status=status), clamped)
