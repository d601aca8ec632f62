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
"""Robot, action and episode value types.

All types are frozen; the simulator returns new values instead of mutating.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from score.navforge.core.worldmap.gridmap import Point2, Pose


class EpisodeStatus(str, Enum):
    RUNNING = "running"
    ARRIVED = "arrived"
    COLLIDED = "collided"
    TIMED_OUT = "timed_out"

    @property
    def terminal(self) -> bool:
        return self is not EpisodeStatus.RUNNING


@dataclass(frozen=True)
class RobotState:
    pose: Pose
    v: float = 0.0
    omega: float = 0.0

    @property
    def position(self) -> Point2:
        return self.pose.position


@dataclass(frozen=True)
class Action:
    """Commanded velocities in physical units (m/s, rad/s)."""

    v_cmd: float
    omega_cmd: float


@dataclass(frozen=True)
class EpisodeState:
    robot: RobotState
    goal: Point2
    timeout: int
    step_count: int = 0
    status: EpisodeStatus = EpisodeStatus.RUNNING

    @property
    def done(self) -> bool:
        return self.status.terminal


def start_episode(start: Pose, goal: Point2, timeout: int) -> EpisodeState:
    return EpisodeState(robot=RobotState(start), goal=goal, timeout=timeout)


def to_command(unit_action: np.ndarray, v_max: float, omega_max: float) -> Action:
    """Scale an action from ``[0, 1] x [-1, 1]`` to physical velocities."""
    return Action(float(unit_action[0]) * v_max, float(unit_action[1]) * omega_max)


def to_unit(action: Action, v_max: float, omega_max: float) -> np.ndarray:
    return np.array([action.v_cmd / v_max, action.omega_cmd / omega_max], dtype=np.float64)


def clamp_action(action: Action, v_max: float, omega_max: float) -> tuple[Action, bool]:
    """Clamp both components into their limits.

    :returns: The clamped action and whether any component was changed.
        Non-finite components are replaced by zero and count as clamped.
    """
    v = action.v_cmd if math.isfinite(action.v_cmd) else 0.0
    omega = action.omega_cmd if math.isfinite(action.omega_cmd) else 0.0
    v_clamped = min(max(v, 0.0), v_max)
    omega_clamped = min(max(omega, -omega_max), omega_max)
    changed = v_clamped != action.v_cmd or omega_clamped != action.omega_cmd
    return Action(v_clamped, omega_clamped), changed
