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
"""The 61-scalar observation vector.

Layout: goal position in the body frame (2), linear velocity (1), angular
velocity (1), then the 57 group minima of the raw 684-beam scan.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from score.navforge.config import LIDAR_BEAMS, LIDAR_GROUP
from score.navforge.core.sim.lidar import LidarScan
from score.navforge.core.sim.state import EpisodeState
from score.navforge.errors import ContractError


LIDAR_GROUPS = LIDAR_BEAMS // LIDAR_GROUP
OBSERVATION_SIZE = 4 + LIDAR_GROUPS
ACTION_SIZE = 2


@dataclass(frozen=True)
class Observation:
    rel_goal: np.ndarray
    v: float
    omega: float
    lidar: np.ndarray

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.rel_goal, [self.v, self.omega], self.lidar]).astype(np.float64)


def decimate(ranges: np.ndarray) -> np.ndarray:
    """Reduce a raw scan to the minimum of each group of 12 consecutive beams.

    :raises ContractError: If the scan does not hold exactly 684 beams.
    """
    ranges = np.asarray(ranges, dtype=np.float64)
    if ranges.shape != (LIDAR_BEAMS,):
        raise ContractError(f"Expected a scan of {LIDAR_BEAMS} beams, got shape {ranges.shape}")
    return ranges.reshape(LIDAR_GROUPS, LIDAR_GROUP).min(axis=1)


def body_frame(ep: EpisodeState) -> np.ndarray:
    """Goal position relative to the robot, rotated by ``-theta``."""
    pose = ep.robot.pose
    dx = ep.goal.x - pose.x
    dy = ep.goal.y - pose.y
    c, s = math.cos(pose.theta), math.sin(pose.theta)
    return np.array([c * dx + s * dy, -s * dx + c * dy])


def build_observation(ep: EpisodeState, scan: LidarScan, diagonal: Optional[float] = None) -> Observation:
    """Build the observation of an episode state.

    :param EpisodeState ep: Current episode state.
    :param LidarScan scan: Raw scan taken at the current pose.
    :param float diagonal: When given, scale ``rel_goal`` by ``1/diagonal`` and
        the lidar by ``1/max_range``.
    """
    rel_goal = body_frame(ep)
    lidar = decimate(scan.ranges)
    if diagonal is not None:
        rel_goal = rel_goal / diagonal
        lidar = lidar / scan.max_range
    return Observation(rel_goal, ep.robot.v, ep.robot.omega, lidar)
