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
"""Gym-style navigation environment composing simulator, perception and rewards."""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from score.navforge.config import RewardSpec, SimConfig
from score.navforge.core.percept.observation import build_observation
from score.navforge.core.percept.tracker import OccupancyTracker, update_tracker
from score.navforge.core.rewards.engines import RewardContext, compute_reward
from score.navforge.core.sim.episode import distance_to_goal, step
from score.navforge.core.sim.lidar import LidarScan, scan
from score.navforge.core.sim.state import EpisodeState, EpisodeStatus, start_episode, to_command
from score.navforge.core.worldmap.gridmap import GridMap
from score.navforge.core.worldmap.roster import ScenarioPair
from score.navforge.errors import ContractError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnvStep:
    observation: np.ndarray
    reward: float
    status: EpisodeStatus
    # bootstrapping stops only on arrival and collision; a timeout is an artificial horizon
    done: bool
    gain: int
    terms: dict[str, float] = field(default_factory=dict)
    clamped: bool = False


class NavigationEnv:
    def __init__(self, sim_config: SimConfig, reward_spec: RewardSpec):
        self.sim_config = sim_config
        self.reward_spec = reward_spec
        self.gridmap: Optional[GridMap] = None
        self.episode: Optional[EpisodeState] = None
        self.last_scan: Optional[LidarScan] = None
        self.tracker: Optional[OccupancyTracker] = None
        self.path_length = 0.0

    def _observe(self) -> np.ndarray:
        diagonal = self.gridmap.diagonal_m if self.sim_config.normalize_observations else None
        return build_observation(self.episode, self.last_scan, diagonal).to_vector()

    def reset(self, gridmap: GridMap, pair: ScenarioPair, timeout: int) -> np.ndarray:
        """Start an episode and return its first observation.

        The tracker is cleared and the initial scan is marked without reward.
        """
        self.gridmap = gridmap
        self.episode = start_episode(pair.start, pair.goal, timeout)
        if self.tracker is None or self.tracker.seen.shape != gridmap.shape:
            self.tracker = OccupancyTracker.for_map(gridmap)
        else:
            self.tracker.reset()
        self.last_scan = scan(gridmap, self.episode.robot, self.sim_config.max_range, record_cells=True)
        update_tracker(self.tracker, gridmap, self.episode.robot, self.last_scan)
        self.path_length = 0.0
        return self._observe()

    def step(self, unit_action: np.ndarray) -> EnvStep:
        """Apply an action given in ``[0, 1] x [-1, 1]`` and advance one control period."""
        if self.episode is None:
            raise ContractError("NavigationEnv.step called before reset")
        previous = self.episode
        command = to_command(unit_action, self.sim_config.v_max, self.sim_config.omega_max)
        result = step(previous, command, self.sim_config, self.gridmap)
        self.episode = result.episode
        self.path_length += previous.robot.position.distance_to(self.episode.robot.position)

        robot = self.episode.robot
        self.last_scan = scan(self.gridmap, robot, self.sim_config.max_range, record_cells=True)
        gain = update_tracker(self.tracker, self.gridmap, robot, self.last_scan)

        status = self.episode.status
        ctx = RewardContext(
            d=distance_to_goal(self.episode),
            d_prev=distance_to_goal(previous),
            raw_scan=self.last_scan.ranges,
            gain=gain,
            v=robot.v,
            omega=robot.omega,
            v_max=self.sim_config.v_max,
            arrived=status is EpisodeStatus.ARRIVED,
            collided=status is EpisodeStatus.COLLIDED,
            timed_out=status is EpisodeStatus.TIMED_OUT,
        )
        reward, terms = compute_reward(ctx, self.reward_spec)
        done = status in (EpisodeStatus.ARRIVED, EpisodeStatus.COLLIDED)
        return EnvStep(self._observe(), reward, status, done, gain, terms, result.clamped)
