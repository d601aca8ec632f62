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
import math

import numpy as np
import pytest

from score.navforge.config import SimConfig
from score.navforge.core.sim.episode import distance_to_goal, step
from score.navforge.core.sim.state import (
    Action,
    EpisodeStatus,
    clamp_action,
    start_episode,
    to_command,
    to_unit,
)
from score.navforge.core.sim.trajectory import TRAJECTORY_COLUMNS, TrajectoryWriter
from score.navforge.core.worldmap.gridmap import Point2, Pose, disc_overlaps_occupied
from score.navforge.errors import ContractError


_CFG = SimConfig()


def test_distance_to_goal():
    assert distance_to_goal(start_episode(Pose(0.0, 0.0, 0.0), Point2(3.0, 4.0), 10)) == 5.0
    assert distance_to_goal(start_episode(Pose(1.0, 1.0, 0.0), Point2(1.0, 1.0), 10)) == 0.0


def test_step_realizes_commanded_velocities(small_map):
    ep = start_episode(Pose(1.0, 1.0, 0.0), Point2(5.0, 1.0), 100)
    result = step(ep, Action(0.5, 0.0), _CFG, small_map)
    assert not result.clamped
    robot = result.episode.robot
    assert (robot.v, robot.omega) == (0.5, 0.0)
    assert robot.pose.x == pytest.approx(1.05)
    assert result.episode.step_count == 1
    assert result.episode.status is EpisodeStatus.RUNNING


def test_collision_freezes_pose_at_last_free_pose(small_map):
    ep = start_episode(Pose(2.28, 3.0, 0.0), Point2(5.0, 5.0), 100)
    result = step(ep, Action(0.5, 0.0), _CFG, small_map)
    assert result.episode.status is EpisodeStatus.COLLIDED
    assert result.episode.robot.pose == ep.robot.pose
    assert result.episode.robot.v == 0.5
    assert result.episode.step_count == 1


def test_terminal_episode_rejects_steps(small_map):
    ep = start_episode(Pose(2.28, 3.0, 0.0), Point2(5.0, 5.0), 100)
    collided = step(ep, Action(0.5, 0.0), _CFG, small_map).episode
    with pytest.raises(ContractError):
        step(collided, Action(0.0, 0.0), _CFG, small_map)


def test_arrival_triggers_at_d_min(small_map):
    ep = start_episode(Pose(1.0, 1.0, 0.0), Point2(1.54, 1.0), 100)
    arrived = step(ep, Action(0.5, 0.0), _CFG, small_map).episode
    assert distance_to_goal(arrived) == pytest.approx(0.49)
    assert arrived.status is EpisodeStatus.ARRIVED

    ep = start_episode(Pose(1.0, 1.0, 0.0), Point2(1.56, 1.0), 100)
    assert step(ep, Action(0.5, 0.0), _CFG, small_map).episode.status is EpisodeStatus.RUNNING


def test_arrival_wins_over_timeout_on_the_last_step(small_map):
    ep = start_episode(Pose(1.0, 1.0, 0.0), Point2(1.5, 1.0), 1)
    assert step(ep, Action(0.5, 0.0), _CFG, small_map).episode.status is EpisodeStatus.ARRIVED


def test_timeout_after_configured_steps(small_map):
    ep = start_episode(Pose(1.0, 1.0, 0.0), Point2(5.0, 5.0), 3)
    statuses = []
    for _ in range(3):
        ep = step(ep, Action(0.0, 0.0), _CFG, small_map).episode
        statuses.append(ep.status)
    assert statuses == [EpisodeStatus.RUNNING, EpisodeStatus.RUNNING, EpisodeStatus.TIMED_OUT]
    assert ep.step_count == 3


def test_out_of_range_actions_are_clamped_and_flagged(small_map, caplog):
    ep = start_episode(Pose(1.0, 1.0, 0.0), Point2(5.0, 5.0), 100)
    result = step(ep, Action(1.0, -2.0), _CFG, small_map)
    assert result.clamped
    assert (result.episode.robot.v, result.episode.robot.omega) == (0.5, -1.0)
    assert "clamped" in caplog.text


def test_clamp_action_replaces_non_finite_components():
    action, changed = clamp_action(Action(float("nan"), float("inf")), 0.5, 1.0)
    assert changed
    assert action == Action(0.0, 0.0)
    assert clamp_action(Action(0.25, -0.5), 0.5, 1.0) == (Action(0.25, -0.5), False)


def test_unit_action_scaling():
    command = to_command(np.array([1.0, -0.5]), 0.5, 1.0)
    assert command == Action(0.5, -0.5)
    assert np.array_equal(to_unit(command, 0.5, 1.0), [1.0, -0.5])


def test_random_rollouts_never_penetrate_obstacles(small_map, rng):
    for _ in range(20):
        ep = start_episode(Pose(1.0, 1.0 + rng.uniform(0, 4), rng.uniform(-math.pi, math.pi)), Point2(5.5, 5.5), 200)
        while not ep.done:
            action = Action(rng.uniform(0.0, 0.5), rng.uniform(-1.0, 1.0))
            ep = step(ep, action, _CFG, small_map).episode
            assert not disc_overlaps_occupied(small_map, ep.robot.position, _CFG.robot_radius)


def test_trajectory_writer(tmp_path, small_map):
    ep = start_episode(Pose(1.0, 1.0, 0.0), Point2(5.0, 1.0), 100)
    path = tmp_path / "trajectory.csv"
    with TrajectoryWriter(path, ["velocity"]) as writer:
        for _ in range(3):
            ep = step(ep, Action(0.5, 0.0), _CFG, small_map).episode
            writer.record(ep, 1.5, {"velocity": 0.5})
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(TRAJECTORY_COLUMNS + ["velocity"])
    assert len(lines) == 4
    assert lines[3].split(",")[0] == "3"
    assert lines[3].split(",")[-2:] == ["running", "0.5"]


def test_trajectory_writer_requires_context(tmp_path):
    ep = start_episode(Pose(1.0, 1.0, 0.0), Point2(5.0, 1.0), 100)
    with pytest.raises(RuntimeError):
        TrajectoryWriter(tmp_path / "t.csv").record(ep, 0.0)
