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

from score.navforge.config import LIDAR_BEAMS
from score.navforge.core.sim.lidar import BEAM_OFFSETS, BEAM_SPACING, raycast, scan, trace_rays
from score.navforge.core.sim.oracle import compare_with_oracle, march_ray
from score.navforge.core.sim.state import RobotState
from score.navforge.core.worldmap.generator import MapSpec, RoomStyle, generate_map
from score.navforge.core.worldmap.gridmap import GridMap, Point2, Pose
from score.navforge.core.worldmap.roster import sample_free_pose
from score.navforge.errors import ContractError


def _wall_map():
    occupied = np.zeros((4, 8), dtype=bool)
    occupied[:, 5] = True
    return GridMap(occupied, 1.0)


def test_axis_aligned_distance_to_wall():
    assert raycast(_wall_map(), Point2(1.5, 1.5), 0.0, 10.0) == 3.5


def test_distance_backwards_to_boundary():
    assert raycast(_wall_map(), Point2(1.5, 1.5), math.pi, 10.0) == pytest.approx(0.5, abs=1e-12)


def test_empty_corridor_is_clipped_to_max_range():
    corridor = GridMap(np.zeros((3, 30), dtype=bool), 1.0)
    assert raycast(corridor, Point2(1.5, 1.5), 0.0, 10.0) == 10.0


def test_origin_in_occupied_cell_is_rejected():
    with pytest.raises(ContractError):
        raycast(_wall_map(), Point2(5.5, 1.5), 0.0, 10.0)
    with pytest.raises(ContractError):
        raycast(_wall_map(), Point2(-1.0, 1.5), 0.0, 10.0)


def test_beam_layout():
    assert BEAM_OFFSETS.shape == (LIDAR_BEAMS,)
    assert BEAM_OFFSETS[0] == pytest.approx(math.radians(-135.0))
    assert BEAM_OFFSETS[-1] == pytest.approx(math.radians(135.0))
    assert np.allclose(np.diff(BEAM_OFFSETS), BEAM_SPACING)
    assert abs(BEAM_OFFSETS[342]) < BEAM_SPACING


def test_scan_in_large_empty_room_reads_max_range():
    room = GridMap(np.zeros((60, 60), dtype=bool), 0.5)
    ranges = scan(room, RobotState(Pose(15.0, 15.0, 0.7)), 10.0).ranges
    assert len(ranges) == LIDAR_BEAMS
    assert np.all(ranges == 10.0)


def test_scan_ranges_stay_within_sensor_limits(small_map):
    result = scan(small_map, RobotState(Pose(1.0, 1.0, 0.4)), 10.0)
    assert np.all((result.ranges >= 0.0) & (result.ranges <= 10.0))
    assert not result.ranges.flags.writeable


def test_rotating_by_one_beam_spacing_shifts_the_scan(rng):
    gridmap = generate_map(17, MapSpec(size_m=8.0, obstacle_density=0.2))
    center = sample_free_pose(gridmap, rng, 0.3)
    pose = Pose(center.x + 0.0137, center.y - 0.0211, 0.123)
    base = scan(gridmap, RobotState(pose), 10.0).ranges
    turned = scan(gridmap, RobotState(Pose(pose.x, pose.y, pose.theta + BEAM_SPACING)), 10.0).ranges
    assert np.allclose(turned[:-1], base[1:], atol=1e-9)


def test_trace_matches_single_ray_casts(small_map, rng):
    origin = Point2(1.23, 4.56)
    angles = rng.uniform(-math.pi, math.pi, 50)
    traced = trace_rays(small_map, origin, angles, 10.0).distances
    singles = [raycast(small_map, origin, float(a), 10.0) for a in angles]
    assert np.array_equal(traced, np.array(singles))


def test_recorded_cells_follow_the_grid_traversal(small_map):
    origin = Point2(1.234, 1.567)
    angle = 0.3
    trace = trace_rays(small_map, origin, np.array([angle]), 10.0, record_cells=True)
    width = small_map.width_cells
    cells = [(int(c % width), int(c // width)) for c in trace.cells]
    end = Point2(origin.x + trace.distances[0] * math.cos(angle), origin.y + trace.distances[0] * math.sin(angle))
    first, last = cells[0], cells[-1]
    assert first == (12, 15)
    assert small_map.is_occupied(*last)
    # a generic ray enters one new cell per boundary crossing
    crossings = abs(last[0] - first[0]) + abs(last[1] - first[1])
    assert len(cells) == crossings + 1
    assert math.floor(end.x / 0.1 + 1e-9) in (last[0], last[0] + 1)


def test_march_ray_agrees_with_axis_aligned_example():
    assert march_ray(_wall_map(), Point2(1.5, 1.5), 0.0, 10.0) == pytest.approx(3.5, abs=2e-4)


@pytest.mark.parametrize("seed", range(5))
def test_raycast_matches_ray_marching_oracle(seed):
    style = RoomStyle.ROOMS if seed % 2 else RoomStyle.OPEN
    gridmap = generate_map(100 + seed, MapSpec(size_m=12.0, obstacle_density=0.2, room_style=style))
    comparison = compare_with_oracle(gridmap, np.random.default_rng(seed), 200, 10.0)
    assert comparison.rays == 200
    assert comparison.passes(2e-4), comparison
