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

import pytest

from score.navforge.core.sim.kinematics import integrate, integrate_euler, normalize_angle
from score.navforge.core.worldmap.gridmap import Pose


def test_straight_line():
    pose = integrate(Pose(0.0, 0.0, 0.0), 0.5, 0.0, 0.1)
    assert (pose.x, pose.y, pose.theta) == pytest.approx((0.05, 0.0, 0.0), abs=1e-15)


def test_turn_in_place():
    pose = integrate(Pose(1.0, 2.0, 0.0), 0.0, 1.0, 0.1)
    assert (pose.x, pose.y) == (1.0, 2.0)
    assert pose.theta == pytest.approx(0.1, abs=1e-15)


def test_closed_form_arc():
    pose = integrate(Pose(0.0, 0.0, 0.0), 0.5, 1.0, 0.1)
    assert pose.x == pytest.approx(0.5 * math.sin(0.1), abs=1e-15)
    assert pose.y == pytest.approx(0.5 * (1.0 - math.cos(0.1)), abs=1e-15)
    assert pose.theta == pytest.approx(0.1, abs=1e-15)


def test_tiny_yaw_rate_uses_straight_line():
    pose = integrate(Pose(0.0, 0.0, 0.3), 0.5, 1e-7, 0.1)
    assert pose.x == pytest.approx(0.05 * math.cos(0.3), abs=1e-12)
    assert pose.y == pytest.approx(0.05 * math.sin(0.3), abs=1e-12)


@pytest.mark.parametrize("v", [0.0, 0.1, 0.5])
@pytest.mark.parametrize("omega", [-1.0, -0.3, 1e-7, 0.5, 1.0])
def test_arc_matches_fine_step_euler(v, omega, rng):
    start = Pose(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-math.pi, math.pi))
    exact = integrate(start, v, omega, 0.1)
    numeric = integrate_euler(start, v, omega, 0.1)
    assert math.hypot(exact.x - numeric.x, exact.y - numeric.y) <= 1e-6
    assert math.isclose(exact.theta, numeric.theta, abs_tol=1e-9)


@pytest.mark.parametrize(
    "angle, expected",
    [
        (0.0, 0.0),
        (-math.pi, math.pi),
        (math.pi, math.pi),
        (2.5 * math.pi, 0.5 * math.pi),
        (-0.5 * math.pi, -0.5 * math.pi),
    ],
)
def test_normalize_angle(angle, expected):
    assert normalize_angle(angle) == pytest.approx(expected, abs=1e-12)


def test_normalized_heading_stays_in_half_open_interval(rng):
    for angle in rng.uniform(-50, 50, 1000):
        wrapped = normalize_angle(float(angle))
        assert -math.pi < wrapped <= math.pi
        assert math.isclose(math.sin(wrapped), math.sin(angle), abs_tol=1e-9)
