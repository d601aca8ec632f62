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
"""Unicycle kinematics with exact arc integration."""

import math

import numpy as np

from score.navforge.core.worldmap.gridmap import Pose


STRAIGHT_LINE_OMEGA = 1e-6


def normalize_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    wrapped = math.remainder(angle, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def integrate(pose: Pose, v: float, omega: float, dt: float) -> Pose:
    """Advance a pose with constant velocities over ``dt``.

    Straight-line motion is used below ``STRAIGHT_LINE_OMEGA`` rad/s, the
    closed-form circular arc otherwise.
    """
    theta_next = pose.theta + omega * dt
    if abs(omega) < STRAIGHT_LINE_OMEGA:
        x = pose.x + v * dt * math.cos(pose.theta)
        y = pose.y + v * dt * math.sin(pose.theta)
    else:
        radius = v / omega
        x = pose.x + radius * (math.sin(theta_next) - math.sin(pose.theta))
        y = pose.y - radius * (math.cos(theta_next) - math.cos(pose.theta))
    return Pose(x, y, normalize_angle(theta_next))


def integrate_euler(pose: Pose, v: float, omega: float, dt: float, substep: float = 1e-6) -> Pose:
    """Fine-step forward Euler integration, used to cross-check :func:`integrate`."""
    steps = max(1, round(dt / substep))
    h = dt / steps
    headings = pose.theta + omega * h * np.arange(steps)
    x = pose.x + v * h * float(np.sum(np.cos(headings)))
    y = pose.y + v * h * float(np.sum(np.sin(headings)))
    return Pose(x, y, normalize_angle(pose.theta + omega * h * steps))
