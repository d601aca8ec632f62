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
"""Reward engines.

Every engine maps a :class:`RewardContext` to a scalar and is pure. Terminal
precedence is arrival, then collision, then timeout; a context carries at
most one of the three flags, and arrival wins whatever the other fields say.
The three literature-style engines are reconstructions from their published
constants and prose descriptions.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from score.navforge.config import RewardSpec, RewardVariant
from score.navforge.errors import ContractError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RewardContext:
    d: float
    d_prev: float
    raw_scan: np.ndarray
    gain: int = 0
    v: float = 0.0
    omega: float = 0.0
    # speed limit of the simulator that produced the step
    v_max: float | None = None
    arrived: bool = False
    collided: bool = False
    timed_out: bool = False

    def __post_init__(self):
        if self.arrived + self.collided + self.timed_out > 1:
            raise ContractError("At most one of arrived, collided and timed_out may be set")


def _terminal_terms(ctx: RewardContext, spec: RewardSpec, with_timeout: bool) -> dict[str, float] | None:
    if ctx.arrived:
        return {"arrival": spec.constant("r_a")}
    if ctx.collided:
        return {"collision": spec.constant("r_c")}
    if with_timeout and ctx.timed_out:
        return {"timeout": spec.constant("r_t")}
    return None


def proposed_terms(ctx: RewardContext, spec: RewardSpec) -> dict[str, float]:
    terminal = _terminal_terms(ctx, spec, with_timeout=True)
    if terminal is not None:
        return terminal
    if not ctx.d > 0:
        raise ContractError(f"Distance to goal must be positive on a non-terminal step, got {ctx.d}")
    front = float(np.min(ctx.raw_scan[spec.l1 : spec.l2 + 1]))
    return {
        "info_gain": ctx.gain / ctx.d,
        "front_clearance": min(front, spec.r_l_cap),
        "velocity": ctx.v - abs(ctx.omega),
    }


def cimurs_terms(ctx: RewardContext, spec: RewardSpec) -> dict[str, float]:
    terminal = _terminal_terms(ctx, spec, with_timeout=False)
    if terminal is not None:
        return terminal
    return {"velocity": ctx.v - abs(ctx.omega)}


def hu_terms(ctx: RewardContext, spec: RewardSpec) -> dict[str, float]:
    terminal = _terminal_terms(ctx, spec, with_timeout=False)
    if terminal is not None:
        return terminal
    if ctx.v_max is None or not ctx.v_max > 0:
        raise ContractError(f"The low-velocity penalty needs a positive v_max, got {ctx.v_max}")
    nearest = float(np.min(ctx.raw_scan))
    safety = spec.safety_distance
    return {
        "clearance": spec.constant("r_cp") * (1.0 if nearest < safety else 0.0),
        "proximity": spec.constant("r_cpo") * max(0.0, (safety - nearest) / safety),
        "angular_velocity": spec.constant("r_av") * abs(ctx.omega),
        "low_velocity": spec.constant("r_lv") * (ctx.v_max - ctx.v) / ctx.v_max,
        "progress": spec.constant("r_progress") * (ctx.d_prev - ctx.d),
    }


def grando_terms(ctx: RewardContext, spec: RewardSpec) -> dict[str, float]:
    terminal = _terminal_terms(ctx, spec, with_timeout=False)
    if terminal is not None:
        return terminal
    return {}


TERM_FUNCTIONS: dict[RewardVariant, Callable[[RewardContext, RewardSpec], dict[str, float]]] = {
    RewardVariant.PROPOSED: proposed_terms,
    RewardVariant.CIMURS_STYLE: cimurs_terms,
    RewardVariant.HU_STYLE: hu_terms,
    RewardVariant.GRANDO_STYLE: grando_terms,
}

TERM_NAMES: dict[RewardVariant, list[str]] = {
    RewardVariant.PROPOSED: ["info_gain", "front_clearance", "velocity", "arrival", "collision", "timeout"],
    RewardVariant.CIMURS_STYLE: ["velocity", "arrival", "collision"],
    RewardVariant.HU_STYLE: [
        "clearance",
        "proximity",
        "angular_velocity",
        "low_velocity",
        "progress",
        "arrival",
        "collision",
    ],
    RewardVariant.GRANDO_STYLE: ["arrival", "collision"],
}


def _total(terms: dict[str, float]) -> float:
    return float(sum(terms.values(), 0.0))


def reward_proposed(ctx: RewardContext, spec: RewardSpec) -> float:
    """Arrival, collision or timeout constant; otherwise ``G/d + min(front beams, cap) + (v - |omega|)``."""
    return _total(proposed_terms(ctx, spec))


def reward_cimurs_style(ctx: RewardContext, spec: RewardSpec) -> float:
    return _total(cimurs_terms(ctx, spec))


def reward_hu_style(ctx: RewardContext, spec: RewardSpec) -> float:
    return _total(hu_terms(ctx, spec))


def reward_grando_style(ctx: RewardContext, spec: RewardSpec) -> float:
    return _total(grando_terms(ctx, spec))


def reward_terms(ctx: RewardContext, spec: RewardSpec) -> dict[str, float]:
    return TERM_FUNCTIONS[spec.variant](ctx, spec)


def compute_reward(ctx: RewardContext, spec: RewardSpec) -> tuple[float, dict[str, float]]:
    """Dispatch on ``spec.variant`` and return the reward with its term breakdown."""
    terms = reward_terms(ctx, spec)
    return _total(terms), terms
