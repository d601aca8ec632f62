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
"""Adam with bias-corrected moments."""

import logging
from dataclasses import dataclass, field

import numpy as np

from score.navforge.errors import ContractError, DivergenceError


logger = logging.getLogger(__name__)


@dataclass
class AdamState:
    first_moment: list[np.ndarray]
    second_moment: list[np.ndarray]
    learning_rate: float = 3e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    name: str = field(default="adam", compare=False)

    @classmethod
    def for_parameters(cls, params: list[np.ndarray], learning_rate: float = 3e-4, name: str = "adam") -> "AdamState":
        return cls(
            [np.zeros_like(p) for p in params],
            [np.zeros_like(p) for p in params],
            learning_rate=learning_rate,
            name=name,
        )

    @property
    def shapes(self) -> list[tuple[int, ...]]:
        return [m.shape for m in self.first_moment]


def adam_step(params: list[np.ndarray], grads, state: AdamState) -> None:
    """Apply one Adam update to ``params`` in place.

    :param list params: Parameter arrays, updated in place.
    :param grads: Gradient arrays (or a ``GradientBundle``) congruent with ``params``.
    :param AdamState state: Moments and step counter, updated in place.
    :raises ContractError: If shapes disagree.
    :raises DivergenceError: If any gradient entry is not finite; nothing is updated then.
    """
    grads = list(grads)
    if len(grads) != len(params) or len(params) != len(state.first_moment):
        raise ContractError(
            f"{state.name}: {len(params)} parameters, {len(grads)} gradients, {len(state.first_moment)} moments"
        )
    for p, g, m in zip(params, grads, state.first_moment):
        if p.shape != g.shape or p.shape != m.shape:
            raise ContractError(f"{state.name}: parameter {p.shape}, gradient {g.shape}, moment {m.shape}")
    for index, g in enumerate(grads):
        if not np.all(np.isfinite(g)):
            raise DivergenceError(f"{state.name}: non-finite gradient in parameter {index} at step {state.step + 1}")

    state.step += 1
    correction1 = 1.0 - state.beta1**state.step
    correction2 = 1.0 - state.beta2**state.step
    for p, g, m, v in zip(params, grads, state.first_moment, state.second_moment):
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        p -= state.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
