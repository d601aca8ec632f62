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
"""n-step reward aggregation.

A window of consecutive transitions of one episode collapses into a single
transition whose reward is the discounted sum of the window's rewards. The
aggregate starts where the window starts, ends where it ends and spans
``horizon`` steps, so the learner bootstraps with ``gamma ** horizon``.
"""

import logging
from collections import deque

import numpy as np

from score.navforge.agents.replay import Transition
from score.navforge.errors import ContractError


logger = logging.getLogger(__name__)


def assemble_nstep(recent: list[Transition], gamma: float) -> Transition:
    """Aggregate consecutive transitions, oldest first.

    :raises ContractError: If the window is empty, a transition does not start
        where its predecessor ended, or a terminal transition is not last.
    """
    if not recent:
        raise ContractError("Cannot aggregate an empty window")
    for index, (earlier, later) in enumerate(zip(recent, recent[1:])):
        if earlier.done:
            raise ContractError(f"Transition {index} is terminal but is followed by another transition")
        if not np.array_equal(earlier.next_obs, later.obs):
            raise ContractError(f"Transitions {index} and {index + 1} are not consecutive")

    reward = 0.0
    discount = 1.0
    for transition in recent:
        reward += discount * transition.reward
        discount *= gamma**transition.horizon
    first, last = recent[0], recent[-1]
    return Transition(
        obs=first.obs,
        action=first.action,
        reward=reward,
        next_obs=last.next_obs,
        done=last.done,
        horizon=sum(t.horizon for t in recent),
    )


class NStepAccumulator:
    """Turn a stream of single-step transitions into n-step transitions.

    Every pushed transition eventually yields exactly one aggregate, so the
    replay buffer grows by the episode length.
    """

    def __init__(self, window: int, gamma: float):
        if window < 1:
            raise ContractError(f"n-step window must be positive, got {window}")
        self.window = window
        self.gamma = gamma
        self._recent: deque[Transition] = deque()

    def __len__(self):
        return len(self._recent)

    def push(self, transition: Transition, episode_ended: bool) -> list[Transition]:
        """Add the newest transition and return the aggregates that became complete.

        :param Transition transition: Newest single-step transition.
        :param bool episode_ended: The episode ended with this transition (terminal or timed out);
            all pending windows are flushed with their truncated lengths.
        """
        self._recent.append(transition)
        ready = []
        if len(self._recent) == self.window:
            ready.append(assemble_nstep(list(self._recent), self.gamma))
            self._recent.popleft()
        if episode_ended:
            while self._recent:
                ready.append(assemble_nstep(list(self._recent), self.gamma))
                self._recent.popleft()
        return ready

    def clear(self):
        self._recent.clear()
