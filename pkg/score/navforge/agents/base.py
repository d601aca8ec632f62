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
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from score.navforge.agents.losses import LossReport
from score.navforge.agents.nstep import NStepAccumulator
from score.navforge.agents.replay import ReplayBuffer, Transition
from score.navforge.agents.squash import check_finite, sample_squashed, squash
from score.navforge.config import AgentConfig, AgentKind
from score.navforge.core.nn.checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from score.navforge.core.nn.dense import DenseNet
from score.navforge.core.percept.observation import ACTION_SIZE
from score.navforge.errors import CheckpointError


logger = logging.getLogger(__name__)

ACTION_LOW = np.array([0.0, -1.0])
ACTION_HIGH = np.array([1.0, 1.0])
HEAD_SIZES = {AgentKind.SAC: 2 * ACTION_SIZE, AgentKind.TD3: ACTION_SIZE}


def clip_to_bounds(action: np.ndarray) -> np.ndarray:
    return np.clip(action, ACTION_LOW, ACTION_HIGH)


@dataclass(frozen=True)
class AgentStreams:
    """Random generators an agent draws from; each is owned by exactly one consumer."""

    init: np.random.Generator
    action_noise: np.random.Generator
    replay: np.random.Generator
    update: np.random.Generator


class Policy:
    """Read-only actor snapshot used for evaluation."""

    def __init__(self, actor: DenseNet, kind: AgentKind, log_std_min: float = -20.0, log_std_max: float = 2.0):
        expected = HEAD_SIZES[kind]
        if actor.out_size != expected:
            raise CheckpointError(f"A {kind.value} actor has {expected} outputs, this one has {actor.out_size}")
        self.actor = actor.copy()
        self.kind = kind
        self.log_std_min = log_std_min
        self.log_std_max = log_std_max

    @property
    def obs_size(self) -> int:
        return self.actor.in_size

    def act(self, obs: np.ndarray, rng: Optional[np.random.Generator] = None) -> np.ndarray:
        """Mean action, or a sampled one for a stochastic actor when ``rng`` is given."""
        head = check_finite(self.actor.predict(obs), "actor output")
        if self.kind is AgentKind.SAC:
            eps = rng.standard_normal(ACTION_SIZE) if rng is not None else np.zeros(ACTION_SIZE)
            return sample_squashed(head, eps, self.log_std_min, self.log_std_max).action
        return squash(head)


class Agent(ABC):
    """Common interface of the off-policy learners.

    The harness calls :meth:`act` for every environment step, hands every
    resulting single-step transition to :meth:`observe` and calls
    :meth:`update` once per environment step after warmup.
    """

    kind: AgentKind

    def __init__(self, config: AgentConfig, obs_size: int, streams: AgentStreams):
        self.config = config
        self.obs_size = obs_size
        self.streams = streams
        self.buffer = ReplayBuffer(config.buffer_capacity, obs_size, ACTION_SIZE)
        self.nstep = NStepAccumulator(config.nstep_window, config.gamma) if config.nstep_enabled else None
        self.update_count = 0

    def _sizes(self, in_size: int, out_size: int) -> list[int]:
        return [in_size] + list(self.config.hidden_sizes) + [out_size]

    @abstractmethod
    def act(self, obs: np.ndarray, explore: bool) -> np.ndarray:
        """Return an action in ``[0, 1] x [-1, 1]``.

        :raises DivergenceError: If the actor output is not finite.
        """

    @abstractmethod
    def update(self, step_index: int) -> Optional[LossReport]:
        """Run one learning step on a replay batch.

        :returns: The loss report, or None when the buffer holds fewer than one batch.
        :raises DivergenceError: On non-finite losses or gradients.
        """

    @abstractmethod
    def policy(self) -> Policy:
        """Snapshot of the current actor."""

    @abstractmethod
    def to_checkpoint(self) -> Checkpoint:
        """Collect networks, optimizer states and scalars."""

    @abstractmethod
    def restore(self, checkpoint: Checkpoint):
        """Replace all learnable state from a checkpoint with a matching layout."""

    def random_action(self) -> np.ndarray:
        return self.streams.action_noise.uniform(ACTION_LOW, ACTION_HIGH)

    def observe(self, transition: Transition, episode_ended: bool) -> int:
        """Store a single-step transition, aggregated when n-step returns are enabled.

        :returns: Number of transitions added to the replay buffer.
        """
        ready = [transition] if self.nstep is None else self.nstep.push(transition, episode_ended)
        for item in ready:
            self.buffer.add(item)
        return len(ready)

    def _meta(self) -> dict:
        return {
            "kind": self.kind.value,
            "obs_size": self.obs_size,
            "hidden_sizes": list(self.config.hidden_sizes),
            "update_count": self.update_count,
            "log_std_range": [self.config.log_std_min, self.config.log_std_max],
        }

    def save(self, path: str | Path):
        save_checkpoint(self.to_checkpoint(), path)

    def load(self, path: str | Path):
        checkpoint = load_checkpoint(path, expected_manifest=self.to_checkpoint().manifest())
        if checkpoint.meta.get("kind") != self.kind.value:
            raise CheckpointError(f"Checkpoint holds a '{checkpoint.meta.get('kind')}' agent, not '{self.kind.value}'")
        self.restore(checkpoint)
        self.update_count = int(checkpoint.meta.get("update_count", 0))
