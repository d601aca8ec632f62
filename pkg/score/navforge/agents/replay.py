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
"""Off-policy replay storage."""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from score.navforge.errors import ContractError


logger = logging.getLogger(__name__)

INITIAL_ALLOCATION = 4096


@dataclass(frozen=True)
class Transition:
    obs: np.ndarray
    action: np.ndarray
    reward: float
    next_obs: np.ndarray
    done: bool
    # number of environment steps the transition spans; bootstrapping discounts by gamma ** horizon
    horizon: int = 1

    def __post_init__(self):
        for name in ("obs", "action", "next_obs"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ContractError(f"Transition field '{name}' is not finite")
        if not np.isfinite(self.reward):
            raise ContractError(f"Transition reward is not finite: {self.reward}")
        if self.horizon < 1:
            raise ContractError(f"Transition horizon must be positive, got {self.horizon}")


@dataclass(frozen=True)
class Batch:
    obs: np.ndarray
    action: np.ndarray
    reward: np.ndarray
    next_obs: np.ndarray
    done: np.ndarray
    horizon: np.ndarray

    def __len__(self):
        return len(self.reward)


class ReplayBuffer:
    """FIFO ring of transitions with uniform sampling.

    Storage grows geometrically up to ``capacity`` so that a large capacity
    does not allocate its full size up front.
    """

    def __init__(self, capacity: int, obs_size: int, action_size: int):
        if capacity < 1:
            raise ContractError(f"Replay capacity must be positive, got {capacity}")
        self.capacity = capacity
        self.obs_size = obs_size
        self.action_size = action_size
        self.size = 0
        self.position = 0
        self._allocate(min(capacity, INITIAL_ALLOCATION))

    def _allocate(self, rows: int):
        def grow(old, shape, dtype):
            new = np.zeros((rows,) + shape, dtype=dtype)
            if old is not None:
                new[: len(old)] = old
            return new

        self._obs = grow(getattr(self, "_obs", None), (self.obs_size,), np.float64)
        self._action = grow(getattr(self, "_action", None), (self.action_size,), np.float64)
        self._reward = grow(getattr(self, "_reward", None), (), np.float64)
        self._next_obs = grow(getattr(self, "_next_obs", None), (self.obs_size,), np.float64)
        self._done = grow(getattr(self, "_done", None), (), np.float64)
        self._horizon = grow(getattr(self, "_horizon", None), (), np.int64)

    def __len__(self):
        return self.size

    def add(self, transition: Transition):
        if self.position >= len(self._reward):
            self._allocate(min(self.capacity, 2 * len(self._reward)))
        i = self.position
        self._obs[i] = transition.obs
        self._action[i] = transition.action
        self._reward[i] = transition.reward
        self._next_obs[i] = transition.next_obs
        self._done[i] = float(transition.done)
        self._horizon[i] = transition.horizon
        self.position = (self.position + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        """Draw ``batch_size`` stored transitions uniformly with replacement.

        :raises ContractError: If fewer than ``batch_size`` transitions are stored.
        """
        if batch_size > self.size:
            raise ContractError(f"Cannot sample {batch_size} transitions from a buffer holding {self.size}")
        index = rng.integers(0, self.size, size=batch_size)
        return self.gather(index)

    def gather(self, index: np.ndarray) -> Batch:
        return Batch(
            self._obs[index],
            self._action[index],
            self._reward[index],
            self._next_obs[index],
            self._done[index],
            self._horizon[index],
        )

    def oldest_first(self) -> np.ndarray:
        """Storage indices ordered from oldest to newest transition."""
        if self.size < self.capacity:
            return np.arange(self.size)
        return (np.arange(self.size) + self.position) % self.capacity

    def save(self, path: str | Path):
        n = self.size
        with open(path, "wb") as f:
            np.savez(
                f,
                obs=self._obs[:n],
                action=self._action[:n],
                reward=self._reward[:n],
                next_obs=self._next_obs[:n],
                done=self._done[:n],
                horizon=self._horizon[:n],
                meta=np.array([self.capacity, self.position, self.obs_size, self.action_size], dtype=np.int64),
            )
        logger.debug(f"Replay buffer with {n} transitions written to {path}")

    @classmethod
    def load(cls, path: str | Path) -> "ReplayBuffer":
        with np.load(path) as data:
            capacity, position, obs_size, action_size = (int(v) for v in data["meta"])
            buffer = cls(capacity, obs_size, action_size)
            n = len(data["reward"])
            buffer._allocate(max(n, min(capacity, INITIAL_ALLOCATION)))
            buffer._obs[:n] = data["obs"]
            buffer._action[:n] = data["action"]
            buffer._reward[:n] = data["reward"]
            buffer._next_obs[:n] = data["next_obs"]
            buffer._done[:n] = data["done"]
            buffer._horizon[:n] = data["horizon"]
        buffer.size = n
        buffer.position = position
        return buffer
