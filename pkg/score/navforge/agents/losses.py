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
"""Bootstrapped targets, losses and their gradients for the actor-critic learners.

Everything here is a pure function of its arguments, so update rules can be
checked on crafted batches and against finite differences.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from score.navforge.agents.squash import SquashedSample, head_gradient, sample_squashed, squash, squash_derivative
from score.navforge.core.nn.dense import DenseNet, GradientBundle


logger = logging.getLogger(__name__)

LOSS_COLUMNS = ["step", "critic1", "critic2", "actor", "alpha", "buffer_size"]


def sac_target(
    reward: np.ndarray,
    done: np.ndarray,
    discount: np.ndarray,
    q1_next: np.ndarray,
    q2_next: np.ndarray,
    alpha_log_prob: np.ndarray,
) -> np.ndarray:
    """``y = r + discount * (1 - done) * (min(Q1', Q2') - alpha * log pi(a'|s'))``."""
    return reward + discount * (1.0 - done) * (np.minimum(q1_next, q2_next) - alpha_log_prob)


def td3_target(
    reward: np.ndarray, done: np.ndarray, discount: np.ndarray, q1_next: np.ndarray, q2_next: np.ndarray
) -> np.ndarray:
    """``y = r + discount * (1 - done) * min(Q1', Q2')``."""
    return reward + discount * (1.0 - done) * np.minimum(q1_next, q2_next)


def critic_input(obs: np.ndarray, action: np.ndarray) -> np.ndarray:
    return np.concatenate([obs, action], axis=-1)


def critic_loss_and_grads(
    critic: DenseNet, obs: np.ndarray, action: np.ndarray, target: np.ndarray
) -> tuple[float, GradientBundle]:
    """Mean squared error of ``Q(s, a)`` against fixed targets."""
    q, trace = critic.forward(critic_input(obs, action))
    error = q[:, 0] - target
    batch = len(target)
    grads, _ = critic.backward(trace, (2.0 * error / batch)[:, np.newaxis])
    return float(np.mean(error * error)), grads


def _min_critic_action_gradient(
    critic1: DenseNet, critic2: DenseNet, obs: np.ndarray, action: np.ndarray, scale: float
) -> tuple[np.ndarray, np.ndarray]:
    """Return ``min(Q1, Q2)`` and ``scale * d min(Q1, Q2) / d action``."""
    q1, trace1 = critic1.forward(critic_input(obs, action))
    q2, trace2 = critic2.forward(critic_input(obs, action))
    use_first = q1[:, 0] <= q2[:, 0]
    q = np.where(use_first, q1[:, 0], q2[:, 0])
    _, grad1 = critic1.backward(trace1, np.where(use_first, scale, 0.0)[:, np.newaxis])
    _, grad2 = critic2.backward(trace2, np.where(use_first, 0.0, scale)[:, np.newaxis])
    obs_size = obs.shape[-1]
    return q, (grad1 + grad2)[:, obs_size:]


def sac_actor_loss_and_grads(
    actor: DenseNet,
    critic1: DenseNet,
    critic2: DenseNet,
    obs: np.ndarray,
    eps: np.ndarray,
    alpha: float,
    log_std_min: float,
    log_std_max: float,
) -> tuple[float, GradientBundle, SquashedSample]:
    """Reparameterized SAC actor loss ``mean(alpha * log pi(a|s) - min(Q1, Q2)(s, a))``."""
    head, trace = actor.forward(obs)
    sample = sample_squashed(head, eps, log_std_min, log_std_max)
    batch = len(obs)
    q, grad_action = _min_critic_action_gradient(critic1, critic2, obs, sample.action, -1.0 / batch)
    loss = float(np.mean(alpha * sample.log_prob - q))
    grad_head = head_gradient(sample, grad_action, np.full(batch, alpha / batch))
    grads, _ = actor.backward(trace, grad_head)
    return loss, grads, sample


def td3_actor_loss_and_grads(actor: DenseNet, critic1: DenseNet, obs: np.ndarray) -> tuple[float, GradientBundle]:
    """Deterministic policy loss ``-mean(Q1(s, pi(s)))``."""
    head, trace = actor.forward(obs)
    action = squash(head)
    q, critic_trace = critic1.forward(critic_input(obs, action))
    batch = len(obs)
    _, grad_input = critic1.backward(critic_trace, np.full((batch, 1), -1.0 / batch))
    grad_head = grad_input[:, obs.shape[-1] :] * squash_derivative(action)
    grads, _ = actor.backward(trace, grad_head)
    return float(-np.mean(q)), grads


def alpha_loss_and_grad(log_alpha: float, log_prob: np.ndarray, target_entropy: float) -> tuple[float, float]:
    """Temperature loss ``-mean(log_alpha * (log pi + target_entropy))`` with log-probabilities held fixed."""
    drive = log_prob + target_entropy
    return float(-np.mean(log_alpha * drive)), float(-np.mean(drive))


@dataclass(frozen=True)
class LossReport:
    step: int
    critic1: float
    critic2: float
    # NaN when the actor was not updated in this step
    actor: float
    alpha: float
    buffer_size: int

    @property
    def finite(self) -> bool:
        values = [self.critic1, self.critic2, self.alpha] + ([] if math.isnan(self.actor) else [self.actor])
        return all(math.isfinite(v) for v in values)

    def row(self) -> list:
        return [self.step, repr(self.critic1), repr(self.critic2), repr(self.actor), repr(self.alpha), self.buffer_size]


class LossWriter:
    """Append loss reports to a CSV file; used as a context manager."""

    def __init__(self, path: str | Path, append: bool = False):
        self.path = Path(path)
        self.append = append
        self._file = None
        self._writer = None

    def __enter__(self):
        write_header = not (self.append and self.path.exists())
        self._file = open(self.path, "a" if self.append else "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._file, lineterminator="\n")
        if write_header:
            self._writer.writerow(LOSS_COLUMNS)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self._file.close()

    def write(self, report: LossReport):
        self._writer.writerow(report.row())
