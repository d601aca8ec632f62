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
"""Squashed-Gaussian policy head.

Pre-squash samples ``u`` map to actions in ``[0, 1] x [-1, 1]``: the linear
velocity component through the logistic sigmoid, the angular one through
tanh. The log-density of the squashed action includes the change-of-variable
correction of both maps. The log-std head is soft-clamped into
``[log_std_min, log_std_max]`` with two softplus folds so it stays
differentiable everywhere.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from score.navforge.errors import DivergenceError


LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
LOG_2 = math.log(2.0)


def squash(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    a = np.empty_like(u)
    a[..., 0] = expit(u[..., 0])
    a[..., 1] = np.tanh(u[..., 1])
    return a


def squash_derivative(a: np.ndarray) -> np.ndarray:
    """``da/du`` expressed through the squashed action."""
    d = np.empty_like(a)
    d[..., 0] = a[..., 0] * (1.0 - a[..., 0])
    d[..., 1] = 1.0 - a[..., 1] * a[..., 1]
    return d


def log_abs_det(u: np.ndarray) -> np.ndarray:
    """Per-dimension ``log |da/du|``, computed without cancellation for large ``|u|``."""
    out = np.empty_like(u)
    out[..., 0] = -np.logaddexp(0.0, u[..., 0]) - np.logaddexp(0.0, -u[..., 0])
    out[..., 1] = 2.0 * (LOG_2 - u[..., 1] - np.logaddexp(0.0, -2.0 * u[..., 1]))
    return out


def log_abs_det_grad(u: np.ndarray) -> np.ndarray:
    out = np.empty_like(u)
    out[..., 0] = 1.0 - 2.0 * expit(u[..., 0])
    out[..., 1] = -2.0 * np.tanh(u[..., 1])
    return out


def soft_clamp(raw: np.ndarray, low: float, high: float) -> tuple[np.ndarray, np.ndarray]:
    """Smoothly fold ``raw`` into ``[low, high]`` and return the value with its derivative."""
    upper = high - np.logaddexp(0.0, high - raw)
    value = low + np.logaddexp(0.0, upper - low)
    derivative = expit(high - raw) * expit(upper - low)
    return value, derivative


@dataclass(frozen=True)
class SquashedSample:
    mean: np.ndarray
    log_std: np.ndarray
    log_std_grad: np.ndarray
    eps: np.ndarray
    u: np.ndarray
    action: np.ndarray
    log_prob: np.ndarray

    @property
    def std(self) -> np.ndarray:
        return np.exp(self.log_std)


def check_finite(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise DivergenceError(f"Non-finite {what}")
    return values


def sample_squashed(head: np.ndarray, eps: np.ndarray, log_std_min: float, log_std_max: float) -> SquashedSample:
    """Reparameterized sample from a ``(batch, 4)`` head output ``[mean(2), raw log-std(2)]``.

    :param np.ndarray head: Actor output.
    :param np.ndarray eps: Standard normal noise of shape ``(batch, 2)``; zeros give the mean action.
    """
    check_finite(head, "policy head output")
    mean = head[..., :2]
    log_std, log_std_grad = soft_clamp(head[..., 2:], log_std_min, log_std_max)
    u = mean + np.exp(log_std) * eps
    log_prob = np.sum(-0.5 * eps * eps - log_std - LOG_SQRT_2PI - log_abs_det(u), axis=-1)
    return SquashedSample(mean, log_std, log_std_grad, eps, u, squash(u), log_prob)


def head_gradient(sample: SquashedSample, grad_action: np.ndarray, grad_log_prob: np.ndarray) -> np.ndarray:
    """Chain a loss gradient through the sample back to the raw head output.

    :param SquashedSample sample: Sample the loss was computed on.
    :param np.ndarray grad_action: ``dL/da`` of shape ``(batch, 2)``.
    :param np.ndarray grad_log_prob: ``dL/dlog pi`` of shape ``(batch,)``.
    :returns: ``dL/d head`` of shape ``(batch, 4)``.
    """
    grad_log_prob = np.asarray(grad_log_prob)[..., np.newaxis]
    grad_u = grad_action * squash_derivative(sample.action) - grad_log_prob * log_abs_det_grad(sample.u)
    grad_log_std = grad_u * sample.std * sample.eps - grad_log_prob
    return np.concatenate([grad_u, grad_log_std * sample.log_std_grad], axis=-1)
