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

from score.navforge.agents.losses import (
    LOSS_COLUMNS,
    LossReport,
    LossWriter,
    alpha_loss_and_grad,
    critic_loss_and_grads,
    sac_actor_loss_and_grads,
    sac_target,
    td3_actor_loss_and_grads,
    td3_target,
)
from score.navforge.core.nn.dense import Activation, DenseNet


_OBS = 3


def _params_fd(net: DenseNet, loss, h: float = 1e-6) -> list[np.ndarray]:
    grads = []
    for param in net.parameters():
        grad = np.zeros_like(param)
        for index in np.ndindex(param.shape):
            saved = param[index]
            param[index] = saved + h
            plus = loss()
            param[index] = saved - h
            minus = loss()
            param[index] = saved
            grad[index] = (plus - minus) / (2 * h)
        grads.append(grad)
    return grads


def _assert_close(analytic, numeric, tolerance=1e-6):
    for a, n in zip(analytic, numeric):
        assert np.max(np.abs(a - n)) <= tolerance


def test_sac_target_hand_value():
    reward, done, discount = np.array([1.0]), np.array([0.0]), np.array([0.99])
    y = sac_target(reward, done, discount, np.array([2.0]), np.array([3.0]), np.array([0.1]))
    assert y[0] == pytest.approx(2.881, abs=1e-9)


def test_td3_target_uses_the_smaller_critic():
    reward, done, discount = np.array([1.0, 1.0]), np.array([0.0, 0.0]), np.array([0.99, 0.99])
    y = td3_target(reward, done, discount, np.array([2.0, 5.0]), np.array([3.0, 4.0]))
    assert y == pytest.approx([1.0 + 0.99 * 2.0, 1.0 + 0.99 * 4.0], abs=1e-9)


def test_terminal_transitions_do_not_bootstrap():
    y = td3_target(np.array([-200.0]), np.array([1.0]), np.array([0.99]), np.array([50.0]), np.array([60.0]))
    assert y[0] == -200.0
    done, discount = np.array([1.0]), np.array([0.99])
    y = sac_target(np.array([100.0]), done, discount, np.array([7.0]), np.array([8.0]), np.array([3.0]))
    assert y[0] == 100.0


def test_sac_and_td3_targets_agree_without_entropy():
    rng = np.random.default_rng(5)
    reward, q1, q2 = rng.normal(size=8), rng.normal(size=8), rng.normal(size=8)
    done = (rng.uniform(size=8) < 0.3).astype(float)
    discount = 0.99 ** rng.integers(1, 11, size=8)
    sac = sac_target(reward, done, discount, q1, q2, np.zeros(8))
    td3 = td3_target(reward, done, discount, q1, q2)
    assert np.max(np.abs(sac - td3)) <= 1e-9


def test_critic_gradients(rng):
    critic = DenseNet.build([_OBS + 2, 8, 1], rng, Activation.TANH)
    obs, action, target = rng.normal(size=(4, _OBS)), rng.uniform(-1, 1, (4, 2)), rng.normal(size=4)
    loss, grads = critic_loss_and_grads(critic, obs, action, target)
    assert loss == pytest.approx(np.mean((critic.predict(np.hstack([obs, action]))[:, 0] - target) ** 2))
    _assert_close(grads, _params_fd(critic, lambda: critic_loss_and_grads(critic, obs, action, target)[0]))


def test_sac_actor_gradients(rng):
    actor = DenseNet.build([_OBS, 8, 4], rng, Activation.TANH)
    critic1 = DenseNet.build([_OBS + 2, 8, 1], rng, Activation.TANH)
    critic2 = DenseNet.build([_OBS + 2, 8, 1], rng, Activation.TANH)
    obs, eps = rng.normal(size=(5, _OBS)), rng.standard_normal((5, 2))

    def loss():
        return sac_actor_loss_and_grads(actor, critic1, critic2, obs, eps, 0.2, -5.0, 2.0)[0]

    _, grads, _ = sac_actor_loss_and_grads(actor, critic1, critic2, obs, eps, 0.2, -5.0, 2.0)
    _assert_close(grads, _params_fd(actor, loss))


def test_td3_actor_gradients(rng):
    actor = DenseNet.build([_OBS, 8, 2], rng, Activation.TANH)
    critic1 = DenseNet.build([_OBS + 2, 8, 1], rng, Activation.TANH)
    obs = rng.normal(size=(5, _OBS))
    loss, grads = td3_actor_loss_and_grads(actor, critic1, obs)
    _assert_close(grads, _params_fd(actor, lambda: td3_actor_loss_and_grads(actor, critic1, obs)[0]))


def test_alpha_gradient_pushes_toward_target_entropy():
    log_prob = np.array([1.0, 3.0])
    loss, grad = alpha_loss_and_grad(math.log(0.2), log_prob, -2.0)
    assert grad == pytest.approx(-0.0)
    _, grad = alpha_loss_and_grad(math.log(0.2), np.array([0.0]), -2.0)
    assert grad == pytest.approx(2.0)
    assert loss == pytest.approx(0.0)


def test_loss_report_finiteness():
    assert LossReport(0, 1.0, 2.0, float("nan"), 0.0, 10).finite
    assert not LossReport(0, float("inf"), 2.0, 1.0, 0.2, 10).finite


def test_loss_writer_appends_without_repeating_the_header(tmp_path):
    path = tmp_path / "losses.csv"
    with LossWriter(path) as writer:
        writer.write(LossReport(0, 1.0, 2.0, 3.0, 0.2, 10))
    with LossWriter(path, append=True) as writer:
        writer.write(LossReport(1, 1.5, 2.5, float("nan"), 0.2, 11))
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(LOSS_COLUMNS)
    assert lines[1:] == ["0,1.0,2.0,3.0,0.2,10", "1,1.5,2.5,nan,0.2,11"]
