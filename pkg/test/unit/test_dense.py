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
import numpy as np
import pytest

from score.navforge.core.nn.dense import Activation, DenseLayer, DenseNet, soft_update
from score.navforge.errors import ContractError


def _numeric_gradients(net: DenseNet, x: np.ndarray, upstream: np.ndarray, h: float = 1e-6) -> list[np.ndarray]:
    grads = []
    for param in net.parameters():
        grad = np.zeros_like(param)
        for index in np.ndindex(param.shape):
            saved = param[index]
            param[index] = saved + h
            plus = float(np.sum(net.predict(x) * upstream))
            param[index] = saved - h
            minus = float(np.sum(net.predict(x) * upstream))
            param[index] = saved
            grad[index] = (plus - minus) / (2 * h)
        grads.append(grad)
    return grads


@pytest.mark.parametrize("hidden", [Activation.TANH, Activation.SIGMOID, Activation.SOFTPLUS])
@pytest.mark.parametrize("output", [Activation.LINEAR, Activation.TANH])
def test_backward_matches_finite_differences(rng, hidden, output):
    net = DenseNet.build([5, 7, 6, 3], rng, hidden, output)
    x = rng.normal(size=(4, 5))
    upstream = rng.normal(size=(4, 3))

    _, trace = net.forward(x)
    grads, grad_input = net.backward(trace, upstream)

    for analytic, numeric in zip(grads, _numeric_gradients(net, x, upstream)):
        assert np.max(np.abs(analytic - numeric)) <= 1e-6

    h = 1e-6
    numeric_input = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        shifted = x.copy()
        shifted[index] += h
        plus = np.sum(net.predict(shifted) * upstream)
        shifted[index] -= 2 * h
        minus = np.sum(net.predict(shifted) * upstream)
        numeric_input[index] = (plus - minus) / (2 * h)
    assert np.max(np.abs(grad_input - numeric_input)) <= 1e-6


def test_relu_backward_away_from_kinks(rng):
    net = DenseNet.build([4, 8, 2], rng)
    x = rng.normal(size=(3, 4))
    upstream = np.ones((3, 2))
    _, trace = net.forward(x)
    grads, _ = net.backward(trace, upstream)
    for analytic, numeric in zip(grads, _numeric_gradients(net, x, upstream)):
        assert np.max(np.abs(analytic - numeric)) <= 1e-6


def test_single_input_is_a_batch_of_one(rng):
    net = DenseNet.build([3, 4, 2], rng)
    x = rng.normal(size=3)
    single = net.predict(x)
    assert single.shape == (2,)
    assert np.array_equal(single, net.predict(x[np.newaxis, :])[0])


def test_forward_rejects_wrong_width(rng):
    net = DenseNet.build([3, 2], rng)
    with pytest.raises(ContractError, match="width 3"):
        net.forward(np.zeros(4))


def test_construction_checks_layer_sizes():
    with pytest.raises(ContractError, match="expects"):
        DenseNet([DenseLayer(np.zeros((3, 2)), np.zeros(3)), DenseLayer(np.zeros((1, 4)), np.zeros(1))])
    with pytest.raises(ContractError, match="finite"):
        DenseNet([DenseLayer(np.full((1, 1), np.nan), np.zeros(1))])
    with pytest.raises(ContractError):
        DenseNet([])


def test_stale_trace_is_rejected(rng):
    net = DenseNet.build([2, 3, 1], rng)
    _, trace = net.forward(np.ones(2))
    soft_update(net, net.copy(), 0.5)
    with pytest.raises(ContractError, match="Stale"):
        net.backward(trace, np.ones(1))


def test_trace_of_another_network_is_rejected(rng):
    net = DenseNet.build([2, 3, 1], rng)
    _, trace = net.copy().forward(np.ones(2))
    with pytest.raises(ContractError, match="Stale"):
        net.backward(trace, np.ones(1))


def test_backward_does_not_mutate_parameters(rng):
    net = DenseNet.build([2, 3, 1], rng)
    before = [p.copy() for p in net.parameters()]
    _, trace = net.forward(np.ones(2))
    net.backward(trace, np.ones(1))
    assert all(np.array_equal(a, b) for a, b in zip(before, net.parameters()))


def test_soft_update_arithmetic():
    target = DenseNet([DenseLayer(np.zeros((1, 1)), np.zeros(1))])
    online = DenseNet([DenseLayer(np.ones((1, 1)), np.ones(1))])
    soft_update(target, online, 0.005)
    assert target.layers[0].weights[0, 0] == pytest.approx(0.005, abs=1e-12)

    soft_update(target, online, 1.0)
    assert target.layers[0].weights[0, 0] == 1.0
    assert online.layers[0].weights[0, 0] == 1.0


def test_repeated_blending_converges_geometrically(rng):
    online = DenseNet.build([3, 4, 2], rng)
    target = DenseNet.build([3, 4, 2], rng)

    def gap():
        return max(np.max(np.abs(t - o)) for t, o in zip(target.parameters(), online.parameters()))

    start = gap()
    for _ in range(10):
        soft_update(target, online, 0.1)
    assert gap() == pytest.approx(start * 0.9**10, rel=1e-9)


def test_soft_update_rejects_bad_inputs(rng):
    net = DenseNet.build([3, 4, 2], rng)
    with pytest.raises(ContractError, match="Blending rate"):
        soft_update(net.copy(), net, 0.0)
    with pytest.raises(ContractError, match="Cannot blend"):
        soft_update(DenseNet.build([3, 5, 2], rng), net, 0.5)


def test_build_respects_final_scale_and_fan_in(rng):
    net = DenseNet.build([16, 8, 2], rng, final_scale=1e-3)
    assert np.max(np.abs(net.layers[0].weights)) <= 0.25
    assert np.max(np.abs(net.layers[1].weights)) <= 1e-3 / np.sqrt(8)
    assert net.parameter_count() == 16 * 8 + 8 + 8 * 2 + 2
