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
"""Fixed-topology dense networks with exact reverse-mode gradients.

Networks run in float64 on batches of shape ``(batch, features)``; a single
1-D input is treated as a batch of one. ``forward`` returns a :class:`Trace`
holding the activations ``backward`` needs. The trace is bound to the
parameter version it was computed with, so a trace taken before an
optimizer or blending step cannot be replayed.
"""

import copy
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import expit

from score.navforge.errors import ContractError


logger = logging.getLogger(__name__)


class Activation(str, Enum):
    RELU = "relu"
    TANH = "tanh"
    SIGMOID = "sigmoid"
    LINEAR = "linear"
    SOFTPLUS = "softplus"

    def apply(self, z: np.ndarray) -> np.ndarray:
        if self is Activation.RELU:
            return np.maximum(z, 0.0)
        if self is Activation.TANH:
            return np.tanh(z)
        if self is Activation.SIGMOID:
            return expit(z)
        if self is Activation.SOFTPLUS:
            return np.logaddexp(0.0, z)
        return z

    def derivative(self, z: np.ndarray, a: np.ndarray) -> np.ndarray:
        """Derivative at pre-activation ``z`` with output ``a``; ReLU uses 0 at ``z == 0``."""
        if self is Activation.RELU:
            return (z > 0.0).astype(np.float64)
        if self is Activation.TANH:
            return 1.0 - a * a
        if self is Activation.SIGMOID:
            return a * (1.0 - a)
        if self is Activation.SOFTPLUS:
            return expit(z)
        return np.ones_like(z)


@dataclass
class DenseLayer:
    weights: np.ndarray
    bias: np.ndarray
    activation: Activation = Activation.LINEAR

    @property
    def in_size(self) -> int:
        return self.weights.shape[1]

    @property
    def out_size(self) -> int:
        return self.weights.shape[0]


@dataclass
class GradientBundle:
    """Gradients ordered like :meth:`DenseNet.parameters`."""

    grads: list[np.ndarray] = field(default_factory=list)

    def __iter__(self):
        return iter(self.grads)

    def __len__(self):
        return len(self.grads)

    def scaled(self, factor: float) -> "GradientBundle":
        return GradientBundle([g * factor for g in self.grads])

    def __add__(self, other: "GradientBundle") -> "GradientBundle":
        if len(self) != len(other):
            raise ContractError("Cannot add gradient bundles of different networks")
        return GradientBundle([a + b for a, b in zip(self.grads, other.grads)])

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(g)) for g in self.grads)


@dataclass(frozen=True)
class Trace:
    net_id: int
    version: int
    squeeze: bool
    inputs: tuple[np.ndarray, ...]
    pre_activations: tuple[np.ndarray, ...]
    outputs: tuple[np.ndarray, ...]


class DenseNet:
    def __init__(self, layers: list[DenseLayer]):
        if not layers:
            raise ContractError("A network needs at least one layer")
        for index, (first, second) in enumerate(zip(layers, layers[1:])):
            if first.out_size != second.in_size:
                raise ContractError(
                    f"Layer {index} outputs {first.out_size} values but layer {index + 1} expects {second.in_size}"
                )
        for layer in layers:
            if layer.bias.shape != (layer.out_size,):
                raise ContractError(f"Bias shape {layer.bias.shape} does not match {layer.out_size} outputs")
            if not (np.all(np.isfinite(layer.weights)) and np.all(np.isfinite(layer.bias))):
                raise ContractError("Network parameters must be finite")
        self.layers = layers
        self.version = 0

    @classmethod
    def build(
        cls,
        sizes: list[int],
        rng: np.random.Generator,
        hidden_activation: Activation = Activation.RELU,
        output_activation: Activation = Activation.LINEAR,
        final_scale: float = 1.0,
    ) -> "DenseNet":
        """Create a network with layer sizes ``sizes`` (input size first).

        Weights and biases are drawn uniformly from ``+-1/sqrt(fan_in)``; the
        last layer is additionally multiplied by ``final_scale``.
        """
        layers = []
        pairs = list(zip(sizes, sizes[1:]))
        for index, (fan_in, fan_out) in enumerate(pairs):
            bound = 1.0 / math.sqrt(fan_in)
            weights = rng.uniform(-bound, bound, size=(fan_out, fan_in))
            bias = rng.uniform(-bound, bound, size=fan_out)
            last = index == len(pairs) - 1
            if last:
                weights *= final_scale
                bias *= final_scale
            layers.append(DenseLayer(weights, bias, output_activation if last else hidden_activation))
        return cls(layers)

    @property
    def in_size(self) -> int:
        return self.layers[0].in_size

    @property
    def out_size(self) -> int:
        return self.layers[-1].out_size

    @property
    def shapes(self) -> list[tuple[int, int]]:
        return [layer.weights.shape for layer in self.layers]

    @property
    def activations(self) -> list[Activation]:
        return [layer.activation for layer in self.layers]

    def parameters(self) -> list[np.ndarray]:
        params = []
        for layer in self.layers:
            params += [layer.weights, layer.bias]
        return params

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    def mark_updated(self):
        """Invalidate every trace taken so far; call after mutating parameters in place."""
        self.version += 1

    def copy(self) -> "DenseNet":
        return DenseNet(copy.deepcopy(self.layers))

    def congruent_with(self, other: "DenseNet") -> bool:
        return self.shapes == other.shapes and self.activations == other.activations

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, Trace]:
        """Evaluate the network.

        :param np.ndarray x: Input of shape ``(in_size,)`` or ``(batch, in_size)``.
        :returns: Output of matching rank and the trace for :meth:`backward`.
        :raises ContractError: If the input width differs from ``in_size``.
        """
        x = np.asarray(x, dtype=np.float64)
        squeeze = x.ndim == 1
        if squeeze:
            x = x[np.newaxis, :]
        if x.ndim != 2 or x.shape[1] != self.in_size:
            raise ContractError(f"Network expects inputs of width {self.in_size}, got shape {x.shape}")

        inputs, pre_activations, outputs = [], [], []
        a = x
        for layer in self.layers:
            inputs.append(a)
            z = a @ layer.weights.T + layer.bias
            a = layer.activation.apply(z)
            pre_activations.append(z)
            outputs.append(a)

        trace = Trace(id(self), self.version, squeeze, tuple(inputs), tuple(pre_activations), tuple(outputs))
        return (a[0] if squeeze else a), trace

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.forward(x)[0]

    def backward(self, trace: Trace, grad_output: np.ndarray) -> tuple[GradientBundle, np.ndarray]:
        """Back-propagate ``dL/d output`` through a retained forward pass.

        :returns: Parameter gradients and the gradient with respect to the input.
        :raises ContractError: If the trace belongs to another network or to older parameters.
        """
        if trace.net_id != id(self) or trace.version != self.version:
            raise ContractError("Stale forward trace: parameters changed since the forward pass")
        delta = np.asarray(grad_output, dtype=np.float64)
        if trace.squeeze:
            delta = delta[np.newaxis, :]
        if delta.shape != trace.outputs[-1].shape:
            raise ContractError(f"Output gradient shape {delta.shape} does not match {trace.outputs[-1].shape}")

        grads: list[np.ndarray] = []
        for layer, a_in, z, a_out in zip(
            reversed(self.layers), reversed(trace.inputs), reversed(trace.pre_activations), reversed(trace.outputs)
        ):
            delta = delta * layer.activation.derivative(z, a_out)
            grads += [delta.sum(axis=0), delta.T @ a_in]
            delta = delta @ layer.weights
        grads.reverse()
        grad_input = delta[0] if trace.squeeze else delta
        return GradientBundle(grads), grad_input


def soft_update(target: DenseNet, online: DenseNet, tau: float) -> None:
    """Blend ``online`` into ``target`` in place: ``target = tau * online + (1 - tau) * target``.

    :raises ContractError: On different architectures or ``tau`` outside (0, 1].
    """
    if not 0.0 < tau <= 1.0:
        raise ContractError(f"Blending rate must lie in (0, 1], got {tau}")
    if not target.congruent_with(online):
        raise ContractError(f"Cannot blend {online.shapes} into {target.shapes}")
    for t, o in zip(target.parameters(), online.parameters()):
        t *= 1.0 - tau
        t += tau * o
    target.mark_updated()
