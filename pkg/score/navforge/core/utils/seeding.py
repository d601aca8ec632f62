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
"""Seed fan-out into independent random streams.

A single integer seed is expanded with :class:`numpy.random.SeedSequence`
into one generator per consumer, so that drawing more samples in one
consumer never shifts the values another consumer sees.
"""

import numpy as np


STREAM_NAMES = ("map_draw", "reset", "action_noise", "replay", "update", "init")


class SeedStreams:
    def __init__(self, seed: int):
        self.seed = seed
        children = np.random.SeedSequence(seed).spawn(len(STREAM_NAMES))
        self._generators = {name: np.random.default_rng(child) for name, child in zip(STREAM_NAMES, children)}

    def __getattr__(self, name):
        if name.startswith("_"):
            raise AttributeError(name)
        try:
            return self._generators[name]
        except KeyError:
            raise AttributeError(name) from None

    def get_state(self) -> dict:
        return {name: rng.bit_generator.state for name, rng in self._generators.items()}

    def set_state(self, state: dict) -> None:
        missing = set(STREAM_NAMES) - set(state)
        if missing:
            raise ValueError(f"Random stream state is missing streams: {sorted(missing)}")
        for name, rng in self._generators.items():
            rng.bit_generator.state = state[name]
