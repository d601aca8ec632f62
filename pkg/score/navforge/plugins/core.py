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
import functools
import os

import numpy as np
import pytest

from score.navforge.config import SEED_ENV_VARIABLE
from score.navforge.core.worldmap.gridmap import GridMap


SMALL_MAP_CELLS = 60
SMALL_MAP_RESOLUTION = 0.1


def pytest_addoption(parser):
    parser.addoption(
        "--navforge-seed",
        action="store",
        type=int,
        default=None,
        help=f"Seed for randomized tests, defaults to ${SEED_ENV_VARIABLE} or 0",
    )
    parser.addoption(
        "--run-slow",
        action="store_true",
        required=False,
        help="Run long learning and determinism tests marked 'slow'",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running learning and determinism runs, enabled with --run-slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow", False):
        return
    skip_slow = pytest.mark.skip(reason="slow test, pass --run-slow to run it")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def navforge_seed(request):
    """Session seed from --navforge-seed, the seed environment variable, or 0."""
    seed = request.config.getoption("--navforge-seed", None)
    if seed is None:
        seed = int(os.environ.get(SEED_ENV_VARIABLE, "0"))
    yield seed


@pytest.fixture()
def rng(navforge_seed):
    yield np.random.default_rng(navforge_seed)


@pytest.fixture(scope="session")
def small_map():
    """6 m square room at 0.1 m resolution with a 1 m square block in the middle."""
    occupied = np.zeros((SMALL_MAP_CELLS, SMALL_MAP_CELLS), dtype=bool)
    occupied[25:35, 25:35] = True
    yield GridMap(occupied, SMALL_MAP_RESOLUTION)


def requires_slow(func):
    """Decorator to skip a test unless slow tests were requested.

    Example:
        @requires_slow
        def test_learning_smoke(request, tmp_path):
            ...
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        request = kwargs.get("request")
        if request is None or not request.config.getoption("--run-slow", False):
            pytest.skip("slow test, pass --run-slow to run it")
        return func(*args, **kwargs)

    return pytest.mark.slow(wrapper)
