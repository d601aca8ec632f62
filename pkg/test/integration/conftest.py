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
from pathlib import Path

import pytest

from score.navforge.config import SEED_ENV_VARIABLE, build_configuration, load_configuration
from score.navforge.core.worldmap.gridmap import read_map


RESOURCES = Path(__file__).parent.parent / "resources"


@pytest.fixture(autouse=True)
def no_seed_override(monkeypatch):
    monkeypatch.delenv(SEED_ENV_VARIABLE, raising=False)


@pytest.fixture(scope="session")
def room_map_path():
    yield RESOURCES / "room.gridmap"


@pytest.fixture(scope="session")
def room_roster_path():
    yield RESOURCES / "room.roster"


@pytest.fixture(scope="session")
def room_maps(room_map_path):
    """6 x 4 m walled room with a square pillar, keyed by its map id."""
    yield {"room": read_map(room_map_path)}


@pytest.fixture()
def short_run_config():
    yield load_configuration(RESOURCES / "short_run.toml")


@pytest.fixture()
def override():
    """Return a copy of a configuration with keys of one section replaced and revalidated."""

    def _override(config, section, **values):
        data = config.model_dump(mode="json")
        data[section].update(values)
        return build_configuration(data)

    yield _override


@pytest.fixture()
def run_dir(tmp_path):
    path = tmp_path / "run"
    path.mkdir()
    yield path
