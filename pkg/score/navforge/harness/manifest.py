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
"""Run manifest written next to the checkpoints."""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

from score.navforge.config import NavforgeConfig
from score.navforge.core.utils.utils import git_blob_sha1
from score.navforge.core.worldmap.gridmap import GridMap, serialize_map


logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


class RunStatus:
    RUNNING = "running"
    COMPLETED = "completed"
    DIVERGED = "diverged"
    ABORTED = "aborted"


@dataclass
class RunManifest:
    seed: int
    agent: str
    reward: str
    config: dict
    maps: dict[str, str] = field(default_factory=dict)
    status: str = RunStatus.RUNNING
    episodes_completed: int = 0

    @classmethod
    def for_run(cls, config: NavforgeConfig, maps: dict[str, GridMap]) -> "RunManifest":
        return cls(
            seed=config.train.seed,
            agent=config.agent.kind.value,
            reward=config.reward.variant.value,
            config=config.model_dump(mode="json"),
            maps={map_id: map_hash(gridmap) for map_id, gridmap in sorted(maps.items())},
        )

    def write(self, output_dir: str | Path) -> Path:
        path = Path(output_dir) / MANIFEST_NAME
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    @classmethod
    def read(cls, output_dir: str | Path) -> "RunManifest":
        return cls(**json.loads((Path(output_dir) / MANIFEST_NAME).read_text(encoding="utf-8")))


def map_hash(gridmap: GridMap) -> str:
    """Git-style blob SHA-1 of the map's ``.gridmap`` text."""
    return git_blob_sha1(serialize_map(gridmap).encode("utf-8"))
