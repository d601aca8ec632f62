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
"""Per-episode training records and reward moving averages.

``train_log.csv`` holds only seed-determined columns so that two runs with
the same seed produce identical files; wall-clock times go to a separate
``timing.csv``.
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from score.navforge.core.sim.state import EpisodeStatus
from score.navforge.errors import ContractError


logger = logging.getLogger(__name__)

LOG_COLUMNS = ["episode", "return", "length", "outcome", "map_id"]
TIMING_COLUMNS = ["episode", "wall_time"]
OUTCOMES = (EpisodeStatus.ARRIVED, EpisodeStatus.COLLIDED, EpisodeStatus.TIMED_OUT)


@dataclass(frozen=True)
class EpisodeRecord:
    episode: int
    ret: float
    length: int
    outcome: EpisodeStatus
    map_id: str
    wall_time: float = 0.0

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ContractError(f"Episode outcome must be terminal, got '{self.outcome.value}'")


def moving_average(series, window: int) -> np.ndarray:
    """Trailing mean with a growing head: ``out[i] = mean(series[max(0, i - window + 1) : i + 1])``."""
    if window < 1:
        raise ContractError(f"Moving-average window must be at least 1, got {window}")
    values = np.asarray(series, dtype=np.float64)
    sums = np.concatenate([[0.0], np.cumsum(values)])
    end = np.arange(1, values.size + 1)
    begin = np.maximum(0, end - window)
    return (sums[end] - sums[begin]) / (end - begin)


@dataclass
class TrainLog:
    records: list[EpisodeRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def append(self, record: EpisodeRecord):
        if self.records and record.episode <= self.records[-1].episode:
            raise ContractError(f"Episode {record.episode} does not follow episode {self.records[-1].episode}")
        self.records.append(record)

    @property
    def returns(self) -> np.ndarray:
        return np.array([r.ret for r in self.records], dtype=np.float64)

    def moving_average(self, window: int) -> np.ndarray:
        return moving_average(self.returns, window)

    def success_rate(self, last: int | None = None) -> float:
        records = self.records[-last:] if last else self.records
        if not records:
            return 0.0
        return sum(r.outcome is EpisodeStatus.ARRIVED for r in records) / len(records)

    def write_csv(self, path: str | Path):
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(LOG_COLUMNS)
            for r in self.records:
                writer.writerow([r.episode, repr(float(r.ret)), r.length, r.outcome.value, r.map_id])

    def write_timing_csv(self, path: str | Path):
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(TIMING_COLUMNS)
            for r in self.records:
                writer.writerow([r.episode, f"{r.wall_time:.3f}"])

    @classmethod
    def read_csv(cls, path: str | Path, timing_path: str | Path | None = None) -> "TrainLog":
        wall_times = {}
        if timing_path is not None and Path(timing_path).exists():
            with open(timing_path, newline="", encoding="utf-8") as f:
                wall_times = {int(row["episode"]): float(row["wall_time"]) for row in csv.DictReader(f)}
        log = cls()
        with open(path, newline="", encoding="utf-8") as f:
            for row in csv.DictReader(f):
                episode = int(row["episode"])
                log.append(
                    EpisodeRecord(
                        episode=episode,
                        ret=float(row["return"]),
                        length=int(row["length"]),
                        outcome=EpisodeStatus(row["outcome"]),
                        map_id=row["map_id"],
                        wall_time=wall_times.get(episode, 0.0),
                    )
                )
        return log
