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
import csv
import logging
from pathlib import Path
from typing import Optional

from score.navforge.core.sim.state import EpisodeState


logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ["step", "x", "y", "theta", "v", "omega", "reward", "status"]


class TrajectoryWriter:
    """
    Write an episode trajectory as CSV, one row per step.
    Columns are ``step,x,y,theta,v,omega,reward,status``, optionally followed
    by one column per reward term.
    """

    def __init__(self, path: str | Path, term_names: Optional[list[str]] = None):
        """Initialize the writer; the file is opened on ``__enter__``.

        :param path: Output CSV file.
        :param list[str] term_names: Reward term columns appended after the fixed columns.
        """
        self.path = Path(path)
        self.term_names = list(term_names or [])
        self._file = None
        self._writer = None
        self.rows = 0

    def __enter__(self):
        self._file = open(self.path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._file, lineterminator="\n")
        self._writer.writerow(TRAJECTORY_COLUMNS + self.term_names)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self._file.close()
        logger.debug(f"Trajectory with {self.rows} rows written to {self.path}")

    def record(self, episode: EpisodeState, reward: float, terms: Optional[dict[str, float]] = None):
        if self._writer is None:
            raise RuntimeError("TrajectoryWriter must be used as a context manager")
        pose = episode.robot.pose
        row = [
            episode.step_count,
            repr(pose.x),
            repr(pose.y),
            repr(pose.theta),
            repr(episode.robot.v),
            repr(episode.robot.omega),
            repr(float(reward)),
            episode.status.value,
        ]
        terms = terms or {}
        row += [repr(float(terms.get(name, 0.0))) for name in self.term_names]
        self._writer.writerow(row)
        self.rows += 1
