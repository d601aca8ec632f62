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
"""Evaluation protocol: a frozen policy over a cycled scenario roster."""

import contextlib
import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol

import numpy as np

from score.navforge.agents.factory import load_policy
from score.navforge.config import NavforgeConfig
from score.navforge.core.percept.tracker import dump_pgm
from score.navforge.core.rewards.engines import TERM_NAMES
from score.navforge.core.sim.env import NavigationEnv
from score.navforge.core.sim.state import EpisodeStatus
from score.navforge.core.sim.trajectory import TrajectoryWriter
from score.navforge.core.utils.seeding import SeedStreams
from score.navforge.core.utils.utils import padder
from score.navforge.core.worldmap.catalog import resolve_map, resolve_roster
from score.navforge.core.worldmap.gridmap import GridMap
from score.navforge.core.worldmap.roster import ScenarioPair, validate_roster
from score.navforge.errors import ConfigError, ContractError
from score.navforge.evaluation.stats import REPORT_CONFIDENCES, BinomialCI, binomial_ci


logger = logging.getLogger(__name__)

TRIAL_COLUMNS = ["trial", "pair", "outcome", "steps", "path_length"]
TRIALS_NAME = "trials.csv"
REPORT_NAME = "report.json"


class ActingPolicy(Protocol):
    def act(self, obs: np.ndarray, rng: Optional[np.random.Generator] = None) -> np.ndarray: ...


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    pair: int
    outcome: EpisodeStatus
    steps: int
    path_length: float


@dataclass
class EvalReport:
    map_id: str
    label: str
    records: list[TrialRecord] = field(default_factory=list)

    def __post_init__(self):
        self.records = sorted(self.records, key=lambda r: r.trial)

    @property
    def trials(self) -> int:
        return len(self.records)

    def count(self, outcome: EpisodeStatus) -> int:
        return sum(r.outcome is outcome for r in self.records)

    @property
    def successes(self) -> int:
        return self.count(EpisodeStatus.ARRIVED)

    def _rate(self, outcome: EpisodeStatus) -> float:
        if not self.records:
            raise ContractError("An evaluation report without trials has no rates")
        return self.count(outcome) / self.trials

    @property
    def success_rate(self) -> float:
        return self._rate(EpisodeStatus.ARRIVED)

    @property
    def collision_rate(self) -> float:
        return self._rate(EpisodeStatus.COLLIDED)

    @property
    def timeout_rate(self) -> float:
        return self._rate(EpisodeStatus.TIMED_OUT)

    def confidence_intervals(self) -> dict[float, BinomialCI]:
        return {level: binomial_ci(self.successes, self.trials, level) for level in REPORT_CONFIDENCES}

    def summary(self) -> dict:
        return {
            "map_id": self.map_id,
            "label": self.label,
            "trials": self.trials,
            "successes": self.successes,
            "collisions": self.count(EpisodeStatus.COLLIDED),
            "timeouts": self.count(EpisodeStatus.TIMED_OUT),
            "success_rate": self.success_rate,
            "collision_rate": self.collision_rate,
            "timeout_rate": self.timeout_rate,
            "confidence_intervals": {
                f"{level:.2f}": {"normal": [ci.normal.lo, ci.normal.hi], "wilson": [ci.wilson.lo, ci.wilson.hi]}
                for level, ci in self.confidence_intervals().items()
            },
        }

    def write_trials_csv(self, path: str | Path):
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(TRIAL_COLUMNS)
            for r in self.records:
                writer.writerow([r.trial, r.pair, r.outcome.value, r.steps, repr(float(r.path_length))])

    def write(self, output_dir: str | Path):
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        self.write_trials_csv(output_dir / TRIALS_NAME)
        (output_dir / REPORT_NAME).write_text(json.dumps(self.summary(), indent=2) + "\n", encoding="utf-8")
        logger.info(f"Evaluation report written to {output_dir}")


@dataclass(frozen=True)
class ReportSummary:
    """The parts of ``report.json`` needed to assemble success tables."""

    map_id: str
    label: str
    trials: int
    successes: int

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @classmethod
    def read(cls, path: str | Path) -> "ReportSummary":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        try:
            return cls(data["map_id"], data["label"], int(data["trials"]), int(data["successes"]))
        except KeyError as exc:
            raise ConfigError(f"Evaluation report {path} lacks field {exc}") from exc


def method_label(config: NavforgeConfig, kind: Optional[str] = None) -> str:
    """Column label such as ``SAC-proposed``."""
    return f"{(kind or config.agent.kind.value).upper()}-{config.reward.variant.value}"


def run_trial(
    env: NavigationEnv,
    gridmap: GridMap,
    policy: ActingPolicy,
    pair: ScenarioPair,
    timeout: int,
    rng: Optional[np.random.Generator] = None,
    trajectory: Optional[TrajectoryWriter] = None,
) -> tuple[EpisodeStatus, int, float]:
    """Run one episode and return its outcome, step count and path length."""
    obs = env.reset(gridmap, pair, timeout)
    while True:
        result = env.step(policy.act(obs, rng))
        if trajectory is not None:
            trajectory.record(env.episode, result.reward, result.terms)
        if result.status.terminal:
            return result.status, env.episode.step_count, env.path_length
        obs = result.observation


def run_eval(
    config: NavforgeConfig,
    policy: Optional[ActingPolicy] = None,
    label: Optional[str] = None,
    output_dir: str | Path | None = None,
    trajectory_dir: str | Path | None = None,
    coverage_dir: str | Path | None = None,
) -> EvalReport:
    """Run ``config.eval.trials`` trials of a frozen policy.

    Trial ``i`` starts from roster pair ``i mod len(roster)``. The policy acts
    on its mean unless ``deterministic_policy`` is disabled, in which case
    actions are sampled from a stream seeded by ``eval.seed``.

    :param NavforgeConfig config: Run configuration; the ``[eval]`` section selects map, roster and trials.
    :param policy: Policy to evaluate; loaded from ``eval.checkpoint`` when omitted.
    :param str label: Method label for success tables.
    :param output_dir: Directory for ``trials.csv`` and ``report.json``; nothing is written when omitted.
    :param trajectory_dir: Directory receiving one trajectory CSV per trial.
    :param coverage_dir: Directory receiving the final tracker of each trial as a PGM image.
    :raises ConfigError: If the roster is infeasible on the map or no checkpoint is configured.
    :raises CheckpointError: If the checkpoint does not match the observation and action dimensions.
    """
    cfg = config.eval
    map_id, gridmap = resolve_map(cfg.map)
    roster = resolve_roster(map_id, gridmap, cfg.roster, cfg.roster_size)
    validate_roster(gridmap, roster, config.sim.robot_radius)

    kind = None
    if policy is None:
        if cfg.checkpoint is None:
            raise ConfigError("No checkpoint given for evaluation")
        policy = load_policy(cfg.checkpoint)
        kind = policy.kind.value
    label = label or method_label(config, kind)

    rng = None if cfg.deterministic_policy else SeedStreams(cfg.seed).action_noise
    env = NavigationEnv(config.sim, config.reward)
    term_names = TERM_NAMES[config.reward.variant]
    if trajectory_dir is not None:
        Path(trajectory_dir).mkdir(parents=True, exist_ok=True)
    if coverage_dir is not None:
        Path(coverage_dir).mkdir(parents=True, exist_ok=True)
    logger.info(padder(f"evaluating {label} on '{map_id}': {cfg.trials} trials over {len(roster)} pairs"))

    records = []
    for trial in range(cfg.trials):
        pair_index = trial % len(roster)
        pair = roster.pairs[pair_index]
        with contextlib.ExitStack() as stack:
            trajectory = None
            if trajectory_dir is not None:
                path = Path(trajectory_dir) / f"trial-{trial:04d}.csv"
                trajectory = stack.enter_context(TrajectoryWriter(path, term_names))
            outcome, steps, path_length = run_trial(env, gridmap, policy, pair, config.eval_timeout, rng, trajectory)
        if coverage_dir is not None:
            dump_pgm(env.tracker, Path(coverage_dir) / f"trial-{trial:04d}.pgm", gridmap)
        records.append(TrialRecord(trial, pair_index, outcome, steps, path_length))
        logger.debug(f"Trial {trial} (pair {pair_index}): {outcome.value} after {steps} steps")

    report = EvalReport(map_id, label, records)
    ci = report.confidence_intervals()[0.90]
    logger.info(
        f"Success {report.success_rate:.1%} (90% CI {ci.normal.as_percent()}), "
        f"collisions {report.collision_rate:.1%}, timeouts {report.timeout_rate:.1%}"
    )
    if output_dir is not None:
        report.write(output_dir)
    return report
