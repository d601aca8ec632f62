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
"""Training orchestration.

One run executes a fixed number of episodes. Every ``map_rotation_period``
episodes a map is drawn uniformly with replacement from ``map_list``; every
episode samples a fresh start/goal pair. A single seed fans out into
independent streams for map draws, resets, action noise, replay sampling,
update noise and network initialization, so a run is reproducible bit for
bit and can be resumed from its last checkpoint with identical results.

Artifacts in the output directory::

    manifest.json           config echo, map hashes, status
    train_log.csv           episode,return,length,outcome,map_id
    timing.csv              episode,wall_time
    losses.csv              step,critic1,critic2,actor,alpha,buffer_size
    checkpoint.navf         latest agent checkpoint
    checkpoints/            periodic agent checkpoints
    resume/                 replay buffer and counters for resuming
"""

import json
import logging
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from score.navforge.agents.base import Agent
from score.navforge.agents.factory import make_agent
from score.navforge.agents.losses import LossWriter
from score.navforge.agents.replay import ReplayBuffer, Transition
from score.navforge.config import NavforgeConfig
from score.navforge.core.sim.env import NavigationEnv
from score.navforge.core.utils.seeding import SeedStreams
from score.navforge.core.utils.utils import padder
from score.navforge.core.worldmap.catalog import resolve_map
from score.navforge.core.worldmap.gridmap import GridMap
from score.navforge.core.worldmap.roster import (
    ScenarioPair,
    ScenarioRoster,
    read_roster,
    sample_start_goal,
    validate_roster,
)
from score.navforge.errors import ConfigError, DivergenceError
from score.navforge.harness.checks import pre_training_phase
from score.navforge.harness.manifest import RunManifest, RunStatus
from score.navforge.harness.trainlog import EpisodeRecord, TrainLog


logger = logging.getLogger(__name__)

CHECKPOINT_NAME = "checkpoint.navf"
DIVERGED_CHECKPOINT_NAME = "checkpoint-diverged.navf"
LOG_NAME = "train_log.csv"
TIMING_NAME = "timing.csv"
LOSSES_NAME = "losses.csv"
RESUME_DIR = "resume"


def map_draw_episodes(episodes: int, period: int) -> list[int]:
    """Episode indices at which a new map is drawn."""
    return list(range(0, episodes, period))


@dataclass
class TrainingState:
    episode: int = 0
    total_steps: int = 0
    update_index: int = 0
    map_id: Optional[str] = None


@dataclass(frozen=True)
class TrainingResult:
    log: TrainLog
    checkpoint: Path
    status: str
    episodes_completed: int


class Trainer:
    def __init__(self, config: NavforgeConfig, output_dir: str | Path, maps: Optional[dict[str, GridMap]] = None):
        """Prepare a training run.

        :param NavforgeConfig config: Run configuration.
        :param output_dir: Existing directory receiving all artifacts.
        :param dict maps: Maps by id; resolved from ``config.train.map_list`` when omitted.
        """
        self.config = config
        self.output_dir = Path(output_dir)
        if maps is None:
            maps = dict(resolve_map(ref) for ref in config.train.map_list)
        self.maps = maps
        self.map_ids = list(maps)
        self.roster = self._load_roster()

        self.streams = SeedStreams(config.train.seed)
        self.agent: Agent = make_agent(config.agent, self.streams)
        self.env = NavigationEnv(config.sim, config.reward)
        self.state = TrainingState()
        self.log = TrainLog()
        self.manifest = RunManifest.for_run(config, maps)
        self._started = 0.0
        self._elapsed_before = 0.0

    @property
    def checkpoint_path(self) -> Path:
        return self.output_dir / CHECKPOINT_NAME

    @property
    def resume_dir(self) -> Path:
        return self.output_dir / RESUME_DIR

    def _load_roster(self) -> Optional[ScenarioRoster]:
        path = self.config.train.roster
        if path is None:
            return None
        if len(self.maps) != 1:
            raise ConfigError("train.roster requires exactly one map in train.map_list")
        map_id, gridmap = next(iter(self.maps.items()))
        roster = read_roster(path, map_id)
        validate_roster(gridmap, roster, self.config.sim.robot_radius)
        return roster

    def _draw_pair(self, gridmap: GridMap) -> ScenarioPair:
        reset_rng = self.streams.reset
        if self.roster is not None:
            return self.roster.pairs[int(reset_rng.integers(len(self.roster)))]
        train = self.config.train
        return sample_start_goal(gridmap, reset_rng, train.spawn_clearance, train.min_start_goal_separation)

    def _elapsed(self) -> float:
        return self._elapsed_before + time.perf_counter() - self._started

    def _run_episode(self, episode: int, losses: LossWriter) -> EpisodeRecord:
        gridmap = self.maps[self.state.map_id]
        warmup = self.config.agent.warmup_steps
        obs = self.env.reset(gridmap, self._draw_pair(gridmap), self.config.train_timeout)
        ret = 0.0
        while True:
            if self.state.total_steps < warmup:
                action = self.agent.random_action()
            else:
                action = self.agent.act(obs, explore=True)
            result = self.env.step(action)
            ended = result.status.terminal
            self.agent.observe(Transition(obs, action, result.reward, result.observation, result.done), ended)
            self.state.total_steps += 1
            ret += result.reward

            if self.state.total_steps > warmup:
                report = self.agent.update(self.state.update_index)
                self.state.update_index += 1
                if report is not None:
                    losses.write(report)

            obs = result.observation
            if ended:
                break

        length = self.env.episode.step_count
        record = EpisodeRecord(episode, ret, length, result.status, self.state.map_id, self._elapsed())
        logger.debug(
            f"Episode {episode} on '{record.map_id}': {result.status.value} after {length} steps, return {ret:.3f}"
        )
        return record

    def _log_progress(self, episode: int):
        window = self.config.train.log_window
        if (episode + 1) % window:
            return
        recent = self.log.records[-window:]
        mean_return = sum(r.ret for r in recent) / len(recent)
        logger.info(
            f"Episodes {episode + 1 - len(recent)}-{episode}: mean return {mean_return:.2f}, "
            f"success {self.log.success_rate(window):.1%}, {self.state.total_steps} steps, "
            f"{len(self.agent.buffer)} buffered"
        )

    def save(self, status: str = RunStatus.RUNNING):
        """Write checkpoint, resume state, logs and manifest for the episodes completed so far."""
        self.agent.save(self.checkpoint_path)
        self.resume_dir.mkdir(exist_ok=True)
        self.agent.buffer.save(self.resume_dir / "replay.npz")
        state = asdict(self.state) | {"streams": self.streams.get_state(), "elapsed": self._elapsed()}
        (self.resume_dir / "state.json").write_text(json.dumps(state, sort_keys=True), encoding="utf-8")
        self.log.write_csv(self.output_dir / LOG_NAME)
        self.log.write_timing_csv(self.output_dir / TIMING_NAME)
        self.manifest.status = status
        self.manifest.episodes_completed = self.state.episode
        self.manifest.write(self.output_dir)

    def restore(self):
        """Continue from the resume state of an earlier run in the same output directory.

        :raises ConfigError: If no resume state exists.
        """
        state_file = self.resume_dir / "state.json"
        if not state_file.exists():
            raise ConfigError(f"No resume state found in '{self.resume_dir}'")
        state = json.loads(state_file.read_text(encoding="utf-8"))
        self.streams.set_state(state.pop("streams"))
        self._elapsed_before = state.pop("elapsed", 0.0)
        self.state = TrainingState(**state)
        self.agent.load(self.checkpoint_path)
        self.agent.buffer = ReplayBuffer.load(self.resume_dir / "replay.npz")
        log = TrainLog.read_csv(self.output_dir / LOG_NAME, self.output_dir / TIMING_NAME)
        self.log = TrainLog([r for r in log.records if r.episode < self.state.episode])
        logger.info(f"Resuming after episode {self.state.episode - 1} ({self.state.total_steps} steps)")

    def run(self, resume: bool = False) -> TrainingResult:
        train = self.config.train
        pre_training_phase(self.config, self.maps, self.output_dir)
        if resume:
            self.restore()
        self.manifest.write(self.output_dir)
        self._started = time.perf_counter()
        status = RunStatus.COMPLETED
        logger.info(padder(f"training {self.config.agent.kind.value} for {train.episodes} episodes"))

        with LossWriter(self.output_dir / LOSSES_NAME, append=resume) as losses:
            try:
                for episode in range(self.state.episode, train.episodes):
                    if episode % train.map_rotation_period == 0 or self.state.map_id is None:
                        self.state.map_id = self.map_ids[int(self.streams.map_draw.integers(len(self.map_ids)))]
                        logger.info(padder(f"map '{self.state.map_id}' from episode {episode}"))

                    self.log.append(self._run_episode(episode, losses))
                    self.state.episode = episode + 1
                    self._log_progress(episode)

                    if self.state.episode % train.checkpoint_period == 0:
                        self.save()
                        self.agent.save(self.output_dir / "checkpoints" / f"checkpoint-{self.state.episode:06d}.navf")
                    if train.max_hours is not None and self._elapsed() > 3600.0 * train.max_hours:
                        logger.warning(f"Wall-time budget of {train.max_hours} h exhausted after episode {episode}")
                        status = RunStatus.ABORTED
                        break
            except DivergenceError as exc:
                logger.error(f"Training diverged in episode {self.state.episode}: {exc}")
                self.log.write_csv(self.output_dir / LOG_NAME)
                self.log.write_timing_csv(self.output_dir / TIMING_NAME)
                self.agent.save(self.output_dir / DIVERGED_CHECKPOINT_NAME)
                self.manifest.status = RunStatus.DIVERGED
                self.manifest.episodes_completed = self.state.episode
                self.manifest.write(self.output_dir)
                raise

        self.save(status)
        logger.info(
            f"Training {status} after {self.state.episode} episodes, "
            f"success rate {self.log.success_rate():.1%}, checkpoint {self.checkpoint_path}"
        )
        return TrainingResult(self.log, self.checkpoint_path, status, self.state.episode)


def run_training(
    config: NavforgeConfig, output_dir: str | Path, resume: bool = False, maps: Optional[dict[str, GridMap]] = None
) -> TrainingResult:
    """Run (or resume) a training run and write its artifacts to ``output_dir``."""
    return Trainer(config, output_dir, maps).run(resume=resume)
