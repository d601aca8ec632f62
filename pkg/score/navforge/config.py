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
"""Navforge configuration loading and validation.

A run is configured by a TOML file with up to five sections. Every section
is optional and every key has a default, so an empty file is a valid
configuration. Unknown keys are rejected.

Example::

    [sim]
    dt = 0.1
    robot_radius = 0.2
    max_range = 10.0

    [reward]
    variant = "proposed"
    r_l_cap = 3.0

    [agent]
    kind = "sac"
    hidden_sizes = [512, 512, 512]

    [train]
    episodes = 20000
    map_list = ["train-12", "train-20", "train-40"]
    seed = 7

    [eval]
    map = "test-40a"
    trials = 500

The environment variable ``NAVFORGE_SEED`` overrides ``train.seed`` and
``eval.seed``.
"""

import copy
import logging
import os
import tomllib
from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from score.navforge.errors import ConfigError


logger = logging.getLogger(__name__)

SEED_ENV_VARIABLE = "NAVFORGE_SEED"

LIDAR_BEAMS = 684
LIDAR_GROUP = 12
LIDAR_FOV_DEG = 270.0


class SimConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dt: float = Field(default=0.1, gt=0)
    robot_radius: float = Field(default=0.2, gt=0)
    max_range: float = Field(default=10.0, gt=0)
    d_min: float = Field(default=0.5, gt=0)
    train_timeout: int = Field(default=500, ge=1)
    eval_timeout: int = Field(default=1500, ge=1)
    v_max: float = Field(default=0.5, gt=0)
    omega_max: float = Field(default=1.0, gt=0)
    normalize_observations: bool = False


class RewardVariant(str, Enum):
    PROPOSED = "proposed"
    CIMURS_STYLE = "cimurs"
    HU_STYLE = "hu"
    GRANDO_STYLE = "grando"


DEFAULT_REWARD_CONSTANTS = {
    RewardVariant.PROPOSED: {"r_a": 100.0, "r_c": -200.0, "r_t": -200.0},
    RewardVariant.CIMURS_STYLE: {"r_a": 80.0, "r_c": -100.0},
    RewardVariant.HU_STYLE: {
        "r_a": 40.0,
        "r_c": 0.0,
        "r_cp": -1.0,
        "r_cpo": -1.0,
        "r_av": -1.0,
        "r_lv": -1.0,
        "r_progress": 1.0,
    },
    RewardVariant.GRANDO_STYLE: {"r_a": 100.0, "r_c": -10.0},
}


class RewardSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    variant: RewardVariant = RewardVariant.PROPOSED
    constants: dict[str, float] = Field(default_factory=dict)
    l1: int = Field(default=336, ge=0)
    l2: int = Field(default=348, le=LIDAR_BEAMS - 1)
    r_l_cap: float = Field(default=3.0, gt=0)
    safety_distance: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _check_window_and_constants(self) -> "RewardSpec":
        if not self.l1 < self.l2:
            raise ValueError(f"l1 ({self.l1}) must be smaller than l2 ({self.l2})")
        unknown = set(self.constants) - set(DEFAULT_REWARD_CONSTANTS[self.variant])
        if unknown:
            raise ValueError(f"unknown constants for variant '{self.variant.value}': {sorted(unknown)}")
        return self

    def constant(self, name: str) -> float:
        """Return a reward constant, with overrides taking precedence over the defaults."""
        return self.constants.get(name, DEFAULT_REWARD_CONSTANTS[self.variant][name])


class AgentKind(str, Enum):
    SAC = "sac"
    TD3 = "td3"


class AgentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: AgentKind = AgentKind.SAC
    hidden_sizes: list[int] = Field(default_factory=lambda: [512, 512, 512], min_length=1)
    learning_rate: float = Field(default=3e-4, gt=0)
    batch_size: int = Field(default=256, ge=1)
    gamma: float = Field(default=0.99, gt=0, le=1)
    tau: float = Field(default=0.005, gt=0, le=1)
    buffer_capacity: int = Field(default=1_000_000, ge=1)
    warmup_steps: int = Field(default=10_000, ge=0)
    # SAC
    initial_alpha: float = Field(default=0.2, gt=0)
    auto_alpha: bool = True
    target_entropy: float = -2.0
    log_std_min: float = -20.0
    log_std_max: float = 2.0
    # TD3
    policy_noise: float = Field(default=0.2, ge=0)
    noise_clip: float = Field(default=0.5, ge=0)
    policy_delay: int = Field(default=2, ge=1)
    explore_noise: float = Field(default=0.1, ge=0)
    # n-step aggregation; None selects the per-algorithm default
    nstep: Optional[bool] = None
    nstep_window: int = Field(default=10, ge=1)

    @field_validator("hidden_sizes")
    @classmethod
    def _positive_sizes(cls, value: list[int]) -> list[int]:
        if any(size < 1 for size in value):
            raise ValueError("hidden layer sizes must be positive")
        return value

    @model_validator(mode="after")
    def _check_log_std_range(self) -> "AgentConfig":
        if not self.log_std_min < self.log_std_max:
            raise ValueError("log_std_min must be smaller than log_std_max")
        return self

    @property
    def nstep_enabled(self) -> bool:
        if self.nstep is None:
            return self.kind == AgentKind.TD3
        return self.nstep


class TrainConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    episodes: int = Field(default=20_000, ge=1)
    episode_timeout: Optional[int] = Field(default=None, ge=1)
    map_rotation_period: int = Field(default=500, ge=1)
    map_list: list[str] = Field(default_factory=lambda: ["train-12", "train-20", "train-40"], min_length=1)
    roster: Optional[Path] = None
    seed: int = 0
    checkpoint_period: int = Field(default=1000, ge=1)
    log_window: int = Field(default=100, ge=1)
    min_start_goal_separation: float = Field(default=2.0, ge=0)
    spawn_clearance: float = Field(default=0.3, ge=0)
    max_hours: Optional[float] = Field(default=None, gt=0)


class EvalConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    checkpoint: Optional[Path] = None
    map: str = "test-40a"
    roster: Optional[Path] = None
    roster_size: int = Field(default=15, ge=1)
    trials: int = Field(default=500, ge=1)
    eval_timeout: Optional[int] = Field(default=None, ge=1)
    deterministic_policy: bool = True
    seed: int = 0
    spawn_clearance: float = Field(default=0.3, ge=0)


class NavforgeConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    sim: SimConfig = Field(default_factory=SimConfig)
    reward: RewardSpec = Field(default_factory=RewardSpec)
    agent: AgentConfig = Field(default_factory=AgentConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    eval: EvalConfig = Field(default_factory=EvalConfig)

    @property
    def train_timeout(self) -> int:
        return self.train.episode_timeout or self.sim.train_timeout

    @property
    def eval_timeout(self) -> int:
        return self.eval.eval_timeout or self.sim.eval_timeout


def _apply_seed_override(config_data: dict) -> dict:
    seed = os.environ.get(SEED_ENV_VARIABLE)
    if seed is None:
        return config_data
    try:
        seed_value = int(seed)
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV_VARIABLE} must be an integer, got '{seed}'") from exc
    logger.info(f"Seed overridden by {SEED_ENV_VARIABLE}={seed_value}")
    for section in ("train", "eval"):
        config_data.setdefault(section, {})["seed"] = seed_value
    return config_data


def build_configuration(config_data: dict, source: str = "<memory>") -> NavforgeConfig:
    """Validate a configuration mapping, applying the seed environment override.

    :param dict config_data: Parsed configuration sections.
    :param str source: Name used in error messages.
    :returns: A validated configuration model.
    :raises ConfigError: If validation fails.
    """
    config_data = _apply_seed_override(copy.deepcopy(dict(config_data)))
    try:
        return NavforgeConfig.model_validate(config_data)
    except ValidationError as exc:
        prefix = f"Invalid navforge configuration in '{source}'"
        raise ConfigError(prefix + f": {exc}") from exc


def load_configuration(config_file: str | Path | None) -> NavforgeConfig:
    """Load and validate a navforge TOML configuration file.

    Args:
        config_file: Path to a TOML configuration file, or None for defaults.

    Returns:
        A validated Pydantic model.

    Raises:
        ConfigError: If the file cannot be parsed or validation fails.
    """
    if config_file is None:
        return build_configuration({})

    logger.info(f"Loading configuration from {config_file}")

    with open(config_file, "rb") as f:
        try:
            config_data = tomllib.load(f)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"Invalid navforge configuration in '{config_file}': {exc}") from exc

    return build_configuration(config_data, source=str(config_file))
