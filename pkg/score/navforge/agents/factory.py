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
import logging
from pathlib import Path

from score.navforge.agents.base import Agent, AgentStreams, Policy
from score.navforge.agents.sac import SacAgent
from score.navforge.agents.td3 import Td3Agent
from score.navforge.config import AgentConfig, AgentKind
from score.navforge.core.nn.checkpoint import load_checkpoint
from score.navforge.core.percept.observation import OBSERVATION_SIZE
from score.navforge.core.utils.seeding import SeedStreams
from score.navforge.errors import CheckpointError


logger = logging.getLogger(__name__)

AGENT_CLASSES: dict[AgentKind, type[Agent]] = {
    AgentKind.SAC: SacAgent,
    AgentKind.TD3: Td3Agent,
}


def agent_streams(streams: SeedStreams) -> AgentStreams:
    return AgentStreams(
        init=streams.init,
        action_noise=streams.action_noise,
        replay=streams.replay,
        update=streams.update,
    )


def make_agent(config: AgentConfig, streams: SeedStreams, obs_size: int = OBSERVATION_SIZE) -> Agent:
    agent = AGENT_CLASSES[config.kind](config, obs_size, agent_streams(streams))
    logger.info(
        f"Created {config.kind.value} agent with hidden layers {config.hidden_sizes}, "
        f"n-step {'on' if config.nstep_enabled else 'off'}"
    )
    return agent


def load_policy(path: str | Path, obs_size: int = OBSERVATION_SIZE) -> Policy:
    """Load the actor of a training checkpoint for evaluation.

    :raises CheckpointError: If the file is unreadable or the actor does not
        match the observation and action dimensions.
    """
    checkpoint = load_checkpoint(path)
    try:
        kind = AgentKind(checkpoint.meta.get("kind"))
    except ValueError as exc:
        raise CheckpointError(f"Checkpoint {path} does not name a known agent kind") from exc
    actor = checkpoint.nets.get("actor")
    if actor is None:
        raise CheckpointError(f"Checkpoint {path} holds no actor network")
    if actor.in_size != obs_size:
        raise CheckpointError(f"Checkpoint actor expects {actor.in_size} observation values, expected {obs_size}")
    log_std_range = checkpoint.meta.get("log_std_range", [-20.0, 2.0])
    return Policy(actor, kind, *log_std_range)
