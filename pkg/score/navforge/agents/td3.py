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
"""Twin delayed deterministic policy gradient."""

import logging
from typing import Optional

import numpy as np

from score.navforge.agents.base import Agent, AgentStreams, Policy, clip_to_bounds
from score.navforge.agents.losses import (
    LossReport,
    critic_input,
    critic_loss_and_grads,
    td3_actor_loss_and_grads,
    td3_target,
)
from score.navforge.agents.squash import check_finite, squash
from score.navforge.config import AgentConfig, AgentKind
from score.navforge.core.nn.adam import AdamState, adam_step
from score.navforge.core.nn.checkpoint import Checkpoint
from score.navforge.core.nn.dense import DenseNet, soft_update
from score.navforge.core.percept.observation import ACTION_SIZE
from score.navforge.errors import DivergenceError


logger = logging.getLogger(__name__)

ACTOR_FINAL_SCALE = 0.003


def clipped_noise(raw: np.ndarray, noise_clip: float) -> np.ndarray:
    return np.clip(raw, -noise_clip, noise_clip)


class Td3Agent(Agent):
    kind = AgentKind.TD3

    def __init__(self, config: AgentConfig, obs_size: int, streams: AgentStreams):
        super().__init__(config, obs_size, streams)
        rng = streams.init
        self.actor = DenseNet.build(self._sizes(obs_size, ACTION_SIZE), rng, final_scale=ACTOR_FINAL_SCALE)
        self.critic1 = DenseNet.build(self._sizes(obs_size + ACTION_SIZE, 1), rng)
        self.critic2 = DenseNet.build(self._sizes(obs_size + ACTION_SIZE, 1), rng)
        self.actor_target = self.actor.copy()
        self.critic1_target = self.critic1.copy()
        self.critic2_target = self.critic2.copy()

        lr = config.learning_rate
        self.actor_opt = AdamState.for_parameters(self.actor.parameters(), lr, "actor")
        self.critic1_opt = AdamState.for_parameters(self.critic1.parameters(), lr, "critic1")
        self.critic2_opt = AdamState.for_parameters(self.critic2.parameters(), lr, "critic2")

    def act(self, obs: np.ndarray, explore: bool) -> np.ndarray:
        action = squash(check_finite(self.actor.predict(obs), "actor output"))
        if explore:
            noise = self.streams.action_noise.normal(0.0, self.config.explore_noise, ACTION_SIZE)
            action = clip_to_bounds(action + noise)
        return action

    def bootstrap_targets(self, batch) -> np.ndarray:
        cfg = self.config
        raw = self.streams.update.normal(0.0, cfg.policy_noise, (len(batch), ACTION_SIZE))
        next_action = squash(check_finite(self.actor_target.predict(batch.next_obs), "target actor output"))
        next_action = clip_to_bounds(next_action + clipped_noise(raw, cfg.noise_clip))
        inputs = critic_input(batch.next_obs, next_action)
        q1_next = self.critic1_target.predict(inputs)[:, 0]
        q2_next = self.critic2_target.predict(inputs)[:, 0]
        discount = cfg.gamma ** batch.horizon.astype(np.float64)
        return td3_target(batch.reward, batch.done, discount, q1_next, q2_next)

    def update(self, step_index: int) -> Optional[LossReport]:
        cfg = self.config
        if len(self.buffer) < cfg.batch_size:
            logger.debug(f"Update {step_index} skipped: {len(self.buffer)} transitions buffered")
            return None
        batch = self.buffer.sample(cfg.batch_size, self.streams.replay)
        target = self.bootstrap_targets(batch)

        losses = []
        for critic, opt in ((self.critic1, self.critic1_opt), (self.critic2, self.critic2_opt)):
            loss, grads = critic_loss_and_grads(critic, batch.obs, batch.action, target)
            adam_step(critic.parameters(), grads, opt)
            critic.mark_updated()
            losses.append(loss)

        actor_loss = float("nan")
        if step_index % cfg.policy_delay == 0:
            actor_loss, grads = td3_actor_loss_and_grads(self.actor, self.critic1, batch.obs)
            adam_step(self.actor.parameters(), grads, self.actor_opt)
            self.actor.mark_updated()
            soft_update(self.actor_target, self.actor, cfg.tau)
            soft_update(self.critic1_target, self.critic1, cfg.tau)
            soft_update(self.critic2_target, self.critic2, cfg.tau)
        self.update_count += 1

        report = LossReport(step_index, losses[0], losses[1], actor_loss, 0.0, len(self.buffer))
        if not report.finite:
            raise DivergenceError(f"Non-finite TD3 loss at update {step_index}: {report}")
        return report

    def policy(self) -> Policy:
        return Policy(self.actor, self.kind)

    def to_checkpoint(self) -> Checkpoint:
        return Checkpoint(
            nets={
                "actor": self.actor,
                "actor_target": self.actor_target,
                "critic1": self.critic1,
                "critic2": self.critic2,
                "critic1_target": self.critic1_target,
                "critic2_target": self.critic2_target,
            },
            optimizers={"actor": self.actor_opt, "critic1": self.critic1_opt, "critic2": self.critic2_opt},
            meta=self._meta(),
        )

    def restore(self, checkpoint: Checkpoint):
        nets = checkpoint.nets
        self.actor, self.actor_target = nets["actor"], nets["actor_target"]
        self.critic1, self.critic2 = nets["critic1"], nets["critic2"]
        self.critic1_target, self.critic2_target = nets["critic1_target"], nets["critic2_target"]
        opts = checkpoint.optimizers
        self.actor_opt, self.critic1_opt, self.critic2_opt = opts["actor"], opts["critic1"], opts["critic2"]
