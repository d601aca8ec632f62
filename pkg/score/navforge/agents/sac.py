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
"""Soft actor-critic with twin critics and automatic temperature tuning."""

import logging
import math
from typing import Optional

import numpy as np

from score.navforge.agents.base import Agent, AgentStreams, Policy
from score.navforge.agents.losses import (
    LossReport,
    alpha_loss_and_grad,
    critic_input,
    critic_loss_and_grads,
    sac_actor_loss_and_grads,
    sac_target,
)
from score.navforge.agents.squash import check_finite, sample_squashed
from score.navforge.config import AgentConfig, AgentKind
from score.navforge.core.nn.adam import AdamState, adam_step
from score.navforge.core.nn.checkpoint import Checkpoint
from score.navforge.core.nn.dense import DenseNet, soft_update
from score.navforge.core.percept.observation import ACTION_SIZE
from score.navforge.errors import DivergenceError


logger = logging.getLogger(__name__)

ACTOR_FINAL_SCALE = 0.003


class SacAgent(Agent):
    kind = AgentKind.SAC

    def __init__(self, config: AgentConfig, obs_size: int, streams: AgentStreams):
        super().__init__(config, obs_size, streams)
        rng = streams.init
        self.actor = DenseNet.build(self._sizes(obs_size, 2 * ACTION_SIZE), rng, final_scale=ACTOR_FINAL_SCALE)
        self.critic1 = DenseNet.build(self._sizes(obs_size + ACTION_SIZE, 1), rng)
        self.critic2 = DenseNet.build(self._sizes(obs_size + ACTION_SIZE, 1), rng)
        self.critic1_target = self.critic1.copy()
        self.critic2_target = self.critic2.copy()
        self.log_alpha = np.array([math.log(config.initial_alpha)])

        lr = config.learning_rate
        self.actor_opt = AdamState.for_parameters(self.actor.parameters(), lr, "actor")
        self.critic1_opt = AdamState.for_parameters(self.critic1.parameters(), lr, "critic1")
        self.critic2_opt = AdamState.for_parameters(self.critic2.parameters(), lr, "critic2")
        self.alpha_opt = AdamState.for_parameters([self.log_alpha], lr, "alpha")

    @property
    def alpha(self) -> float:
        return float(np.exp(self.log_alpha[0]))

    def act(self, obs: np.ndarray, explore: bool) -> np.ndarray:
        head = check_finite(self.actor.predict(obs), "actor output")
        eps = self.streams.action_noise.standard_normal(ACTION_SIZE) if explore else np.zeros(ACTION_SIZE)
        return sample_squashed(head, eps, self.config.log_std_min, self.config.log_std_max).action

    def bootstrap_targets(self, batch) -> np.ndarray:
        cfg = self.config
        head = check_finite(self.actor.predict(batch.next_obs), "actor output")
        eps = self.streams.update.standard_normal((len(batch), ACTION_SIZE))
        sample = sample_squashed(head, eps, cfg.log_std_min, cfg.log_std_max)
        inputs = critic_input(batch.next_obs, sample.action)
        q1_next = self.critic1_target.predict(inputs)[:, 0]
        q2_next = self.critic2_target.predict(inputs)[:, 0]
        discount = cfg.gamma ** batch.horizon.astype(np.float64)
        return sac_target(batch.reward, batch.done, discount, q1_next, q2_next, self.alpha * sample.log_prob)

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

        eps = self.streams.update.standard_normal((len(batch), ACTION_SIZE))
        actor_loss, grads, sample = sac_actor_loss_and_grads(
            self.actor, self.critic1, self.critic2, batch.obs, eps, self.alpha, cfg.log_std_min, cfg.log_std_max
        )
        adam_step(self.actor.parameters(), grads, self.actor_opt)
        self.actor.mark_updated()

        if cfg.auto_alpha:
            _, grad = alpha_loss_and_grad(float(self.log_alpha[0]), sample.log_prob, cfg.target_entropy)
            adam_step([self.log_alpha], [np.array([grad])], self.alpha_opt)

        soft_update(self.critic1_target, self.critic1, cfg.tau)
        soft_update(self.critic2_target, self.critic2, cfg.tau)
        self.update_count += 1

        report = LossReport(step_index, losses[0], losses[1], actor_loss, self.alpha, len(self.buffer))
        if not report.finite:
            raise DivergenceError(f"Non-finite SAC loss at update {step_index}: {report}")
        return report

    def policy(self) -> Policy:
        return Policy(self.actor, self.kind, self.config.log_std_min, self.config.log_std_max)

    def to_checkpoint(self) -> Checkpoint:
        return Checkpoint(
            nets={
                "actor": self.actor,
                "critic1": self.critic1,
                "critic2": self.critic2,
                "critic1_target": self.critic1_target,
                "critic2_target": self.critic2_target,
            },
            optimizers={
                "actor": self.actor_opt,
                "critic1": self.critic1_opt,
                "critic2": self.critic2_opt,
                "alpha": self.alpha_opt,
            },
            arrays={"log_alpha": self.log_alpha},
            meta=self._meta(),
        )

    def restore(self, checkpoint: Checkpoint):
        nets = checkpoint.nets
        self.actor = nets["actor"]
        self.critic1, self.critic2 = nets["critic1"], nets["critic2"]
        self.critic1_target, self.critic2_target = nets["critic1_target"], nets["critic2_target"]
        opts = checkpoint.optimizers
        self.actor_opt, self.critic1_opt, self.critic2_opt = opts["actor"], opts["critic1"], opts["critic2"]
        self.alpha_opt = opts["alpha"]
        self.log_alpha = np.array(checkpoint.arrays["log_alpha"], dtype=np.float64).reshape(1)
