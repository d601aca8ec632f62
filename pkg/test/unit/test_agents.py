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
import math

import numpy as np
import pytest
from scipy.special import logit

from score.navforge.agents.base import ACTION_HIGH, ACTION_LOW
from score.navforge.agents.factory import load_policy, make_agent
from score.navforge.agents.replay import Transition
from score.navforge.agents.squash import sample_squashed
from score.navforge.config import AgentConfig, AgentKind
from score.navforge.core.percept.observation import OBSERVATION_SIZE
from score.navforge.core.utils.seeding import SeedStreams
from score.navforge.errors import CheckpointError, DivergenceError


def _config(kind: AgentKind, **overrides) -> AgentConfig:
    values = {"kind": kind, "hidden_sizes": [16, 16], "batch_size": 8, "buffer_capacity": 500, "warmup_steps": 0}
    return AgentConfig(**(values | overrides))


def _fill(agent, count: int, seed: int = 3):
    rng = np.random.default_rng(seed)
    obs = rng.uniform(0.0, 1.0, OBSERVATION_SIZE)
    for k in range(count):
        next_obs = rng.uniform(0.0, 1.0, OBSERVATION_SIZE)
        action = rng.uniform(ACTION_LOW, ACTION_HIGH)
        ended = k == count - 1
        agent.observe(Transition(obs, action, float(rng.normal()), next_obs, ended), ended)
        obs = next_obs


def _parameters(net) -> list[np.ndarray]:
    return [p.copy() for p in net.parameters()]


def _same(a: list[np.ndarray], b: list[np.ndarray]) -> bool:
    return all(np.array_equal(x, y) for x, y in zip(a, b))


@pytest.mark.parametrize("kind", list(AgentKind))
def test_actions_are_bounded_and_deterministic_without_exploration(kind):
    agent = make_agent(_config(kind), SeedStreams(1))
    obs = np.linspace(0.0, 1.0, OBSERVATION_SIZE)
    for _ in range(20):
        action = agent.act(obs, explore=True)
        assert action.shape == (2,)
        assert np.all(action >= ACTION_LOW) and np.all(action <= ACTION_HIGH)
    assert np.array_equal(agent.act(obs, explore=False), agent.act(obs, explore=False))


@pytest.mark.parametrize("kind", list(AgentKind))
def test_update_waits_for_a_full_batch(kind):
    agent = make_agent(_config(kind, nstep=False), SeedStreams(1))
    _fill(agent, 5)
    assert agent.update(0) is None


def test_sac_update_moves_critics_actor_and_targets():
    agent = make_agent(_config(AgentKind.SAC), SeedStreams(2))
    _fill(agent, 40)
    critic, target, actor = _parameters(agent.critic1), _parameters(agent.critic1_target), _parameters(agent.actor)
    alpha = agent.alpha

    report = agent.update(0)
    assert report is not None and report.finite
    assert report.buffer_size == 40
    assert not _same(critic, agent.critic1.parameters())
    assert not _same(target, agent.critic1_target.parameters())
    assert not _same(actor, agent.actor.parameters())
    assert agent.alpha != alpha


def test_sac_updates_are_reproducible():
    reports = []
    for _ in range(2):
        agent = make_agent(_config(AgentKind.SAC), SeedStreams(7))
        _fill(agent, 30)
        reports.append([agent.update(i) for i in range(3)])
    assert reports[0] == reports[1]


def test_td3_policy_delay():
    agent = make_agent(_config(AgentKind.TD3, nstep=False), SeedStreams(4))
    _fill(agent, 40)

    actor, actor_target = _parameters(agent.actor), _parameters(agent.actor_target)
    critic_target = _parameters(agent.critic1_target)
    delayed = agent.update(1)
    assert math.isnan(delayed.actor)
    assert _same(actor, agent.actor.parameters())
    assert _same(actor_target, agent.actor_target.parameters())
    assert _same(critic_target, agent.critic1_target.parameters())

    report = agent.update(2)
    assert math.isfinite(report.actor)
    assert not _same(actor, agent.actor.parameters())
    assert not _same(actor_target, agent.actor_target.parameters())


def test_td3_aggregates_nstep_transitions_by_default():
    agent = make_agent(_config(AgentKind.TD3), SeedStreams(4))
    assert agent.nstep is not None and agent.nstep.window == 10
    _fill(agent, 25)
    assert len(agent.buffer) == 25
    horizons = agent.buffer.gather(agent.buffer.oldest_first()).horizon
    assert list(horizons[:16]) == [10] * 16
    assert list(horizons[16:]) == [9, 8, 7, 6, 5, 4, 3, 2, 1]


def test_sac_stores_single_steps_by_default():
    agent = make_agent(_config(AgentKind.SAC), SeedStreams(4))
    assert agent.nstep is None
    _fill(agent, 12)
    assert set(agent.buffer.gather(agent.buffer.oldest_first()).horizon) == {1}


@pytest.mark.parametrize("kind", list(AgentKind))
def test_checkpoint_round_trip(kind, tmp_path):
    agent = make_agent(_config(kind, nstep=False), SeedStreams(5))
    _fill(agent, 20)
    agent.update(0)
    path = tmp_path / "agent.navf"
    agent.save(path)

    other = make_agent(_config(kind, nstep=False), SeedStreams(99))
    other.load(path)
    obs = np.full(OBSERVATION_SIZE, 0.3)
    assert np.array_equal(other.act(obs, explore=False), agent.act(obs, explore=False))
    assert other.update_count == 1

    policy = load_policy(path)
    assert policy.kind is kind
    assert np.array_equal(policy.act(obs), agent.act(obs, explore=False))


def test_loading_another_kind_fails(tmp_path):
    path = tmp_path / "sac.navf"
    make_agent(_config(AgentKind.SAC), SeedStreams(5)).save(path)
    with pytest.raises(CheckpointError):
        make_agent(_config(AgentKind.TD3), SeedStreams(5)).load(path)


def test_loading_another_architecture_fails(tmp_path):
    path = tmp_path / "sac.navf"
    make_agent(_config(AgentKind.SAC), SeedStreams(5)).save(path)
    with pytest.raises(CheckpointError, match="layout mismatch"):
        make_agent(_config(AgentKind.SAC, hidden_sizes=[8, 8]), SeedStreams(5)).load(path)


def test_policy_rejects_other_observation_sizes(tmp_path):
    path = tmp_path / "sac.navf"
    make_agent(_config(AgentKind.SAC), SeedStreams(5), obs_size=10).save(path)
    with pytest.raises(CheckpointError, match="observation"):
        load_policy(path)


def test_exploration_samples_center_on_the_actor_mean():
    config = _config(AgentKind.SAC)
    agent = make_agent(config, SeedStreams(1))
    obs = np.linspace(0.0, 1.0, OBSERVATION_SIZE)
    head = agent.actor.predict(obs)
    mean_action = sample_squashed(head, np.zeros(2), config.log_std_min, config.log_std_max)

    actions = np.array([agent.act(obs, explore=True) for _ in range(10_000)])
    pre_squash = np.column_stack([logit(actions[:, 0]), np.arctanh(actions[:, 1])])

    standard_error = mean_action.std / math.sqrt(len(actions))
    assert np.all(np.abs(pre_squash.mean(axis=0) - mean_action.mean) < 3.0 * standard_error)
    assert pre_squash.std(axis=0) == pytest.approx(mean_action.std, rel=0.05)


def test_stochastic_policy_samples_with_a_generator(tmp_path):
    path = tmp_path / "sac.navf"
    make_agent(_config(AgentKind.SAC), SeedStreams(5)).save(path)
    policy = load_policy(path)
    obs = np.full(OBSERVATION_SIZE, 0.5)
    sampled = policy.act(obs, np.random.default_rng(0))
    assert np.array_equal(sampled, policy.act(obs, np.random.default_rng(0)))
    assert not np.array_equal(sampled, policy.act(obs))


def test_non_finite_actor_output_diverges():
    agent = make_agent(_config(AgentKind.SAC), SeedStreams(5))
    agent.actor.layers[-1].bias[:] = np.nan
    with pytest.raises(DivergenceError, match="actor output"):
        agent.act(np.zeros(OBSERVATION_SIZE), explore=False)
