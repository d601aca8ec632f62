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
import numpy as np
import pytest

from score.navforge.core.nn.adam import AdamState, adam_step
from score.navforge.core.nn.checkpoint import (
    Checkpoint,
    deserialize,
    load_checkpoint,
    manifest_diff,
    save_checkpoint,
    serialize,
)
from score.navforge.core.nn.dense import Activation, DenseNet
from score.navforge.errors import CheckpointError


@pytest.fixture
def checkpoint(rng):
    actor = DenseNet.build([4, 6, 2], rng, output_activation=Activation.TANH)
    critic = DenseNet.build([6, 5, 1], rng)
    state = AdamState.for_parameters(critic.parameters(), learning_rate=1e-3, name="critic")
    adam_step(critic.parameters(), [np.ones_like(p) for p in critic.parameters()], state)
    return Checkpoint(
        nets={"actor": actor, "critic": critic},
        optimizers={"critic": state},
        arrays={"log_alpha": np.array([-1.6])},
        meta={"kind": "sac"},
    )


def test_round_trip_preserves_everything(checkpoint, tmp_path):
    path = tmp_path / "agent.navf"
    save_checkpoint(checkpoint, path)
    loaded = load_checkpoint(path, checkpoint.manifest())

    assert loaded.meta == {"kind": "sac"}
    for name, net in checkpoint.nets.items():
        assert loaded.nets[name].activations == net.activations
        assert all(np.array_equal(a, b) for a, b in zip(loaded.nets[name].parameters(), net.parameters()))
    loaded_state, state = loaded.optimizers["critic"], checkpoint.optimizers["critic"]
    assert (loaded_state.step, loaded_state.learning_rate) == (1, 1e-3)
    for a, b in zip(loaded_state.first_moment + loaded_state.second_moment, state.first_moment + state.second_moment):
        assert np.array_equal(a, b)
    assert np.array_equal(loaded.arrays["log_alpha"], [-1.6])
    assert serialize(loaded) == serialize(checkpoint)


def test_save_creates_missing_directories(checkpoint, tmp_path):
    path = tmp_path / "checkpoints" / "checkpoint-000010.navf"
    save_checkpoint(checkpoint, path)
    assert path.exists()
    assert not path.with_suffix(".navf.tmp").exists()


@pytest.mark.parametrize("cut", [3, 20, 100, 1])
def test_truncation_is_detected(checkpoint, cut):
    data = serialize(checkpoint)
    with pytest.raises(CheckpointError):
        deserialize(data[:-cut])


def test_flipped_payload_byte_fails_the_crc(checkpoint):
    data = bytearray(serialize(checkpoint))
    data[-20] ^= 0xFF
    with pytest.raises(CheckpointError, match="CRC"):
        deserialize(bytes(data))


def test_bad_magic_and_version(checkpoint):
    data = serialize(checkpoint)
    with pytest.raises(CheckpointError, match="magic"):
        deserialize(b"XXXX" + data[4:])
    with pytest.raises(CheckpointError, match="version"):
        deserialize(data[:4] + b"\x09\x00" + data[6:])


def test_layout_mismatch_lists_differences(checkpoint):
    expected = checkpoint.manifest()
    expected["nets"]["critic"][0]["out"] = 512
    expected["arrays"]["extra"] = [2]
    with pytest.raises(CheckpointError, match="critic") as info:
        deserialize(serialize(checkpoint), expected)
    assert "arrays.extra: missing in checkpoint" in str(info.value)


def test_manifest_diff_ignores_meta(checkpoint):
    other = checkpoint.manifest()
    other["meta"] = {"kind": "td3"}
    assert manifest_diff(checkpoint.manifest(), other) == []
