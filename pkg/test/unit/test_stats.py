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

import pytest

from score.navforge.evaluation.stats import binomial_ci, normal_interval, wilson_interval, z_score
from score.navforge.errors import ContractError


def test_z_scores():
    assert z_score(0.90) == pytest.approx(1.644854, abs=1e-6)
    assert z_score(0.99) == pytest.approx(2.575829, abs=1e-6)


def test_normal_interval_of_182_out_of_200():
    interval = normal_interval(182, 200, 0.90)
    assert interval.lo == pytest.approx(0.8767, abs=1e-4)
    assert interval.hi == pytest.approx(0.9433, abs=1e-4)
    assert interval.as_percent() == "[87.7%, 94.3%]"


def test_normal_interval_of_a_fair_coin():
    interval = normal_interval(50, 100, 0.90)
    assert (interval.lo, interval.hi) == pytest.approx((0.418, 0.582), abs=5e-4)


def test_normal_interval_at_99_percent():
    assert normal_interval(153, 200, 0.99).as_percent() == "[68.8%, 84.2%]"


def test_wilson_interval_is_inside_unit_range_and_narrower_near_half():
    wilson = wilson_interval(50, 100, 0.90)
    normal = normal_interval(50, 100, 0.90)
    assert (wilson.lo, wilson.hi) == pytest.approx((0.4188, 0.5812), abs=1e-3)
    assert wilson.width < normal.width
    assert wilson.lo + wilson.hi == pytest.approx(1.0)


def test_zero_successes():
    ci = binomial_ci(0, 40, 0.90)
    assert (ci.normal.lo, ci.normal.hi) == (0.0, 0.0)
    assert ci.wilson.lo == pytest.approx(0.0, abs=1e-12)
    assert ci.wilson.hi > 0.0


def test_all_successes_stay_clipped():
    ci = binomial_ci(40, 40, 0.99)
    assert ci.normal.hi == 1.0
    assert ci.wilson.hi <= 1.0


def test_width_shrinks_like_inverse_square_root():
    narrow, wide = normal_interval(360, 400, 0.90), normal_interval(90, 100, 0.90)
    assert narrow.width / wide.width == pytest.approx(0.5)
    assert wide.width == pytest.approx(2 * z_score(0.90) * math.sqrt(0.9 * 0.1 / 100))


@pytest.mark.parametrize("successes, trials", [(0, 0), (5, 4), (-1, 10)])
def test_invalid_counts(successes, trials):
    with pytest.raises(ContractError):
        binomial_ci(successes, trials, 0.90)


@pytest.mark.parametrize("confidence", [0.0, 1.0, 1.5])
def test_invalid_confidence(confidence):
    with pytest.raises(ContractError, match="Confidence"):
        z_score(confidence)
