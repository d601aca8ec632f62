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
"""Binomial confidence intervals for success rates."""

import logging
import math
from dataclasses import dataclass

from scipy import stats

from score.navforge.errors import ContractError


logger = logging.getLogger(__name__)

REPORT_CONFIDENCES = (0.90, 0.99)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def as_percent(self) -> str:
        return f"[{100.0 * self.lo:.1f}%, {100.0 * self.hi:.1f}%]"


@dataclass(frozen=True)
class BinomialCI:
    confidence: float
    normal: Interval
    wilson: Interval


def z_score(confidence: float) -> float:
    """Two-sided standard normal quantile, 1.6449 for 90%."""
    if not 0.0 < confidence < 1.0:
        raise ContractError(f"Confidence level must lie in (0, 1), got {confidence}")
    return float(stats.norm.ppf(0.5 + confidence / 2.0))


def _check_counts(successes: int, trials: int):
    if trials <= 0:
        raise ContractError(f"A confidence interval needs at least one trial, got {trials}")
    if not 0 <= successes <= trials:
        raise ContractError(f"Successes must lie in [0, {trials}], got {successes}")


def normal_interval(successes: int, trials: int, confidence: float) -> Interval:
    """``p +- z * sqrt(p (1 - p) / n)`` clipped to ``[0, 1]``."""
    _check_counts(successes, trials)
    p = successes / trials
    half = z_score(confidence) * math.sqrt(p * (1.0 - p) / trials)
    return Interval(max(0.0, p - half), min(1.0, p + half))


def wilson_interval(successes: int, trials: int, confidence: float) -> Interval:
    _check_counts(successes, trials)
    z = z_score(confidence)
    p = successes / trials
    z2n = z * z / trials
    center = (p + z2n / 2.0) / (1.0 + z2n)
    half = z / (1.0 + z2n) * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials))
    return Interval(max(0.0, center - half), min(1.0, center + half))


def binomial_ci(successes: int, trials: int, confidence: float) -> BinomialCI:
    """Normal-approximation and Wilson intervals for a success count.

    :param int successes: Number of successful trials.
    :param int trials: Total number of trials, at least one.
    :param float confidence: Two-sided level in ``(0, 1)``.
    :raises ContractError: On zero trials or counts out of range.
    """
    return BinomialCI(
        confidence=confidence,
        normal=normal_interval(successes, trials, confidence),
        wilson=wilson_interval(successes, trials, confidence),
    )
