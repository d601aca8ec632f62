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
"""Moving-average reward curves as SVG with an exact CSV sidecar."""

import csv
import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from score.navforge.errors import ContractError  # noqa: E402
from score.navforge.harness.trainlog import TrainLog, moving_average  # noqa: E402


logger = logging.getLogger(__name__)

KIND_COLORS = {"td3": "tab:red", "sac": "tab:blue"}
LINE_STYLES = ("-", "--", ":", "-.")
SVG_HASH_SALT = "navforge"


def curve_color(label: str) -> str:
    lowered = label.lower()
    for kind, color in KIND_COLORS.items():
        if kind in lowered:
            return color
    return "tab:gray"


def moving_average_series(logs: dict[str, TrainLog], window: int) -> dict[str, list[float]]:
    """Moving average of each log's returns, keyed by label.

    :raises ContractError: If no logs are given or a log is empty.
    """
    if not logs:
        raise ContractError("A reward plot needs at least one training log")
    series = {}
    for label, log in logs.items():
        if not len(log):
            raise ContractError(f"Training log '{label}' is empty")
        series[label] = [float(v) for v in moving_average(log.returns, window)]
    return series


def write_series_csv(series: dict[str, list[float]], path: str | Path):
    labels = list(series)
    length = max(len(values) for values in series.values())
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["episode"] + labels)
        for i in range(length):
            writer.writerow([i] + [repr(series[label][i]) if i < len(series[label]) else "" for label in labels])


def read_series_csv(path: str | Path) -> dict[str, list[float]]:
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    labels = [name for name in rows[0] if name != "episode"] if rows else []
    return {label: [float(row[label]) for row in rows if row[label]] for label in labels}


def emit_reward_plot(logs: dict[str, TrainLog], window: int, svg_path: str | Path, csv_path: str | Path | None = None):
    """Plot moving-average returns of one or more training logs.

    Curves labelled with an agent kind take its color, TD3 red and SAC blue;
    several curves of the same kind are told apart by line style.

    :param dict logs: Training logs keyed by legend label.
    :param int window: Moving-average window in episodes.
    :param svg_path: Output vector graphic.
    :param csv_path: Sidecar with the plotted values, next to the SVG when omitted.
    :returns: The plotted series keyed by label.
    """
    series = moving_average_series(logs, window)
    svg_path = Path(svg_path)
    csv_path = Path(csv_path) if csv_path is not None else svg_path.with_suffix(".csv")

    plt.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    used: dict[str, int] = {}
    for label, values in series.items():
        color = curve_color(label)
        style = LINE_STYLES[used.get(color, 0) % len(LINE_STYLES)]
        used[color] = used.get(color, 0) + 1
        ax.plot(range(len(values)), values, color=color, linestyle=style, linewidth=1.2, label=label)
    ax.set_xlabel("episode")
    ax.set_ylabel(f"return (moving average, {window} episodes)")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(svg_path, format="svg", metadata={"Date": None})
    plt.close(fig)

    write_series_csv(series, csv_path)
    logger.info(f"Reward plot with {len(series)} curves written to {svg_path}")
    return series
