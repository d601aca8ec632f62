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
"""Command-line surface.

Subcommands::

    navforge train [CONFIG] [--seed N] [--out DIR] [--resume]
    navforge eval [--config FILE] --checkpoint FILE [--map ID] [--roster FILE] [--trials N]
    navforge map-gen (--bundled ID | --seed N --size M --density D) --out FILE
    navforge raycast-test [--maps N] [--rays N] [--seed N]
    navforge plot --log [LABEL=]FILE ... [--window N] --out FILE
    navforge table REPORT ... [--csv FILE]

Exit codes: 0 success, 1 failed check or contract violation, 2 configuration
error, 3 divergence, 4 I/O error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import ValidationError

from score.navforge.config import NavforgeConfig, load_configuration
from score.navforge.core.sim.oracle import compare_with_oracle
from score.navforge.core.utils.utils import get_output_dir, padder
from score.navforge.core.worldmap.catalog import BUNDLED_MAPS, bundled_map, default_roster
from score.navforge.core.worldmap.generator import MapSpec, RoomStyle, generate_map
from score.navforge.core.worldmap.gridmap import write_map
from score.navforge.core.worldmap.roster import write_roster
from score.navforge.errors import ConfigError, NavforgeError
from score.navforge.evaluation.evaluate import ReportSummary, run_eval
from score.navforge.evaluation.plot import emit_reward_plot
from score.navforge.evaluation.report import emit_success_table
from score.navforge.harness.training import run_training
from score.navforge.harness.trainlog import TrainLog


logger = logging.getLogger(__name__)

LOG_FORMAT = "[%(asctime)s.%(msecs)03d] [%(levelname)-3s] [%(name)s] %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
RAYCAST_TOLERANCE = 2e-4
IO_ERROR_EXIT_CODE = 4


def _override(config: NavforgeConfig, section: str, updates: dict) -> NavforgeConfig:
    """Apply command-line values on top of a configuration section."""
    data = config.model_dump(mode="json")
    data[section].update({key: value for key, value in updates.items() if value is not None})
    try:
        return NavforgeConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"Invalid command-line override of [{section}]: {exc}") from exc


def _train(args) -> int:
    config = _override(load_configuration(args.config), "train", {"seed": args.seed, "episodes": args.episodes})
    output_dir = get_output_dir(args.out)
    result = run_training(config, output_dir, resume=args.resume)
    print(f"{result.status}: {result.episodes_completed} episodes, checkpoint {result.checkpoint}")
    return 0


def _eval(args) -> int:
    updates = {
        "checkpoint": args.checkpoint,
        "map": args.map,
        "roster": args.roster,
        "trials": args.trials,
        "seed": args.seed,
        "deterministic_policy": False if args.stochastic else None,
    }
    config = _override(load_configuration(args.config), "eval", updates)
    output_dir = get_output_dir(args.out)
    report = run_eval(
        config, label=args.label, output_dir=output_dir, trajectory_dir=args.trajectories, coverage_dir=args.coverage
    )
    ci = report.confidence_intervals()
    print(
        f"{report.label} on {report.map_id}: success {report.success_rate:.1%} "
        f"(90% CI {ci[0.90].normal.as_percent()}, 99% CI {ci[0.99].normal.as_percent()}), "
        f"collision {report.collision_rate:.1%}, timeout {report.timeout_rate:.1%}"
    )
    return 0


def _map_gen(args) -> int:
    if args.bundled:
        map_id, gridmap = args.bundled, bundled_map(args.bundled)
    else:
        if args.size is None:
            raise ConfigError("map-gen needs --size unless --bundled is given")
        spec = MapSpec(
            size_m=args.size,
            obstacle_density=args.density,
            room_style=RoomStyle(args.style),
            resolution=args.resolution,
            clearance_m=args.clearance,
        )
        map_id, gridmap = Path(args.out).stem, generate_map(args.seed, spec)
    write_map(gridmap, args.out)
    print(f"{map_id}: {gridmap!r} written to {args.out}")
    if args.roster_out:
        write_roster(default_roster(map_id, gridmap), args.roster_out)
    return 0


def _raycast_test(args) -> int:
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for index in range(args.maps):
        seed = int(rng.integers(2**31))
        spec = MapSpec(size_m=args.size, obstacle_density=0.2, room_style=RoomStyle(("open", "rooms")[index % 2]))
        gridmap = generate_map(seed, spec)
        comparison = compare_with_oracle(gridmap, rng, args.rays, args.max_range)
        logger.info(f"Map {index} (seed {seed}): max error {comparison.max_error:.3e} m over {args.rays} rays")
        worst = max(worst, comparison.max_error)
    passed = worst <= args.tolerance
    print(f"max error {worst:.3e} m over {args.maps * args.rays} rays ({'OK' if passed else 'FAILED'})")
    return 0 if passed else 1


def _parse_log_argument(value: str) -> tuple[str, Path]:
    if "=" in value:
        label, path = value.split("=", 1)
        return label, Path(path)
    path = Path(value)
    return path.parent.name or path.stem, path


def _plot(args) -> int:
    logs = {}
    for value in args.log:
        label, path = _parse_log_argument(value)
        logs[label] = TrainLog.read_csv(path)
    emit_reward_plot(logs, args.window, args.out)
    print(f"{len(logs)} curves written to {args.out}")
    return 0


def _table(args) -> int:
    reports = [ReportSummary.read(path) for path in args.reports]
    table = emit_success_table(reports, csv_path=args.csv)
    print(table.to_text(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="navforge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    train = commands.add_parser("train", help="Train an agent")
    train.add_argument("config", nargs="?", help="TOML configuration file")
    train.add_argument("--seed", type=int, help="Override train.seed")
    train.add_argument("--episodes", type=int, help="Override train.episodes")
    train.add_argument("--out", help="Output directory")
    train.add_argument("--resume", action="store_true", help="Continue from the resume state in --out")
    train.set_defaults(handler=_train)

    evaluate = commands.add_parser("eval", help="Evaluate a checkpoint on a roster")
    evaluate.add_argument("--config", help="TOML configuration file")
    evaluate.add_argument("--checkpoint", help="Training checkpoint")
    evaluate.add_argument("--map", help="Bundled map id or .gridmap file")
    evaluate.add_argument("--roster", help="Roster file; the map's default roster when omitted")
    evaluate.add_argument("--trials", type=int)
    evaluate.add_argument("--seed", type=int)
    evaluate.add_argument("--stochastic", action="store_true", help="Sample actions instead of using the mean")
    evaluate.add_argument("--label", help="Method label for success tables")
    evaluate.add_argument("--out", help="Output directory")
    evaluate.add_argument("--trajectories", help="Directory receiving one trajectory CSV per trial")
    evaluate.add_argument("--coverage", help="Directory receiving one PGM image of the seen cells per trial")
    evaluate.set_defaults(handler=_eval)

    map_gen = commands.add_parser("map-gen", help="Write a generated or bundled map")
    map_gen.add_argument("--bundled", choices=sorted(BUNDLED_MAPS), help="Copy a bundled map and its roster")
    map_gen.add_argument("--seed", type=int, default=0)
    map_gen.add_argument("--size", type=float, help="Side length in meters")
    map_gen.add_argument("--density", type=float, default=0.0)
    map_gen.add_argument("--style", choices=[style.value for style in RoomStyle], default=RoomStyle.OPEN.value)
    map_gen.add_argument("--resolution", type=float, default=0.1)
    map_gen.add_argument("--clearance", type=float, default=0.0)
    map_gen.add_argument("--out", required=True, help="Output .gridmap file")
    map_gen.add_argument("--roster-out", help="Also write the map's default roster")
    map_gen.set_defaults(handler=_map_gen)

    raycast = commands.add_parser("raycast-test", help="Compare the raycaster against a ray-marching oracle")
    raycast.add_argument("--maps", type=int, default=5)
    raycast.add_argument("--rays", type=int, default=200)
    raycast.add_argument("--seed", type=int, default=0)
    raycast.add_argument("--size", type=float, default=12.0)
    raycast.add_argument("--max-range", type=float, default=10.0)
    raycast.add_argument("--tolerance", type=float, default=RAYCAST_TOLERANCE)
    raycast.set_defaults(handler=_raycast_test)

    plot = commands.add_parser("plot", help="Plot moving-average returns of training logs")
    plot.add_argument("--log", action="append", required=True, help="[LABEL=]train_log.csv, repeatable")
    plot.add_argument("--window", type=int, default=100)
    plot.add_argument("--out", default="rewards.svg")
    plot.set_defaults(handler=_plot)

    table = commands.add_parser("table", help="Assemble evaluation reports into a success table")
    table.add_argument("reports", nargs="+", help="report.json files")
    table.add_argument("--csv", help="Also write the table as CSV")
    table.set_defaults(handler=_table)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO, format=LOG_FORMAT, datefmt=LOG_DATE_FORMAT
    )
    logger.debug(padder(f"navforge {args.command}"))
    try:
        return args.handler(args)
    except NavforgeError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return exc.exit_code
    except ValidationError as exc:
        logger.error(f"Invalid arguments: {exc}")
        return ConfigError.exit_code
    except OSError as exc:
        logger.error(f"I/O error: {exc}")
        return IO_ERROR_EXIT_CODE


if __name__ == "__main__":
    sys.exit(main())
