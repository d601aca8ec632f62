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
"""Exception hierarchy shared by all navforge modules.

Each class carries the process exit code the command-line surface reports
when the exception escapes a subcommand.
"""


class NavforgeError(Exception):
    exit_code = 1


class ConfigError(NavforgeError, ValueError):
    """Invalid configuration, unknown map reference or infeasible roster."""

    exit_code = 2


class MapParseError(ConfigError):
    """Malformed map, roster or success-table text."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ContractError(NavforgeError, ValueError):
    """An operation was called with arguments violating its preconditions."""

    exit_code = 1


class MapGenerationError(NavforgeError, RuntimeError):
    exit_code = 2


class SamplingError(NavforgeError, RuntimeError):
    exit_code = 2


class DivergenceError(NavforgeError, RuntimeError):
    """Non-finite losses, gradients or network outputs."""

    exit_code = 3


class CheckpointError(NavforgeError, IOError):
    """Checkpoint bytes are truncated, corrupted or do not match the expected layout."""

    exit_code = 4
