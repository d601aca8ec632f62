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
import hashlib
import logging
import os
from pathlib import Path


CONSOLE_WIDTH = 80
OUTPUT_DIR_ENV_VARIABLE = "NAVFORGE_OUTPUT_DIR"
logger = logging.getLogger(__name__)


def padder(string: str, length: int = CONSOLE_WIDTH) -> str:
    """Pad a string with dashes to fit in a given length.

    :param str string: The string to pad.
    :param int length: The total length of the padded string, defaults to CONSOLE_WIDTH.
    :return: The padded string.
    :rtype: str
    """
    str_len = len(string)
    left = round((length - 2 - str_len) / 2)
    right = length - 2 - str_len - left
    return f"{left * '-'} {string} {right * '-'}"


def get_output_dir(requested: str | os.PathLike | None = None) -> Path:
    """Resolve and create the directory run artifacts are written to.

    The explicit argument wins, then the ``NAVFORGE_OUTPUT_DIR`` environment
    variable, then ``./navforge-out`` under the current working directory.

    :param requested: Directory requested by the caller, optional.
    :returns: Path to an existing directory.
    :raises RuntimeError: If the path exists and is not a directory.
    """
    output_dir = requested or os.environ.get(OUTPUT_DIR_ENV_VARIABLE)
    if not output_dir:
        output_dir = Path.cwd() / "navforge-out"
        logger.warning(f"No output directory given. Artifacts will be saved to: {output_dir}")

    output_dir = Path(output_dir)
    if output_dir.exists() and not output_dir.is_dir():
        raise RuntimeError(f"Output '{output_dir}' path exists and is not a directory.")

    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir


def git_blob_sha1(content: bytes) -> str:
    """Hash content the way ``git hash-object`` does."""
    header = f"blob {len(content)}\0".encode()
    return hashlib.sha1(header + content).hexdigest()
