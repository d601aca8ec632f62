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
"""Success-rate tables: maps as rows, methods as columns.

Cells hold percentages at one decimal. The best cell of every row is
flagged; cells that tie at the displayed precision are all flagged.
The CSV form marks best cells with a trailing ``*`` and parses back to
the same table.
"""

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Protocol

from score.navforge.errors import ContractError, MapParseError


logger = logging.getLogger(__name__)

BEST_MARK = "*"


class RatedReport(Protocol):
    map_id: str
    label: str

    @property
    def success_rate(self) -> float: ...


def to_percent(rate: float) -> float:
    return float(f"{100.0 * rate:.1f}")


def format_percent(percent: float) -> str:
    return f"{percent:.1f}%"


@dataclass
class SuccessTable:
    maps: list[str] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)
    cells: dict[tuple[str, str], float] = field(default_factory=dict)

    def row(self, map_id: str) -> dict[str, float]:
        return {label: self.cells[map_id, label] for label in self.labels if (map_id, label) in self.cells}

    def best(self, map_id: str) -> set[str]:
        row = self.row(map_id)
        if not row:
            return set()
        top = max(row.values())
        return {label for label, value in row.items() if value == top}

    def cell_text(self, map_id: str, label: str) -> str:
        value = self.cells.get((map_id, label))
        return "" if value is None else format_percent(value)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["map"] + self.labels)
        for map_id in self.maps:
            best = self.best(map_id)
            cells = []
            for label in self.labels:
                value = self.cells.get((map_id, label))
                cells.append("" if value is None else f"{value:.1f}" + (BEST_MARK if label in best else ""))
            writer.writerow([map_id] + cells)
        return out.getvalue()

    def to_text(self) -> str:
        header = ["map"] + self.labels
        rows = []
        for map_id in self.maps:
            best = self.best(map_id)
            cells = []
            for label in self.labels:
                text = self.cell_text(map_id, label)
                cells.append(text + f" {BEST_MARK}" if text and label in best else text)
            rows.append([map_id] + cells)
        widths = [max(len(line[i]) for line in [header] + rows) for i in range(len(header))]

        def render(line):
            return " | ".join(text.ljust(width) for text, width in zip(line, widths)).rstrip()

        rule = "-+-".join("-" * width for width in widths)
        return "\n".join([render(header), rule] + [render(row) for row in rows]) + "\n"


def emit_success_table(
    reports: Iterable[RatedReport], csv_path: Optional[str | Path] = None, text_path: Optional[str | Path] = None
) -> SuccessTable:
    """Assemble evaluation reports into a success table and optionally write it.

    :param reports: Reports carrying ``map_id``, ``label`` and ``success_rate``.
    :param csv_path: Where to write the CSV form.
    :param text_path: Where to write the aligned text form.
    :raises ContractError: Without reports, or with two reports for the same map and label.
    """
    table = SuccessTable()
    for report in reports:
        key = (report.map_id, report.label)
        if key in table.cells:
            raise ContractError(f"Two reports for map '{report.map_id}' and method '{report.label}'")
        if report.map_id not in table.maps:
            table.maps.append(report.map_id)
        if report.label not in table.labels:
            table.labels.append(report.label)
        table.cells[key] = to_percent(report.success_rate)
    if not table.cells:
        raise ContractError("A success table needs at least one report")

    if csv_path is not None:
        Path(csv_path).write_text(table.to_csv(), encoding="utf-8")
        logger.info(f"Success table CSV written to {csv_path}")
    if text_path is not None:
        Path(text_path).write_text(table.to_text(), encoding="utf-8")
    return table


def parse_success_table(text: str) -> SuccessTable:
    """Parse the CSV form written by :meth:`SuccessTable.to_csv`.

    :raises MapParseError: On a malformed header, ragged rows or non-numeric cells.
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or not rows[0] or rows[0][0] != "map":
        raise MapParseError("success table must start with a 'map' header", 1)
    labels = rows[0][1:]
    table = SuccessTable(labels=list(labels))
    for line_number, row in enumerate(rows[1:], start=2):
        if len(row) != len(labels) + 1:
            raise MapParseError(f"expected {len(labels) + 1} fields, got {len(row)}", line_number)
        map_id = row[0]
        table.maps.append(map_id)
        for label, cell in zip(labels, row[1:]):
            if not cell:
                continue
            try:
                table.cells[map_id, label] = float(cell.rstrip(BEST_MARK))
            except ValueError as exc:
                raise MapParseError(f"non-numeric cell '{cell}'", line_number) from exc
    return table
