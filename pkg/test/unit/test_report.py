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
import pytest

from score.navforge.errors import ConfigError, ContractError, MapParseError
from score.navforge.evaluation.evaluate import ReportSummary
from score.navforge.evaluation.report import emit_success_table, format_percent, parse_success_table, to_percent


_REPORTS = [
    ReportSummary("test-40a", "SAC-proposed", 500, 432),
    ReportSummary("test-40a", "TD3-proposed", 500, 400),
    ReportSummary("test-40b", "SAC-proposed", 200, 182),
    ReportSummary("test-40b", "TD3-proposed", 200, 182),
]


def test_percent_formatting():
    assert to_percent(432 / 500) == 86.4
    assert format_percent(to_percent(432 / 500)) == "86.4%"
    assert format_percent(to_percent(1.0)) == "100.0%"


def test_best_cells_are_flagged_with_ties():
    table = emit_success_table(_REPORTS)
    assert table.maps == ["test-40a", "test-40b"]
    assert table.labels == ["SAC-proposed", "TD3-proposed"]
    assert table.best("test-40a") == {"SAC-proposed"}
    assert table.best("test-40b") == {"SAC-proposed", "TD3-proposed"}
    assert table.to_csv() == (
        "map,SAC-proposed,TD3-proposed\n"
        "test-40a,86.4*,80.0\n"
        "test-40b,91.0*,91.0*\n"
    )


def test_text_table():
    lines = emit_success_table(_REPORTS).to_text().splitlines()
    assert lines[0].split(" | ") == ["map     ", "SAC-proposed", "TD3-proposed"]
    assert "86.4% *" in lines[2]
    assert lines[3].count("91.0% *") == 2


def test_csv_round_trip(tmp_path):
    csv_path, text_path = tmp_path / "table.csv", tmp_path / "table.txt"
    table = emit_success_table(_REPORTS, csv_path=csv_path, text_path=text_path)
    parsed = parse_success_table(csv_path.read_text(encoding="utf-8"))
    assert parsed == table
    assert text_path.read_text(encoding="utf-8") == table.to_text()


def test_missing_cells_stay_empty():
    table = emit_success_table(_REPORTS[:3])
    assert table.cell_text("test-40b", "TD3-proposed") == ""
    assert "test-40b,91.0*,\n" in table.to_csv()
    assert parse_success_table(table.to_csv()) == table


def test_duplicate_and_missing_reports():
    with pytest.raises(ContractError, match="Two reports"):
        emit_success_table(_REPORTS + [_REPORTS[0]])
    with pytest.raises(ContractError, match="at least one"):
        emit_success_table([])


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("method,SAC\n", 1),
        ("map,SAC,TD3\ntest-40a,86.4\n", 2),
        ("map,SAC\ntest-40a,86.4\ntest-40b,high\n", 3),
    ],
)
def test_malformed_tables(text, line):
    with pytest.raises(MapParseError) as info:
        parse_success_table(text)
    assert info.value.line == line


def test_report_summary_reads_evaluation_reports(tmp_path):
    path = tmp_path / "report.json"
    path.write_text('{"map_id": "desk-12", "label": "SAC-proposed", "trials": 20, "successes": 15}')
    summary = ReportSummary.read(path)
    assert summary.success_rate == 0.75
    path.write_text('{"map_id": "desk-12", "trials": 20}')
    with pytest.raises(ConfigError, match="label"):
        ReportSummary.read(path)
