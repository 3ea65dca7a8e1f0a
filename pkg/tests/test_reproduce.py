import pandas as pd

from asa_bounds.items import SuiteCheck
from asa_bounds.reproduce import (
    _cyclic_checks,
    _cyclotomic_checks,
    _determinism_check,
    _example_checks,
    _hz_checks,
    REPORT_COLUMNS,
    render_table,
    report_table,
    suite_to_json,
)


def _failed(checks):
    return [c.check_id for c in checks if not c.passed]


def test_cyclic_oracle_rows_pass():
    checks = list(_cyclic_checks())
    assert checks
    assert _failed(checks) == []


def test_examples_and_hz_pass():
    assert _failed(list(_hz_checks())) == []
    assert _failed(list(_example_checks())) == []


def test_cyclotomic_rows_pass_at_small_bound():
    checks = list(_cyclotomic_checks(2_000, 1))
    assert len(checks) == 12
    assert _failed(checks) == []


def test_determinism_row():
    assert _determinism_check().passed


def test_report_table_carries_consistency_flags():
    df = report_table()
    assert tuple(df.columns) == REPORT_COLUMNS
    assert len(df) == 4
    for col in ("bound_is_consistent", "verdict_is_consistent", "delta_in_range"):
        assert df[col].tolist() == [True] * len(df)
    assert "exact_cyclotomic" in df["route"].tolist()


def test_suite_payload_and_table():
    rows = [
        SuiteCheck("a:1", "cite", True, "1", "1", None, "").to_row(),
        SuiteCheck("b:2", "cite", False, "2", "3", 0.05, "écart").to_row(),
    ]
    df = pd.DataFrame(rows)
    payload = suite_to_json(df, 2_000)
    assert (payload["total"], payload["passed"], payload["all_passed"]) == (2, 1, False)
    assert payload["checks"][0]["tolerance"] is None
    assert "b:2" in render_table(df)
