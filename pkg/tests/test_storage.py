import csv
import io
import json

import pytest

from crweier.dto import ConditionReport, RunReport, SuiteResult, build_run_config, condition_report
from crweier.errors import ConfigError
from crweier.storage import CSV_COLUMNS, report_to_csv, report_to_json, report_to_text, store_report
from crweier.suites import run


def sample_report():
    cond = condition_report("frame.dtheta", "dθ = iζ∧ζ̄", [1e-15, 3e-16], 1e-8, seed=2)
    bad = condition_report("weierstrass.3", "‖φ‖² = 1", [0.21], 1e-8, seed=2)
    return RunReport(
        target="model:sphere", points=2, seed=2, order=5,
        suites=[SuiteResult(suite="frame", passed=True, conditions=[cond]),
                SuiteResult(suite="weierstrass", passed=False, conditions=[bad]),
                SuiteResult(suite="harmonicity", passed=False, error="PrerequisiteFailed: isometry")],
    )


def test_condition_report_summary():
    rep = condition_report("x", "x = 0", [1e-9, 3e-9], 1e-8)
    assert rep.passed and rep.max_residual == 3e-9 and rep.count == 2
    assert rep.mean_residual == pytest.approx(2e-9)
    assert not condition_report("x", "x = 0", [1e-9], 1e-8, spread=1e-3).passed


@pytest.mark.parametrize(
    "fields, field",
    [
        ({"suites": ["frame", "bogus"]}, "suites"),
        ({"points": 0}, "points"),
        ({"order": 9}, "order"),
        ({"tolerances": {"frame": -1.0}}, "tolerances"),
        ({"format": "xml"}, "format"),
    ],
)
def test_config_errors_name_the_field(fields, field):
    with pytest.raises(ConfigError) as info:
        build_run_config(target="model:sphere", **fields)
    assert info.value.field == field


def test_order_must_cover_suites():
    with pytest.raises(ConfigError):
        build_run_config(target="model:sphere", suites=["classify"], order=4)
    config = build_run_config(target="model:sphere", suites=["frame", "frame"], order=3,
                              tolerances={"frame": 1e-6})
    assert config.suites == ["frame"]
    assert config.tolerance("frame") == 1e-6
    assert config.tolerance("complex") == 1e-8


def test_json_layout():
    text = report_to_json(sample_report())
    data = json.loads(text)
    assert list(data) == ["target", "points", "seed", "order", "suites", "classification", "passed"]
    assert data["passed"] is False
    assert list(data["suites"][0]["conditions"][0])[:4] == ["condition_id", "statement", "residuals",
                                                             "max_residual"]
    assert format(3e-16, ".17g") in text


def test_json_is_reproducible():
    config = build_run_config(target="model:heisenberg", suites=["frame"], points=3, order=3)
    assert report_to_json(run(config)) == report_to_json(run(config))


def test_csv_rows():
    rows = list(csv.reader(io.StringIO(report_to_csv(sample_report()))))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert [r[1] for r in rows[1:]] == ["frame.dtheta", "weierstrass.3", "error"]
    assert rows[2][2] == "false"


def test_text_summary():
    text = report_to_text(sample_report())
    assert "[frame] PASS" in text
    assert "error: PrerequisiteFailed: isometry" in text
    assert text.rstrip().endswith("FAIL")


def test_store_report_writes_file(tmp_path):
    out = tmp_path / "reports" / "r.csv"
    text = store_report(sample_report(), "csv", str(out))
    assert out.read_text(encoding="utf-8") == text


def test_report_passed_property():
    ok = RunReport(target="t", points=1, seed=0, order=3,
                   suites=[SuiteResult(suite="frame", passed=True, conditions=[
                       ConditionReport(condition_id="c", statement="s", tolerance=1.0, passed=True)])])
    assert ok.passed
