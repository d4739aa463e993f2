from dataclasses import replace

import pytest

from crweier.chartfile import export_chart
from crweier.dto import build_run_config
from crweier.errors import UnknownModel
from crweier.immersion import ImmersionMap
from crweier.models import model
from crweier.suites import resolve_target, run


def suites_by_name(report):
    return {s.suite: s for s in report.suites}


def test_heisenberg_skips_immersion_suites():
    report = run(build_run_config(target="model:heisenberg", points=4, order=5))
    by_name = suites_by_name(report)
    assert by_name["frame"].passed and by_name["complex"].passed
    for name in ("weierstrass", "pluriharmonic", "harmonicity", "classify"):
        assert by_name[name].skipped
    assert report.passed
    assert report.classification is None


def test_sphere_full_run():
    report = run(build_run_config(target="model:sphere", points=6, order=5))
    failed = [c.condition_id for s in report.suites for c in s.conditions if not c.passed]
    assert failed == []
    assert report.passed
    assert report.classification == "Sphere"
    ids = {c.condition_id for c in suites_by_name(report)["classify"].conditions}
    assert {"classify.kind", "classify.shape_trace", "sasakian.laplacian"} <= ids
    assert any(c.condition_id.startswith("isotropy.") for c in suites_by_name(report)["harmonicity"].conditions)


def test_cylinder_classification():
    report = run(build_run_config(target="model:cylinder", suites=["classify"], points=6, order=5))
    assert report.classification == "Cylinder"
    ids = {c.condition_id for c in report.suites[0].conditions}
    assert "cylinder.XXXX" in ids
    assert report.passed


def test_chart_target(tmp_path):
    path = tmp_path / "cyl.toml"
    export_chart(model("cylinder").chart, str(path))
    report = run(build_run_config(target=f"chart:{path}", suites=["frame", "weierstrass"], points=4))
    assert report.passed


def test_failed_prerequisite_becomes_suite_error(tmp_path):
    chart = model("sphere").chart
    big = replace(chart, immersion=ImmersionMap.from_chart(chart).scaled(1.1).components)
    path = tmp_path / "big.toml"
    export_chart(big, str(path))
    report = run(build_run_config(target=f"chart:{path}", suites=["weierstrass", "harmonicity"], points=4))
    by_name = suites_by_name(report)
    assert not by_name["weierstrass"].passed
    assert by_name["harmonicity"].error.startswith("PrerequisiteFailed")
    assert not report.passed


def test_resolve_target():
    chart, expected = resolve_target("model:cylinder")
    assert chart.name == "cylinder" and expected["classification"] == "Cylinder"
    with pytest.raises(ValueError):
        resolve_target("sphere")
    with pytest.raises(UnknownModel):
        resolve_target("model:torus")
