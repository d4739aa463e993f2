from pathlib import Path

import pytest

from crweier import chartfile
from crweier.chartfile import dumps_chart, export_chart, load_chart, loads_chart
from crweier.errors import ChartParseError
from crweier.models import model

CHARTS = Path(__file__).resolve().parents[1] / "data" / "charts"

HEISENBERG = """
name = "h"

[domain]
u1 = [-1.0, 1.0]
u2 = [-1.0, 1.0]
u3 = [-1.0, 1.0]

[Z]
u1 = "1/2"
u2 = "-i/2"
u3 = "{z3}"

[theta]
u1 = "-2*u2"
u2 = "2*u1"
u3 = "1"
"""


@pytest.mark.parametrize(
    "filename, name, params",
    [
        ("heisenberg.toml", "heisenberg", {}),
        ("sphere.toml", "sphere", {}),
        ("sphere_b.toml", "sphere", {"chart": "b"}),
        ("cylinder.toml", "cylinder", {}),
        ("cylinder_pregauge.toml", "cylinder", {"pregauge": True}),
    ],
)
def test_shipped_charts_match_models(filename, name, params):
    assert load_chart(str(CHARTS / filename)) == model(name, **params).chart


def test_bare_name_resolves_in_chart_dir(monkeypatch):
    monkeypatch.setattr(chartfile, "CHART_DIR", str(CHARTS))
    assert load_chart("cylinder").name == "cylinder"


def test_export_then_load(tmp_path):
    chart = model("sphere", chart="b").chart
    out = tmp_path / "charts" / "s.toml"
    text = export_chart(chart, str(out))
    assert out.read_text(encoding="utf-8") == text
    assert load_chart(str(out)) == chart


def test_dump_has_sections():
    text = dumps_chart(model("heisenberg").chart)
    assert "[Z]" in text and "[theta]" in text and "[immersion]" not in text


def test_expression_errors_point_at_key_and_byte():
    with pytest.raises(ChartParseError) as info:
        loads_chart(HEISENBERG.format(z3="i*u1 + bar"), "h.toml")
    assert info.value.key == "Z.u3"
    assert info.value.offset == 7
    assert "h.toml" in str(info.value)


@pytest.mark.parametrize(
    "text, key",
    [
        (HEISENBERG.format(z3="u2").replace('[theta]\nu1 = "-2*u2"\n', "[theta]\n"), "theta.u1"),
        (HEISENBERG.format(z3="u2").replace("u1 = [-1.0, 1.0]", "u1 = [1.0, -1.0]"), "domain.u1"),
        ("colour = \"red\"\n" + HEISENBERG.format(z3="u2"), "colour"),
    ],
)
def test_schema_errors_name_the_key(text, key):
    with pytest.raises(ChartParseError) as info:
        loads_chart(text)
    assert info.value.key == key


def test_invalid_toml():
    with pytest.raises(ChartParseError):
        loads_chart("name = ")


def test_missing_file(tmp_path):
    with pytest.raises(ChartParseError):
        load_chart(str(tmp_path / "nowhere.toml"))
