# crweier/chartfile.py
"""
TOML chart files.

    name = "heisenberg"

    [domain]
    u1 = [-1.0, 1.0]
    u2 = [-1.0, 1.0]
    u3 = [-1.0, 1.0]

    [Z]
    u1 = "1/2"
    u2 = "-i/2"
    u3 = "i*u1 + u2"

    [theta]
    u1 = "-2*u2"
    u2 = "2*u1"
    u3 = "1"

    [immersion]            # optional
    components = ["...", "...", "..."]
"""
from __future__ import annotations

import json
import tomllib
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from crweier import expr as ex
from crweier.errors import ChartParseError, ParseError
from crweier.frame import ChartSpec
from crweier.settings import CHART_DIR
from crweier.verbosity import get_logger

_log = get_logger("crweier.chartfile")


class _Triple(BaseModel):
    model_config = ConfigDict(extra="forbid")
    u1: str
    u2: str
    u3: str


class _Domain(BaseModel):
    model_config = ConfigDict(extra="forbid")
    u1: Tuple[float, float]
    u2: Tuple[float, float]
    u3: Tuple[float, float]

    @field_validator("u1", "u2", "u3")
    @classmethod
    def _ordered(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if not value[0] < value[1]:
            raise ValueError(f"empty range {list(value)}")
        return value


class _Immersion(BaseModel):
    model_config = ConfigDict(extra="forbid")
    components: List[str] = Field(min_length=3)


class ChartFile(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    name: str
    domain: _Domain
    z: _Triple = Field(alias="Z")
    theta: _Triple
    immersion: Optional[_Immersion] = None


def _parse_expr(src: str, path: Optional[str], key: str) -> ex.Expr:
    try:
        return ex.parse(src)
    except ParseError as exc:
        raise ChartParseError(str(exc), path=path, key=key, offset=exc.offset) from exc


def chart_from_document(doc: dict, path: Optional[str] = None) -> ChartSpec:
    try:
        data = ChartFile.model_validate(doc)
    except ValidationError as exc:
        err = exc.errors()[0]
        key = ".".join(str(p) for p in err.get("loc", ()))
        raise ChartParseError(err.get("msg", "invalid chart"), path=path, key=key) from exc

    axes = ("u1", "u2", "u3")
    z_raw = tuple(_parse_expr(getattr(data.z, a), path, f"Z.{a}") for a in axes)
    theta = tuple(_parse_expr(getattr(data.theta, a), path, f"theta.{a}") for a in axes)
    immersion = None
    if data.immersion is not None:
        immersion = tuple(_parse_expr(s, path, f"immersion.components[{k}]")
                          for k, s in enumerate(data.immersion.components))
    return ChartSpec(
        name=data.name,
        domain=tuple(getattr(data.domain, a) for a in axes),
        z_raw=z_raw,
        theta=theta,
        immersion=immersion,
    )


def loads_chart(text: str, path: Optional[str] = None) -> ChartSpec:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ChartParseError(str(exc), path=path) from exc
    return chart_from_document(doc, path)


def load_chart(path: str) -> ChartSpec:
    """Read a chart file; bare names are looked up in the chart directory."""
    p = Path(path)
    if not p.exists() and not p.suffix:
        p = Path(CHART_DIR) / f"{path}.toml"
    if not p.exists():
        raise ChartParseError("no such chart file", path=str(p))
    chart = loads_chart(p.read_text(encoding="utf-8"), str(p))
    _log.info("Loaded chart %s from %s", chart.name, p)
    return chart


def _toml_str(s: str) -> str:
    # JSON string escapes are valid TOML basic strings
    return json.dumps(s, ensure_ascii=False)


def _num(x: float) -> str:
    text = format(x, ".17g")
    return text if any(ch in text for ch in ".en") else text + ".0"


def dumps_chart(chart: ChartSpec) -> str:
    lines = [f"name = {_toml_str(chart.name)}", "", "[domain]"]
    for k, (lo, hi) in enumerate(chart.domain):
        lines.append(f"u{k + 1} = [{_num(lo)}, {_num(hi)}]")
    for section, exprs in (("Z", chart.z_raw), ("theta", chart.theta)):
        lines += ["", f"[{section}]"]
        lines += [f"u{k + 1} = {_toml_str(ex.to_source(e))}" for k, e in enumerate(exprs)]
    if chart.immersion:
        lines += ["", "[immersion]", "components = ["]
        lines += [f"    {_toml_str(ex.to_source(e))}," for e in chart.immersion]
        lines.append("]")
    return "\n".join(lines) + "\n"


def export_chart(chart: ChartSpec, out: Optional[str] = None) -> str:
    text = dumps_chart(chart)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
        _log.info("Exported chart %s -> %s", chart.name, out)
    return text
