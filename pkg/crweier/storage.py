# storage.py
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Optional

from crweier.dto import RunReport
from crweier.verbosity import get_logger

_log = get_logger("crweier.storage")


def _json_value(value: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if value is None or isinstance(value, bool):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g") if math.isfinite(value) else "null"
    if isinstance(value, complex):
        return _json_value([value.real, value.imag], indent, level)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_json_value(v, indent, level + 1)}"
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            return "[" + ", ".join(_json_value(v, indent, level) for v in value) + "]"
        items = [pad + _json_value(v, indent, level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(value).__name__}")


def report_to_json(report: RunReport, indent: int = 2) -> str:
    """Field order follows the models; floats carry 17 significant digits."""
    data = report.model_dump()
    data["passed"] = report.passed
    return _json_value(data, indent, 0) + "\n"


CSV_COLUMNS = ("suite", "condition_id", "passed", "max_residual", "mean_residual",
               "tolerance", "spread", "count", "seed", "statement")


def report_to_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for suite in report.suites:
        for cond in suite.conditions:
            writer.writerow([
                suite.suite, cond.condition_id, str(cond.passed).lower(),
                format(cond.max_residual, ".17g"), format(cond.mean_residual, ".17g"),
                format(cond.tolerance, ".17g"),
                "" if cond.spread is None else format(cond.spread, ".17g"),
                cond.count, cond.seed, cond.statement,
            ])
        if suite.error:
            writer.writerow([suite.suite, "error", "false", "", "", "", "", 0, report.seed, suite.error])
    return buf.getvalue()


def report_to_text(report: RunReport) -> str:
    lines = [f"target: {report.target}  points: {report.points}  seed: {report.seed}  order: {report.order}"]
    width = max([len(c.condition_id) for s in report.suites for c in s.conditions] + [12])
    for suite in report.suites:
        lines.append("")
        lines.append(f"[{suite.suite}] {'PASS' if suite.passed else 'FAIL'}")
        if suite.error:
            lines.append(f"  error: {suite.error}")
        for cond in suite.conditions:
            mark = "ok " if cond.passed else "BAD"
            lines.append(f"  {mark} {cond.condition_id:<{width}}  max={cond.max_residual:.3e}  "
                         f"tol={cond.tolerance:.1e}  {cond.statement}")
    if report.classification:
        lines.append("")
        lines.append(f"classification: {report.classification}")
    lines.append("")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines) + "\n"


RENDERERS = {"json": report_to_json, "csv": report_to_csv, "text": report_to_text}


def store_report(report: RunReport, fmt: str, out: Optional[str] = None) -> str:
    """Render ``report``; write it to ``out`` when given. Returns the rendered text."""
    text = RENDERERS[fmt](report)
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        _log.info("Wrote %s report for %s -> %s", fmt, report.target, path)
    return text
