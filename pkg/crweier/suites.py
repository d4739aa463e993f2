# crweier/suites.py
"""Named verification suites run over one sampled chart."""
from __future__ import annotations

from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from crweier import expr as ex
from crweier.chartfile import load_chart
from crweier.dto import ConditionReport, RunConfig, RunReport, SuiteResult, condition_report
from crweier.errors import CrweierError
from crweier.frame import ChartSpec, verify_structure_equations
from crweier.fuzz import random_function
from crweier.glcomplex import complex_identities
from crweier.immersion import (
    ImmersionMap,
    classify,
    cylinder_identities,
    harmonicity_chain,
    integrability_check,
    isometry_check,
    isotropy_check,
    pluriharmonic_check,
    sasakian_constants,
    shape_spectrum,
    weierstrass_check,
)
from crweier.models import model
from crweier.sampling import SampleSet
from crweier.settings import SUITE_TOLERANCES
from crweier.verbosity import get_logger

_log = get_logger("crweier.suites")


class _Context:
    def __init__(self, chart: ChartSpec, config: RunConfig, expected: Optional[dict] = None):
        self.chart = chart
        self.config = config
        self.expected = expected or {}
        self.samples = SampleSet(chart, config.points, config.seed, config.order)
        self.classification: Optional[str] = None

    @property
    def immersion(self) -> Optional[ImmersionMap]:
        return ImmersionMap.from_chart(self.chart) if self.chart.immersion else None


def resolve_target(target: str) -> Tuple[ChartSpec, dict]:
    """``model:NAME`` or ``chart:PATH`` to a chart and its expected values."""
    kind, _, value = target.partition(":")
    if kind == "model":
        desc = model(value)
        return desc.chart, dict(desc.expected)
    if kind == "chart":
        return load_chart(value), {}
    raise ValueError(f"target must start with 'model:' or 'chart:', got {target!r}")


def _residual_reports(prefix: str, rows: List[Dict[str, float]], tol: float, seed: int) -> List[ConditionReport]:
    keys = list(rows[0]) if rows else []
    return [condition_report(f"{prefix}.{k}", k, [r[k] for r in rows], tol, seed=seed) for k in keys]


# ── suites ───────────────────────────────────────────────────────────

def _frame_suite(ctx: _Context, tol: float) -> List[ConditionReport]:
    rows = [verify_structure_equations(fr) for fr in ctx.samples]
    return _residual_reports("frame", rows, tol, ctx.config.seed)


def _test_functions(ctx: _Context) -> Tuple[ex.Expr, ex.Expr]:
    imm = ctx.immersion
    if imm is not None:
        return imm.components[0], imm.components[1]
    seed = ctx.config.seed
    return ex.parse(random_function(seed)), ex.parse(random_function(seed + 1))


def _complex_suite(ctx: _Context, tol: float) -> List[ConditionReport]:
    f_expr, g_expr = _test_functions(ctx)
    rows = []
    for fr in ctx.samples:
        f = ex.evaluate(f_expr, fr.point, fr.order)
        g = ex.evaluate(g_expr, fr.point, fr.order)
        rows.append(complex_identities(fr, f, g))
    return _residual_reports("complex", rows, tol, ctx.config.seed)


def _weierstrass_suite(ctx: _Context, tol: float) -> List[ConditionReport]:
    imm = ctx.immersion
    return (weierstrass_check(imm, ctx.samples, tol) + [isometry_check(imm, ctx.samples, tol)]
            + integrability_check(imm, ctx.samples, tol))


def _pluriharmonic_suite(ctx: _Context, tol: float) -> List[ConditionReport]:
    return pluriharmonic_check(ctx.immersion, ctx.samples, tol)


def _harmonicity_suite(ctx: _Context, tol: float) -> List[ConditionReport]:
    imm = ctx.immersion
    reports = harmonicity_chain(imm, ctx.samples, tol)
    two = next(r for r in reports if r.condition_id == "harmonicity.2")
    if imm.n == 4 and two.passed:
        reports += isotropy_check(imm, ctx.samples, tol)
    return reports


def _classify_suite(ctx: _Context, tol: float) -> List[ConditionReport]:
    imm = ctx.immersion
    result = classify(imm, ctx.samples, tol)
    ctx.classification = result.kind
    spectrum = shape_spectrum(imm, ctx.samples, SUITE_TOLERANCES["weierstrass"])
    want = ctx.expected.get("classification")
    ok = result.kind == want if want else result.kind != "Inconclusive"
    reports = [
        ConditionReport(condition_id="classify.kind", statement=f"classified as {result.kind}",
                        tolerance=tol, passed=ok, seed=ctx.config.seed, count=len(ctx.samples),
                        detail={"kind": result.kind, "expected": want, **result.evidence}),
        condition_report("classify.shape_trace", "tr h = ‖Δ_R f‖ − <TTf, ν>",
                         [spectrum.trace_residual], tol, seed=ctx.config.seed,
                         detail={"mean_eigenvalues": np.mean(spectrum.eigenvalues, axis=0).tolist()}),
    ]
    if result.kind == "Sphere":
        reports += sasakian_constants(imm, ctx.samples, tol)
    elif result.kind == "Cylinder":
        reports += cylinder_identities(imm, ctx.samples, tol)
    return reports


_SUITES: Dict[str, Tuple[Callable[[_Context, float], List[ConditionReport]], bool]] = {
    "frame": (_frame_suite, False),
    "complex": (_complex_suite, False),
    "weierstrass": (_weierstrass_suite, True),
    "pluriharmonic": (_pluriharmonic_suite, True),
    "harmonicity": (_harmonicity_suite, True),
    "classify": (_classify_suite, True),
}


def run_suite(name: str, ctx: _Context) -> SuiteResult:
    fn, needs_immersion = _SUITES[name]
    tol = ctx.config.tolerance(name)
    if needs_immersion and ctx.immersion is None:
        _log.info("suite %s skipped: %s has no immersion", name, ctx.chart.name)
        return SuiteResult(suite=name, passed=True, skipped="target declares no immersion")
    if name == "classify" and ctx.immersion.n != 4:
        return SuiteResult(suite=name, passed=True, skipped="classification needs n = 4")
    try:
        conditions = fn(ctx, tol)
    except CrweierError as exc:
        _log.warning("suite %s failed on %s: %s", name, ctx.chart.name, exc)
        return SuiteResult(suite=name, passed=False, error=f"{type(exc).__name__}: {exc}")
    passed = all(c.passed for c in conditions)
    _log.info("suite %s on %s: %s (%d conditions)", name, ctx.chart.name,
              "PASS" if passed else "FAIL", len(conditions))
    return SuiteResult(suite=name, passed=passed, conditions=conditions)


def run(config: RunConfig) -> RunReport:
    chart, expected = resolve_target(config.target)
    ctx = _Context(chart, config, expected)
    _log.info("running %s on %s: %d points, seed %d, order %d",
              config.suites, chart.name, config.points, config.seed, config.order)
    results = [run_suite(name, ctx) for name in config.suites]
    return RunReport(target=config.target, points=config.points, seed=config.seed, order=config.order,
                     suites=results, classification=ctx.classification)
