# dto.py
from __future__ import annotations

import statistics
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from crweier.errors import ConfigError
from crweier.settings import (
    DEFAULT_ORDER,
    DEFAULT_POINTS,
    DEFAULT_SEED,
    MAX_ORDER,
    SUITE_MIN_ORDER,
    SUITE_TOLERANCES,
    SUITES,
)


class ConditionReport(BaseModel):
    condition_id: str
    statement: str

    residuals: List[float] = Field(default_factory=list)
    max_residual: float = 0.0
    mean_residual: float = 0.0
    tolerance: float
    passed: bool

    spread: Optional[float] = None
    seed: int = 0
    count: int = 0

    detail: Dict[str, Any] = Field(default_factory=dict)


def condition_report(condition_id: str, statement: str, residuals, tolerance: float, *,
                     seed: int = 0, spread: Optional[float] = None,
                     detail: Optional[Dict[str, Any]] = None) -> ConditionReport:
    """Summarise per-point residuals; a spread, when given, must also stay within tolerance."""
    values = [float(r) for r in residuals]
    worst = max(values) if values else 0.0
    passed = worst <= tolerance and (spread is None or spread <= tolerance)
    return ConditionReport(
        condition_id=condition_id,
        statement=statement,
        residuals=values,
        max_residual=worst,
        mean_residual=statistics.fmean(values) if values else 0.0,
        tolerance=tolerance,
        passed=passed,
        spread=spread,
        seed=seed,
        count=len(values),
        detail=detail or {},
    )


class SuiteResult(BaseModel):
    suite: str
    passed: bool
    conditions: List[ConditionReport] = Field(default_factory=list)
    error: Optional[str] = None
    skipped: Optional[str] = None


class RunReport(BaseModel):
    target: str
    points: int
    seed: int
    order: int

    suites: List[SuiteResult] = Field(default_factory=list)
    classification: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)


class RunConfig(BaseModel):
    target: str
    suites: List[str] = Field(default_factory=lambda: list(SUITES))
    points: int = Field(default=DEFAULT_POINTS, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    order: int = Field(default=DEFAULT_ORDER, ge=1, le=MAX_ORDER)
    format: Literal["json", "csv", "text"] = "json"
    out: Optional[str] = None

    @field_validator("suites")
    @classmethod
    def _known_suites(cls, value: List[str]) -> List[str]:
        unknown = [s for s in value if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s) {unknown}; choose from {list(SUITES)}")
        if not value:
            raise ValueError("at least one suite is required")
        return list(dict.fromkeys(value))

    @field_validator("tolerances")
    @classmethod
    def _positive_tolerances(cls, value: Dict[str, float]) -> Dict[str, float]:
        for suite, tol in value.items():
            if suite not in SUITES:
                raise ValueError(f"tolerance given for unknown suite {suite!r}")
            if not tol > 0:
                raise ValueError(f"tolerance for {suite} must be positive")
        return value

    @model_validator(mode="after")
    def _order_covers_suites(self) -> "RunConfig":
        need = max(SUITE_MIN_ORDER[s] for s in self.suites)
        if self.order < need:
            raise ValueError(f"order {self.order} too low for suites {self.suites}; need at least {need}")
        return self

    def tolerance(self, suite: str) -> float:
        return self.tolerances.get(suite, SUITE_TOLERANCES[suite])


def build_run_config(**fields: Any) -> RunConfig:
    """Validate a RunConfig, reporting the first offending field as ConfigError."""
    try:
        return RunConfig(**fields)
    except ValidationError as exc:
        err = exc.errors()[0]
        where = ".".join(str(p) for p in err.get("loc", ())) or None
        raise ConfigError(err.get("msg", str(exc)), field=where) from exc
