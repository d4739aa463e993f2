# crweier/models.py
"""Built-in model manifolds with known frames, structure functions and embeddings."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from crweier import expr as ex
from crweier.errors import ConfigError, DomainOutOfChart, UnknownModel
from crweier.frame import ChartSpec, build_frame
from crweier.immersion import ImmersionMap
from crweier.sampling import halton_points
from crweier.verbosity import get_logger

_log = get_logger("crweier.models")

Box = Tuple[Tuple[float, float], Tuple[float, float], Tuple[float, float]]


@dataclass(frozen=True)
class ModelDescriptor:
    name: str
    chart: ChartSpec
    description: str
    expected: Dict[str, Any] = field(default_factory=dict)
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def immersion(self) -> Optional[ImmersionMap]:
        return ImmersionMap.from_chart(self.chart) if self.chart.immersion else None


def chart_from_sources(name: str, domain, z_raw: Sequence[str], theta: Sequence[str],
                       immersion: Optional[Sequence[str]] = None) -> ChartSpec:
    return ChartSpec(
        name=name,
        domain=tuple((float(lo), float(hi)) for lo, hi in domain),
        z_raw=tuple(ex.parse(s) for s in z_raw),
        theta=tuple(ex.parse(s) for s in theta),
        immersion=tuple(ex.parse(s) for s in immersion) if immersion else None,
    )


def _check_domain(name: str, domain: Box, valid: Box) -> Box:
    for axis, ((lo, hi), (vlo, vhi)) in enumerate(zip(domain, valid)):
        if not (vlo <= lo < hi <= vhi):
            raise DomainOutOfChart(
                f"{name}: u{axis + 1} range [{lo}, {hi}] not inside the chart region [{vlo}, {vhi}]")
    return domain


def _take(params: Dict[str, Any], allowed: Sequence[str], model: str) -> Dict[str, Any]:
    extra = sorted(set(params) - set(allowed))
    if extra:
        raise ConfigError(f"model {model!r} takes no parameter {extra[0]!r}", field=extra[0])
    return params


# ── sphere ───────────────────────────────────────────────────────────

SPHERE_Z = ("sin(u1)*cos(u1)", "i*sin(u1)^2", "-i*cos(u1)^2")
SPHERE_THETA = ("0", "2*cos(u1)^2", "2*sin(u1)^2")
SPHERE_F = ("2*cos(u1)*cos(u2)", "2*cos(u1)*sin(u2)", "2*sin(u1)*cos(u3)", "2*sin(u1)*sin(u3)")
SPHERE_DOMAIN: Box = ((0.1, 1.4), (-3.0, 3.0), (-3.0, 3.0))
SPHERE_VALID: Box = ((1e-6, math.pi / 2 - 1e-6), (-math.pi, math.pi), (-math.pi, math.pi))

# chart b: z = 2cos(u1)e^{i(u2+u3)}, w = 2sin(u1)e^{i(u3-u2)}, then rotated; the Hopf fibre runs along u3
SPHERE_B_Z = ("sin(u1)*cos(u1)", "i/2", "-i*cos(2*u1)/2")
SPHERE_B_THETA = ("0", "2*cos(2*u1)", "2")
SPHERE_B_F_UNROTATED = ("2*cos(u1)*cos(u2 + u3)", "2*cos(u1)*sin(u2 + u3)",
                        "2*sin(u1)*cos(u3 - u2)", "2*sin(u1)*sin(u3 - u2)")
SPHERE_B_DOMAIN: Box = ((0.1, 1.4), (-1.5, 1.5), (-1.5, 1.5))
SPHERE_B_VALID: Box = ((1e-6, math.pi / 2 - 1e-6), (-math.pi / 2, math.pi / 2), (-math.pi / 2, math.pi / 2))
# Z_b = e^{-iv} Z_a with v = arg z + arg w + π − 2u3, (z, w) the embedded point, written in chart b coordinates
SPHERE_B_GAUGE = ("im(log(cos(u1)*exp(i*(u2 + u3)) + sin(u1)*exp(i*(u3 - u2))))"
                  " + im(log(cos(u1)*exp(i*(u2 + u3)) - sin(u1)*exp(i*(u3 - u2)))) + pi - 2*u3")

_R = "0.70710678118654757"


def _rotated(components: Sequence[str]) -> Tuple[str, ...]:
    """(z, w) ↦ ((z + w)/√2, (z − w)/√2) in coordinates (Re z, Im z, Re w, Im w)."""
    x1, y1, x2, y2 = (f"({c})" for c in components)
    return (f"{_R}*({x1} + {x2})", f"{_R}*({y1} + {y2})",
            f"{_R}*({x1} - {x2})", f"{_R}*({y1} - {y2})")


def _sphere(chart: str = "a", domain: Optional[Box] = None) -> ModelDescriptor:
    if chart not in ("a", "b"):
        raise ConfigError(f"sphere chart must be 'a' or 'b', got {chart!r}", field="chart")
    if chart == "a":
        box = _check_domain("sphere", domain or SPHERE_DOMAIN, SPHERE_VALID)
        spec = chart_from_sources("sphere-a", box, SPHERE_Z, SPHERE_THETA, SPHERE_F)
    else:
        box = _check_domain("sphere", domain or SPHERE_B_DOMAIN, SPHERE_B_VALID)
        spec = chart_from_sources("sphere-b", box, SPHERE_B_Z, SPHERE_B_THETA, _rotated(SPHERE_B_F_UNROTATED))
    return ModelDescriptor(
        name="sphere",
        chart=spec,
        description="sphere |z|² + |w|² = 2 (Euclidean radius 2) in a Hopf chart",
        expected={"c": 0.0, "spectrum": (0.5, 0.5, 0.5), "classification": "Sphere",
                  "norm_laplacian_R": 1.0, "radius": 2.0},
        params={"chart": chart},
    )


# ── cylinder ─────────────────────────────────────────────────────────

CYLINDER_Z = ("1", "i*sin(u1)", "-i*cos(u1)")
CYLINDER_THETA = ("0", "cos(u1)", "sin(u1)")
CYLINDER_F = ("cos(u1)", "u2", "sin(u1)", "u3")
CYLINDER_DOMAIN: Box = ((-3.0, 3.0), (-2.0, 2.0), (-2.0, 2.0))
CYLINDER_VALID: Box = ((-1e6, 1e6),) * 3
CYLINDER_GAUGE = "u1"


def _cylinder(pregauge: bool = False, domain: Optional[Box] = None) -> ModelDescriptor:
    box = _check_domain("cylinder", domain or CYLINDER_DOMAIN, CYLINDER_VALID)
    z_raw = tuple(f"exp(i*u1)*({z})" for z in CYLINDER_Z) if pregauge else CYLINDER_Z
    spec = chart_from_sources("cylinder-pregauge" if pregauge else "cylinder", box, z_raw,
                              CYLINDER_THETA, CYLINDER_F)
    expected = {"spectrum": (1.0, 0.0, 0.0), "classification": "Cylinder", "levi_raw": 2.0,
                "a": 0.0, "norm_laplacian_R": 1.0}
    if pregauge:
        expected["gauge"] = CYLINDER_GAUGE
    else:
        expected.update({"b": 0.5j, "c": 0.5j, "T": (0.0, "cos(u1)", "sin(u1)")})
    return ModelDescriptor(
        name="cylinder",
        chart=spec,
        description="cylinder (Re z)² + (Re w)² = 1",
        expected=expected,
        params={"pregauge": pregauge},
    )


# ── Heisenberg ───────────────────────────────────────────────────────

HEISENBERG_Z = ("1/2", "-i/2", "i*u1 + u2")
HEISENBERG_THETA = ("-2*u2", "2*u1", "1")
HEISENBERG_DOMAIN: Box = ((-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0))
HEISENBERG_VALID: Box = ((-1e6, 1e6),) * 3


def _heisenberg(domain: Optional[Box] = None) -> ModelDescriptor:
    box = _check_domain("heisenberg", domain or HEISENBERG_DOMAIN, HEISENBERG_VALID)
    spec = chart_from_sources("heisenberg", box, HEISENBERG_Z, HEISENBERG_THETA)
    return ModelDescriptor(
        name="heisenberg",
        chart=spec,
        description="Heisenberg group, θ = dt + 2(x dy − y dx)",
        expected={"a": 0.0, "b": 0.0, "c": 0.0, "levi_raw": 2.0, "T": (0.0, 0.0, 1.0),
                  "pluriharmonic": ("u1", "u2", "u3"), "not_pluriharmonic": ("u3^2",)},
    )


_REGISTRY: Dict[str, Tuple[Callable[..., ModelDescriptor], Tuple[str, ...]]] = {
    "sphere": (_sphere, ("chart", "domain")),
    "cylinder": (_cylinder, ("pregauge", "domain")),
    "heisenberg": (_heisenberg, ("domain",)),
}


def model_names() -> List[str]:
    return list(_REGISTRY)


def model(name: str, **params: Any) -> ModelDescriptor:
    """Look up a built-in model; ``params`` select charts, gauges or a sub-domain."""
    if name not in _REGISTRY:
        raise UnknownModel(name, _REGISTRY)
    factory, allowed = _REGISTRY[name]
    return factory(**_take(params, allowed, name))


# ── cross-checks ─────────────────────────────────────────────────────

def defining_equation_residual(descriptor: ModelDescriptor, points) -> float:
    """Largest deviation of the embedding from the model's defining equation."""
    imm = descriptor.immersion
    if imm is None:
        raise ValueError(f"model {descriptor.name!r} has no embedding")
    worst = 0.0
    for p in points:
        f = np.array([j.value.real for j in imm.at(p, 0)])
        if descriptor.name == "sphere":
            r = float(np.dot(f, f)) - 4.0
        else:
            r = f[0] ** 2 + f[2] ** 2 - 1.0
        worst = max(worst, abs(r))
    return worst


def _sphere_a_coordinates(x: np.ndarray) -> Tuple[float, float, float]:
    """Chart-a parameters of an embedded point (Re z, Im z, Re w, Im w)."""
    z, w = complex(x[0], x[1]), complex(x[2], x[3])
    return (math.atan2(abs(w), abs(z)), float(np.angle(z)), float(np.angle(w)))


def chart_overlap_residual(count: int = 32, seed: int = 0, order: int = 3,
                           gauge: str = SPHERE_B_GAUGE) -> Dict[str, float]:
    """Change-of-frame law between the two sphere charts on their overlap.

    Chart-b sample points are sent through the embedding to chart-a parameters. With
    Z_b = e^{−iv} Z_a the residuals are those of a_b = e^{iv}a_a − Z̄_b v, b_b = b_a + iTv,
    c_b = e^{2iv}c_a, and of the pushed-forward Z and T.
    """
    a = model("sphere", chart="a")
    b = model("sphere", chart="b")
    v_expr = ex.parse(gauge)
    worst = {"a": 0.0, "b": 0.0, "c": 0.0, "Z": 0.0, "T": 0.0}
    used = 0
    for row in halton_points(b.chart.domain, count, seed):
        pb = tuple(float(x) for x in row)
        fb = b.immersion.at(pb, order)
        pa = _sphere_a_coordinates(np.array([j.value.real for j in fb]))
        if not a.chart.contains(pa):
            continue
        used += 1
        fra, frb = build_frame(a.chart, pa, order), build_frame(b.chart, pb, order)
        fa = a.immersion.at(fra.point, order)
        v = ex.evaluate(v_expr, frb.point, order)
        phase = complex(np.exp(1j * v.value))
        worst["a"] = max(worst["a"], abs(frb.a.value - phase * fra.a.value + frb.apply_Zbar(v).value))
        worst["b"] = max(worst["b"], abs(frb.b.value - fra.b.value - 1j * frb.apply_T(v).value))
        worst["c"] = max(worst["c"], abs(frb.c.value - phase * phase * fra.c.value))
        zb = np.array([j.value for j in frb.apply_Z(fb)])
        za = np.array([j.value for j in fra.apply_Z(fa)])
        worst["Z"] = max(worst["Z"], float(np.max(np.abs(zb - za / phase))))
        tb = np.array([j.value for j in frb.apply_T(fb)])
        ta = np.array([j.value for j in fra.apply_T(fa)])
        worst["T"] = max(worst["T"], float(np.max(np.abs(tb - ta))))
    if not used:
        raise DomainOutOfChart("no chart-b sample point lies in the domain of sphere chart a")
    _log.info("sphere chart overlap on %d of %d points: %s", used, count, worst)
    return {**worst, "points": used}
