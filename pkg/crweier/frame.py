# crweier/frame.py
"""
Pseudohermitian frames on three-dimensional charts.

A chart supplies a contact form θ and an unnormalised (1,0) field Z_raw as
expressions in (u1, u2, u3). ``build_frame`` turns them, at one point, into
jets of the normalised frame (Z, Z̄, T), its dual coframe (ζ, ζ̄, θ) and the
structure functions a, b, c defined by

    i[Z, Z̄] = T + aZ + āZ̄,   [Z, T] = bZ + c̄Z̄,   [Z̄, T] = cZ + b̄Z̄.

Two-forms are evaluated as (α∧β)(V, W) = α(V)β(W) − α(W)β(V); the Levi form
is L(Z, Z) = −i dθ(Z, Z̄), which equals 1 on a normalised frame.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from crweier import expr as ex
from crweier.errors import (
    ContactViolation,
    DegenerateFrame,
    DomainOutOfChart,
    NonRealGauge,
    NotPseudoconvex,
)
from crweier.jets import Jet, apply_field, exp, lie_bracket, partial, sqrt
from crweier.settings import CONDITION_LIMIT, FRAME_TOL
from crweier.verbosity import get_logger

_log = get_logger("crweier.frame")

Vector = Tuple[Jet, Jet, Jet]
JetOrTuple = Union[Jet, Tuple[Jet, ...]]

SQRT2 = math.sqrt(2.0)


# ── chart description ────────────────────────────────────────────────

@dataclass(frozen=True)
class ChartSpec:
    name: str
    domain: Tuple[Tuple[float, float], ...]
    z_raw: Tuple[ex.Expr, ex.Expr, ex.Expr]
    theta: Tuple[ex.Expr, ex.Expr, ex.Expr]
    immersion: Optional[Tuple[ex.Expr, ...]] = None

    def contains(self, point: Sequence[float], slack: float = 1e-12) -> bool:
        return all(lo - slack <= x <= hi + slack for x, (lo, hi) in zip(point, self.domain))

    def center(self) -> Tuple[float, float, float]:
        return tuple((lo + hi) / 2.0 for lo, hi in self.domain)

    def probe_points(self, margin: float = 0.1) -> list:
        """Domain centre plus the corners of the box shrunk by ``margin``."""
        pts = [self.center()]
        inner = [(lo + margin * (hi - lo), hi - margin * (hi - lo)) for lo, hi in self.domain]
        pts.extend(product(*inner))
        return pts


# ── frame data ───────────────────────────────────────────────────────

def lift(op: Callable[[Jet], Jet], f: JetOrTuple) -> JetOrTuple:
    if isinstance(f, Jet):
        return op(f)
    return tuple(op(x) for x in f)


def pair(form: Sequence[Jet], vec: Sequence[Jet]) -> Jet:
    """Contraction of a one-form with a vector field."""
    return form[0] * vec[0] + form[1] * vec[1] + form[2] * vec[2]


def exterior_derivative(form: Sequence[Jet]) -> Tuple[Tuple[Jet, ...], ...]:
    """(dα)_ij = ∂_i α_j − ∂_j α_i."""
    grads = [[partial(form[j], i) for j in range(3)] for i in range(3)]
    return tuple(tuple(grads[i][j] - grads[j][i] for j in range(3)) for i in range(3))


def two_form(d: Sequence[Sequence[Jet]], v: Sequence[Jet], w: Sequence[Jet]) -> Jet:
    total = None
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            term = d[i][j] * v[i] * w[j]
            total = term if total is None else total + term
    return total


def wedge(alpha: Sequence[Jet], beta: Sequence[Jet], i: int, j: int) -> Jet:
    return alpha[i] * beta[j] - alpha[j] * beta[i]


@dataclass(frozen=True)
class FrameData:
    point: Tuple[float, float, float]
    order: int
    theta: Vector
    dtheta: Tuple[Tuple[Jet, ...], ...]
    Z: Vector
    Zbar: Vector
    T: Vector
    zeta: Vector
    zetabar: Vector
    theta_co: Vector
    a: Jet
    b: Jet
    c: Jet
    levi: Jet
    chart: str = ""

    def apply_Z(self, f: JetOrTuple) -> JetOrTuple:
        return lift(lambda g: apply_field(self.Z, g), f)

    def apply_Zbar(self, f: JetOrTuple) -> JetOrTuple:
        return lift(lambda g: apply_field(self.Zbar, g), f)

    def apply_T(self, f: JetOrTuple) -> JetOrTuple:
        return lift(lambda g: apply_field(self.T, g), f)

    def apply_X(self, f: JetOrTuple) -> JetOrTuple:
        return lift(lambda g: (apply_field(self.Z, g) + apply_field(self.Zbar, g)) / SQRT2, f)

    def apply_Y(self, f: JetOrTuple) -> JetOrTuple:
        return lift(lambda g: 1j * (apply_field(self.Z, g) - apply_field(self.Zbar, g)) / SQRT2, f)

    def apply(self, name: str, f: JetOrTuple) -> JetOrTuple:
        return getattr(self, f"apply_{name}")(f)

    @property
    def X(self) -> Vector:
        return tuple((z + zb) / SQRT2 for z, zb in zip(self.Z, self.Zbar))

    @property
    def Y(self) -> Vector:
        return tuple(1j * (z - zb) / SQRT2 for z, zb in zip(self.Z, self.Zbar))

    def coframe_determinant(self) -> Jet:
        return _det3((self.zeta, self.zetabar, self.theta_co))


# ── small jet linear algebra ─────────────────────────────────────────

def _det3(m) -> Jet:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _inverse3(m, what: str):
    values = np.array([[x.value for x in row] for row in m])
    cond = float(np.linalg.cond(values))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise DegenerateFrame(what, cond)
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            cof[i][j] = minor if (i + j) % 2 == 0 else -minor
    det = m[0][0] * cof[0][0] + m[0][1] * cof[0][1] + m[0][2] * cof[0][2]
    inv_det = 1.0 / det
    return tuple(tuple(cof[j][i] * inv_det for j in range(3)) for i in range(3))


# ── construction ─────────────────────────────────────────────────────

def _evaluate_chart(chart: ChartSpec, point, order: int):
    theta = tuple(ex.evaluate(t, point, order) for t in chart.theta)
    z_raw = tuple(ex.evaluate(z, point, order) for z in chart.z_raw)
    return theta, z_raw


def _reeb_field(theta: Vector, dtheta, point, frame_tol: float) -> Vector:
    """Solve θ(T) = 1, dθ(T, ∂_j) = 0 through the normal equations."""
    rows = [list(theta)] + [[dtheta[i][j] for i in range(3)] for j in range(3)]
    values = np.array([[x.value for x in row] for row in rows])
    cond = float(np.linalg.cond(values))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise DegenerateFrame("Reeb system", cond)
    normal = [[sum((rows[r][i] * rows[r][j] for r in range(1, 4)), rows[0][i] * rows[0][j])
               for j in range(3)] for i in range(3)]
    inv = _inverse3(normal, "Reeb normal matrix")
    reeb = tuple(pair(inv[i], theta) for i in range(3))
    residual = max([abs((pair(theta, reeb) - 1.0).value)]
                   + [abs(sum((dtheta[i][j] * reeb[i] for i in range(3)), 0.0 * reeb[0]).value)
                      for j in range(3)])
    if residual > frame_tol:
        raise DegenerateFrame("Reeb residual", residual)
    return reeb


@dataclass(frozen=True)
class StructureFunctions:
    a: Jet
    b: Jet
    c: Jet
    residuals: Dict[str, float] = field(default_factory=dict)


def _structure(Z: Vector, Zbar: Vector, T: Vector, zeta: Vector) -> StructureFunctions:
    zz = lie_bracket(Z, Zbar)
    zt = lie_bracket(Z, T)
    zbt = lie_bracket(Zbar, T)
    a = 1j * pair(zeta, zz)
    b = pair(zeta, zt)
    c = pair(zeta, zbt)
    abar, bbar, cbar = a.conj(), b.conj(), c.conj()
    residuals = {
        "bracket_Z_Zbar": max(abs((1j * zz[k] - (T[k] + a * Z[k] + abar * Zbar[k])).value) for k in range(3)),
        "bracket_Z_T": max(abs((zt[k] - (b * Z[k] + cbar * Zbar[k])).value) for k in range(3)),
        "bracket_Zbar_T": max(abs((zbt[k] - (c * Z[k] + bbar * Zbar[k])).value) for k in range(3)),
    }
    return StructureFunctions(a, b, c, residuals)


def build_frame(chart: ChartSpec, point: Sequence[float], order: int,
                frame_tol: float = FRAME_TOL) -> FrameData:
    """Normalised frame, coframe and structure functions as jets at ``point``.

    Frame fields carry order ``order - 1``; a, b, c carry ``order - 2``.
    """
    point = tuple(float(x) for x in point)
    if not chart.contains(point):
        raise DomainOutOfChart(f"{point} lies outside the domain of chart {chart.name!r}")
    theta, z_raw = _evaluate_chart(chart, point, order)

    contact = pair(theta, z_raw).max_abs()
    if contact > frame_tol:
        raise ContactViolation(contact, point)

    dtheta = exterior_derivative(theta)
    zbar_raw = tuple(z.conj() for z in z_raw)
    levi = (-1j * two_form(dtheta, z_raw, zbar_raw)).real
    if levi.value.real <= frame_tol:
        raise NotPseudoconvex(levi.value, point)

    scale = 1.0 / sqrt(levi)
    Z = tuple(z * scale for z in z_raw)
    Zbar = tuple(z.conj() for z in Z)
    T = _reeb_field(theta, dtheta, point, frame_tol)

    frame_matrix = [[Z[i], Zbar[i], T[i]] for i in range(3)]
    coframe = _inverse3(frame_matrix, "frame matrix")
    zeta, zetabar, theta_co = coframe

    sf = _structure(Z, Zbar, T, zeta)
    _log.debug("frame at %s: levi=%.6g a=%.6g b=%.6g c=%.6g",
               point, levi.value.real, sf.a.value, sf.b.value, sf.c.value)
    return FrameData(point=point, order=order, theta=theta, dtheta=dtheta,
                     Z=Z, Zbar=Zbar, T=T, zeta=zeta, zetabar=zetabar, theta_co=theta_co,
                     a=sf.a, b=sf.b, c=sf.c, levi=levi, chart=chart.name)


def structure_functions(frame: FrameData) -> StructureFunctions:
    return _structure(frame.Z, frame.Zbar, frame.T, frame.zeta)


# ── verification ─────────────────────────────────────────────────────

def _max_value(jets_: Iterable[Jet]) -> float:
    return max(abs(j.value) for j in jets_)


def verify_structure_equations(frame: FrameData) -> Dict[str, float]:
    """Pointwise residual magnitudes of the frame and coframe identities."""
    zeta, zetabar, theta = frame.zeta, frame.zetabar, frame.theta_co
    a, b, c = frame.a, frame.b, frame.c
    pairs = [(0, 1), (0, 2), (1, 2)]
    dzeta = exterior_derivative(zeta)
    dzetabar = exterior_derivative(zetabar)

    res = dict(structure_functions(frame).residuals)
    res["dtheta"] = _max_value(frame.dtheta[i][j] - 1j * wedge(zeta, zetabar, i, j) for i, j in pairs)
    res["dzeta"] = _max_value(
        dzeta[i][j] - (1j * a * wedge(zeta, zetabar, i, j) - b * wedge(zeta, theta, i, j)
                       - c * wedge(zetabar, theta, i, j))
        for i, j in pairs)
    res["dzetabar"] = _max_value(
        dzetabar[i][j] - (-1j * a.conj() * wedge(zetabar, zeta, i, j) - b.conj() * wedge(zetabar, theta, i, j)
                          - c.conj() * wedge(zeta, theta, i, j))
        for i, j in pairs)
    res["b_imaginary"] = abs((b + b.conj()).value)
    jacobi = (1j * frame.apply_Z(c) - 1j * frame.apply_Zbar(b) + frame.apply_T(a)
              - a * b - a.conj() * c)
    res["jacobi"] = abs(jacobi.value)

    fields = (frame.Z, frame.Zbar, frame.T)
    forms = (zeta, zetabar, theta)
    res["duality"] = max(abs(pair(forms[r], fields[s]).value - (1.0 if r == s else 0.0))
                         for r in range(3) for s in range(3))
    res["coframe_theta"] = _max_value(t - s for t, s in zip(frame.theta, theta))
    res["levi_normalised"] = abs((-1j * two_form(frame.dtheta, frame.Z, frame.Zbar)).value - 1.0)
    res["contact"] = abs(pair(frame.theta, frame.Z).value)
    res["reeb_theta"] = abs(pair(frame.theta, frame.T).value - 1.0)
    res["reeb_dtheta"] = max(abs(sum((frame.dtheta[i][j] * frame.T[i] for i in range(1, 3)),
                                     frame.dtheta[0][j] * frame.T[0]).value) for j in range(3))
    return res


# ── gauge and scaling ────────────────────────────────────────────────

def change_frame(chart: ChartSpec, v: ex.Expr, frame_tol: float = FRAME_TOL) -> ChartSpec:
    """The chart with Z_raw replaced by e^{−iv} Z_raw; v must be real."""
    worst = max(abs(ex.evaluate(v, p, 0).value.imag) for p in chart.probe_points())
    if worst > frame_tol:
        raise NonRealGauge(worst)
    phase = ex.Call("exp", ex.Binary("*", ex.Unary("neg", ex.ImagUnit()), v))
    z_raw = tuple(ex.Binary("*", phase, z) for z in chart.z_raw)
    return replace(chart, z_raw=z_raw, name=f"{chart.name}+gauge")


def verify_gauge_law(chart: ChartSpec, v: ex.Expr, points: Iterable[Sequence[float]],
                     order: int, frame_tol: float = FRAME_TOL) -> Dict[str, float]:
    """Largest residuals of a′ = e^{iv}(a − Z̄v), b′ = b + iTv, c′ = e^{2iv}c, T′ = T."""
    gauged = change_frame(chart, v, frame_tol)
    worst = {"a": 0.0, "b": 0.0, "c": 0.0, "T": 0.0}
    for p in points:
        f0 = build_frame(chart, p, order, frame_tol)
        f1 = build_frame(gauged, p, order, frame_tol)
        vj = ex.evaluate(v, p, order)
        phase = exp(1j * vj)
        checks = {
            "a": f1.a - phase * (f0.a - f0.apply_Zbar(vj)),
            "b": f1.b - (f0.b + 1j * f0.apply_T(vj)),
            "c": f1.c - phase * phase * f0.c,
        }
        for key, jet in checks.items():
            worst[key] = max(worst[key], abs(jet.value))
        worst["T"] = max(worst["T"], _max_value(t1 - t0 for t1, t0 in zip(f1.T, f0.T)))
    return worst


def scale_contact(chart: ChartSpec, lam: float) -> ChartSpec:
    """The pseudo-homothetic chart with contact form λθ."""
    if lam <= 0:
        raise ValueError(f"homothety factor must be positive, got {lam}")
    theta = tuple(ex.Binary("*", ex.Literal(complex(lam)), t) for t in chart.theta)
    return replace(chart, theta=theta, name=f"{chart.name}*{lam:g}")


# ── Webster metric ───────────────────────────────────────────────────

def webster_inner(frame: FrameData, v: Sequence[Jet], w: Sequence[Jet], kind: str = "bilinear") -> Jet:
    """g(V, W) = ζ(V)ζ̄(W) + ζ̄(V)ζ(W) + θ(V)θ(W); ``hermitian`` conjugates W."""
    if kind == "hermitian":
        w = tuple(x.conj() for x in w)
    elif kind != "bilinear":
        raise ValueError(f"kind must be 'bilinear' or 'hermitian', got {kind!r}")
    return (pair(frame.zeta, v) * pair(frame.zetabar, w)
            + pair(frame.zetabar, v) * pair(frame.zeta, w)
            + pair(frame.theta_co, v) * pair(frame.theta_co, w))


def webster_metric(frame: FrameData) -> np.ndarray:
    z, zb, t = (np.array([x.value for x in f]) for f in (frame.zeta, frame.zetabar, frame.theta_co))
    g = np.outer(z, zb) + np.outer(zb, z) + np.outer(t, t)
    return g.real


def is_sasakian(frames: Iterable[FrameData], tol: float) -> bool:
    """Vanishing torsion: c = 0 at every sampled frame."""
    return all(abs(f.c.value) < tol for f in frames)
