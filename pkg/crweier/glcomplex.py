# crweier/glcomplex.py
"""
Garfield-Lee double complex of a three-dimensional pseudohermitian manifold,
written in a frame (Z, Z̄, T).

Every space is a line bundle, so a form is one coefficient against a fixed basis:

    (0,0): f        (1,0): g ζ        (0,1): g ζ̄
    (2,0): g ζ∧θ    (1,1): g ζ̄∧θ     (2,1): g vol

Coefficients may be ℂⁿ-valued (tuples of jets); operators act componentwise.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from crweier import expr as ex
from crweier.errors import InvalidBidegree, UndefinedOnBidegree
from crweier.frame import ChartSpec, FrameData, build_frame, lift
from crweier.jets import Jet
from crweier.sampling import halton_points
from crweier.verbosity import get_logger

_log = get_logger("crweier.glcomplex")

Bidegree = Tuple[int, int]
Coefficient = Union[Jet, Tuple[Jet, ...]]

BIDEGREES: Tuple[Bidegree, ...] = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (2, 1))

_STAR = {(0, 0): (2, 1), (1, 0): (2, 0), (0, 1): (1, 1),
         (2, 1): (0, 0), (2, 0): (1, 0), (1, 1): (0, 1)}


@dataclass(frozen=True)
class GLForm:
    bidegree: Bidegree
    coeff: Coefficient

    def __post_init__(self):
        if tuple(self.bidegree) not in BIDEGREES:
            raise InvalidBidegree(self.bidegree)

    def __add__(self, other: "GLForm") -> "GLForm":
        if other.bidegree != self.bidegree:
            raise InvalidBidegree(other.bidegree)
        return GLForm(self.bidegree, _zip(self.coeff, other.coeff, lambda x, y: x + y))

    def residual(self) -> float:
        """Largest value magnitude among the coefficient components."""
        parts = (self.coeff,) if isinstance(self.coeff, Jet) else self.coeff
        return max(abs(p.value) for p in parts)


def _zip(u: Coefficient, v: Coefficient, op: Callable[[Jet, Jet], Jet]) -> Coefficient:
    if isinstance(u, Jet):
        return op(u, v)
    return tuple(op(x, y) for x, y in zip(u, v))


# ── scalar formulas ──────────────────────────────────────────────────
# Each takes the frame and one scalar coefficient jet.

def _zbar_minus_ia(fr: FrameData, g: Jet) -> Jet:
    return fr.apply_Zbar(g) - 1j * fr.a * g


def _z_plus_iabar(fr: FrameData, g: Jet) -> Jet:
    return fr.apply_Z(g) + 1j * fr.a.conj() * g


def _D_prime_10(fr: FrameData, g: Jet) -> Jet:
    return -(fr.apply_T(g) + fr.b * g + 1j * fr.apply_Z(_zbar_minus_ia(fr, g)))


def _D_second_10(fr: FrameData, g: Jet) -> Jet:
    return -(fr.c * g + 1j * fr.apply_Zbar(_zbar_minus_ia(fr, g)))


def _D_prime_01(fr: FrameData, g: Jet) -> Jet:
    return -(fr.apply_T(g) + fr.b.conj() * g - 1j * fr.apply_Zbar(_z_plus_iabar(fr, g)))


def _D_plus_01(fr: FrameData, g: Jet) -> Jet:
    return -(fr.c.conj() * g - 1j * fr.apply_Z(_z_plus_iabar(fr, g)))


def _d_second_20(fr: FrameData, g: Jet) -> Jet:
    return -_zbar_minus_ia(fr, g)


_OPERATORS: Dict[Tuple[str, Bidegree], Tuple[Bidegree, Callable[[FrameData, Jet], Jet]]] = {
    ("d_prime", (0, 0)): ((1, 0), lambda fr, f: fr.apply_Z(f)),
    ("d_second", (0, 0)): ((0, 1), lambda fr, f: fr.apply_Zbar(f)),
    ("D_prime", (1, 0)): ((2, 0), _D_prime_10),
    ("D_second", (1, 0)): ((1, 1), _D_second_10),
    ("D_prime", (0, 1)): ((1, 1), _D_prime_01),
    ("D_plus", (0, 1)): ((2, 0), _D_plus_01),
    ("d_second", (2, 0)): ((2, 1), _d_second_20),
    ("d_prime", (1, 1)): ((2, 1), _z_plus_iabar),
    ("delta_prime", (1, 0)): ((0, 0), lambda fr, g: -_zbar_minus_ia(fr, g)),
    ("delta_prime", (2, 1)): ((1, 1), lambda fr, h: -fr.apply_Zbar(h)),
    ("delta_second", (0, 1)): ((0, 0), lambda fr, g: -_z_plus_iabar(fr, g)),
    ("delta_second", (2, 1)): ((2, 0), lambda fr, h: fr.apply_Z(h)),
}


def _apply(name: str, frame: FrameData, form: GLForm) -> GLForm:
    key = (name, tuple(form.bidegree))
    if key not in _OPERATORS:
        raise UndefinedOnBidegree(name, form.bidegree)
    target, formula = _OPERATORS[key]
    return GLForm(target, lift(lambda g: formula(frame, g), form.coeff))


# ── public operators ─────────────────────────────────────────────────

def d_prime(frame: FrameData, form: GLForm) -> GLForm:
    """d′ on functions and on (1,1); on (1,0) and (0,1) it is the middle operator D′."""
    if form.bidegree in ((1, 0), (0, 1)):
        return _apply("D_prime", frame, form)
    return _apply("d_prime", frame, form)


def d_second(frame: FrameData, form: GLForm) -> GLForm:
    if form.bidegree == (1, 0):
        return _apply("D_second", frame, form)
    return _apply("d_second", frame, form)


def D_prime_10(frame: FrameData, g: Coefficient) -> GLForm:
    return _apply("D_prime", frame, GLForm((1, 0), g))


def D_second_10(frame: FrameData, g: Coefficient) -> GLForm:
    return _apply("D_second", frame, GLForm((1, 0), g))


def D_prime_01(frame: FrameData, g: Coefficient) -> GLForm:
    return _apply("D_prime", frame, GLForm((0, 1), g))


def D_plus_01(frame: FrameData, g: Coefficient) -> GLForm:
    return _apply("D_plus", frame, GLForm((0, 1), g))


def d_second_20(frame: FrameData, g: Coefficient) -> GLForm:
    return _apply("d_second", frame, GLForm((2, 0), g))


def d_prime_11(frame: FrameData, g: Coefficient) -> GLForm:
    return _apply("d_prime", frame, GLForm((1, 1), g))


def rumin_D(frame: FrameData, form: GLForm) -> List[GLForm]:
    """Rumin differential split by bidegree (d on the outer degrees, D in the middle)."""
    bd = form.bidegree
    if bd == (0, 0):
        return [_apply("d_prime", frame, form), _apply("d_second", frame, form)]
    if bd == (1, 0):
        return [_apply("D_prime", frame, form), _apply("D_second", frame, form)]
    if bd == (0, 1):
        return [_apply("D_plus", frame, form), _apply("D_prime", frame, form)]
    if bd == (2, 0):
        return [_apply("d_second", frame, form)]
    if bd == (1, 1):
        return [_apply("d_prime", frame, form)]
    raise UndefinedOnBidegree("D", bd)


def star(form: GLForm) -> GLForm:
    return GLForm(_STAR[tuple(form.bidegree)], form.coeff)


def delta_prime(frame: FrameData, form: GLForm) -> GLForm:
    """Formal L² adjoint of d′ (defined on (1,0) and (2,1))."""
    return _apply("delta_prime", frame, form)


def delta_second(frame: FrameData, form: GLForm) -> GLForm:
    """Formal L² adjoint of d″ (defined on (0,1) and (2,1))."""
    return _apply("delta_second", frame, form)


def delta(frame: FrameData, form: GLForm) -> List[GLForm]:
    parts = []
    for op in (delta_prime, delta_second):
        try:
            parts.append(op(frame, form))
        except UndefinedOnBidegree:
            continue
    if not parts:
        raise UndefinedOnBidegree("delta", form.bidegree)
    return parts


def laplacian_GL(frame: FrameData, f: Coefficient) -> Coefficient:
    """Δ_GL f = −(ZZ̄ + iāZ̄) f."""
    return lift(lambda g: -(frame.apply_Z(frame.apply_Zbar(g)) + 1j * frame.a.conj() * frame.apply_Zbar(g)), f)


def laplacian_GL_bar(frame: FrameData, f: Coefficient) -> Coefficient:
    return lift(lambda g: -(frame.apply_Zbar(frame.apply_Z(g)) - 1j * frame.a * frame.apply_Z(g)), f)


def laplacian_R(frame: FrameData, f: Coefficient) -> Coefficient:
    """Δ_R f = −ZZ̄f − iāZ̄f − Z̄Zf + iaZf."""
    return _zip(laplacian_GL(frame, f), laplacian_GL_bar(frame, f), lambda x, y: x + y)


# ── identities ───────────────────────────────────────────────────────

def complex_identities(frame: FrameData, f: Jet, g: Jet) -> Dict[str, float]:
    """Pointwise residuals of the complex relations for a function f and a coefficient g."""
    df1 = GLForm((1, 0), frame.apply_Z(f))
    df2 = GLForm((0, 1), frame.apply_Zbar(f))
    zf, zbf = df1.coeff, df2.coeff

    res: Dict[str, float] = {}
    res["D'd''+D''d'"] = (D_prime_01(frame, zbf) + D_second_10(frame, zf)).residual()
    res["D'd'+D+d''"] = (D_prime_10(frame, zf) + D_plus_01(frame, zbf)).residual()
    res["d'D''+d''D'"] = (d_prime_11(frame, D_second_10(frame, g).coeff)
                          + d_second_20(frame, D_prime_10(frame, g).coeff)).residual()
    res["d'D'+d''D+"] = (d_prime_11(frame, D_prime_01(frame, g).coeff)
                         + d_second_20(frame, D_plus_01(frame, g).coeff)).residual()

    ddf = [piece for form in (df1, df2) for piece in rumin_D(frame, form)]
    by_degree: Dict[Bidegree, Jet] = {}
    for piece in ddf:
        by_degree[piece.bidegree] = piece.coeff if piece.bidegree not in by_degree \
            else by_degree[piece.bidegree] + piece.coeff
    res["Ddf"] = max(abs(c.value) for c in by_degree.values())

    tf = frame.apply_T(f)
    dp = delta_prime(frame, df1).coeff
    ds = delta_second(frame, df2).coeff
    res["Tf"] = abs((tf - (1j * dp - 1j * ds)).value)
    res["laplacian_GL"] = abs((laplacian_GL(frame, f) - ds).value)
    res["laplacian_R"] = abs((laplacian_R(frame, f) - (2.0 * laplacian_GL(frame, f) - 1j * tf)).value)
    res["star_star"] = float(not all(star(star(GLForm(bd, f))).bidegree == bd for bd in BIDEGREES))
    return res


def sasakian_witness(frame: FrameData, g: Jet) -> Dict[str, float]:
    """Residuals for ω = gζ being D-closed and δ-closed, next to |g| and |c|.

    A nonzero ω closed under both forces c = 0.
    """
    omega = GLForm((1, 0), g)
    return {
        "D_closed": max(p.residual() for p in rumin_D(frame, omega)),
        "delta_closed": max(p.residual() for p in delta(frame, omega)),
        "norm": abs(g.value),
        "torsion": abs(frame.c.value),
    }


# ── adjointness by quadrature ────────────────────────────────────────

JetFunction = Callable[[Sequence[float], int], Jet]


def _bump(domain, point, order: int) -> Jet:
    """Π (1 − s_k²)³ with s_k the coordinate rescaled to [−1, 1]; vanishes on the box boundary."""
    out = Jet.constant(1.0, order, point)
    for k, (lo, hi) in enumerate(domain):
        s = (Jet.variable(k, order, point) - (lo + hi) / 2.0) / ((hi - lo) / 2.0)
        out = out * (1.0 - s * s) ** 3
    return out


def _as_function(fn: Union[ex.Expr, str, JetFunction]) -> JetFunction:
    if isinstance(fn, str):
        fn = ex.parse(fn)
    if callable(fn):
        return fn
    return lambda point, order: ex.evaluate(fn, point, order)


def _gauss_points(domain, nodes: int):
    """Tensor Gauss-Legendre nodes and weights on the box."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    axes = [((hi - lo) / 2.0 * x + (hi + lo) / 2.0, (hi - lo) / 2.0 * w) for lo, hi in domain]
    for (p0, w0), (p1, w1), (p2, w2) in itertools.product(*(zip(*ax) for ax in axes)):
        yield (float(p0), float(p1), float(p2)), w0 * w1 * w2


def _halton_rule(domain, count: int, seed: int):
    volume = float(np.prod([hi - lo for lo, hi in domain]))
    for point in halton_points(domain, count, seed, margin=0.0):
        yield point, volume / count


def adjointness_spot_check(chart: ChartSpec, f, h, count: int = 8, seed: int = 0,
                           order: int = 3, rule: str = "gauss") -> Dict[str, float]:
    """Relative gaps between ∫⟨d′u, v ζ⟩ and ∫ u·conj(δ′(vζ)) (and the d″ analogue).

    u and v are ``f`` and ``h`` multiplied by a bump vanishing on the domain boundary,
    integrated against |det coframe|. With ``rule="gauss"`` ``count`` is the number of
    Gauss-Legendre nodes per axis; with ``rule="halton"`` it is the number of Halton points.
    """
    if rule == "gauss":
        quadrature = _gauss_points(chart.domain, count)
    elif rule == "halton":
        quadrature = _halton_rule(chart.domain, count, seed)
    else:
        raise ValueError(f"unknown quadrature rule {rule!r}; use 'gauss' or 'halton'")
    f_fn, h_fn = _as_function(f), _as_function(h)
    sums = np.zeros(4, dtype=complex)
    for point, weight in quadrature:
        frame = build_frame(chart, point, order)
        bump = _bump(chart.domain, frame.point, order)
        u = bump * f_fn(frame.point, order)
        v = bump * h_fn(frame.point, order)
        w = weight * abs(frame.coframe_determinant().value)
        vbar = v.conj().value
        sums += w * np.array([
            frame.apply_Z(u).value * vbar,
            u.value * delta_prime(frame, GLForm((1, 0), v)).coeff.conj().value,
            frame.apply_Zbar(u).value * vbar,
            u.value * delta_second(frame, GLForm((0, 1), v)).coeff.conj().value,
        ])

    def gap(x: complex, y: complex) -> float:
        return abs(x - y) / max(abs(x), abs(y), 1e-300)

    out = {"d_prime": gap(sums[0], sums[1]), "d_second": gap(sums[2], sums[3])}
    _log.info("adjointness spot check on %s (%s, %d): %s", chart.name, rule, count, out)
    return out
