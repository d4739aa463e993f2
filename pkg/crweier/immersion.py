# crweier/immersion.py
"""
Checks on candidate immersions f: M → ℝⁿ over a sampled chart.

Each check walks the sample frames in index order and reduces pointwise
residuals into ``ConditionReport``s. On ℂⁿ, ⟨u, v⟩ = Σ u_k v_k is the complex
bilinear form and ‖u‖² = Σ |u_k|².
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from crweier import expr as ex
from crweier.dto import ConditionReport, condition_report
from crweier.errors import (
    NonRealImmersion,
    NonSymmetric,
    PrerequisiteFailed,
    WrongDimension,
)
from crweier.frame import ChartSpec, FrameData
from crweier.glcomplex import (
    D_plus_01,
    D_prime_01,
    D_prime_10,
    D_second_10,
    laplacian_GL,
    laplacian_R,
)
from crweier.jets import Jet
from crweier.sampling import SampleSet
from crweier.settings import FRAME_TOL, SUITE_TOLERANCES
from crweier.verbosity import get_logger

_log = get_logger("crweier.immersion")

Vec = Tuple[Jet, ...]


# ── the map ──────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ImmersionMap:
    components: Tuple[ex.Expr, ...]
    chart: ChartSpec

    def __post_init__(self):
        if len(self.components) < 3:
            raise WrongDimension("immersion", len(self.components), expected=3)

    @property
    def n(self) -> int:
        return len(self.components)

    @classmethod
    def from_chart(cls, chart: ChartSpec) -> "ImmersionMap":
        if not chart.immersion:
            raise ValueError(f"chart {chart.name!r} declares no immersion")
        return cls(tuple(chart.immersion), chart)

    @classmethod
    def from_sources(cls, sources: Sequence[str], chart: ChartSpec) -> "ImmersionMap":
        return cls(tuple(ex.parse(s) for s in sources), chart)

    def scaled(self, factor: float) -> "ImmersionMap":
        lit = ex.Literal(complex(factor))
        return ImmersionMap(tuple(ex.Binary("*", lit, c) for c in self.components), self.chart)

    def at(self, point: Sequence[float], order: int) -> Vec:
        return tuple(ex.evaluate(c, point, order) for c in self.components)

    def check_real(self, points, frame_tol: float = FRAME_TOL) -> None:
        worst = max(abs(j.value.imag) for p in points for j in self.at(p, 0))
        if worst > frame_tol:
            raise NonRealImmersion(worst)


# ── pointwise helpers ────────────────────────────────────────────────

def _v(u: Vec) -> np.ndarray:
    return np.array([x.value for x in u], dtype=complex)


def bilinear(u: Vec, v: Vec) -> complex:
    return complex(np.sum(_v(u) * _v(v)))


def norm2(u: Vec) -> float:
    return float(np.sum(np.abs(_v(u)) ** 2))


def _conj(u: Vec) -> Vec:
    return tuple(x.conj() for x in u)


def _add(u: Vec, v: Vec) -> Vec:
    return tuple(x + y for x, y in zip(u, v))


def _sub(u: Vec, v: Vec) -> Vec:
    return tuple(x - y for x, y in zip(u, v))


def _scale(s: Union[complex, Jet], u: Vec) -> Vec:
    return tuple(s * x for x in u)


class PointValues:
    """Quantities of f at one frame, computed on first access."""

    def __init__(self, frame: FrameData, imm: ImmersionMap):
        self.frame = frame
        self.imm = imm

    @cached_property
    def f(self) -> Vec:
        return self.imm.at(self.frame.point, self.frame.order)

    @cached_property
    def phi(self) -> Vec:
        return self.frame.apply_Z(self.f)

    @cached_property
    def zbar_f(self) -> Vec:
        return self.frame.apply_Zbar(self.f)

    @cached_property
    def tf(self) -> Vec:
        return self.frame.apply_T(self.f)

    @cached_property
    def lap_gl(self) -> Vec:
        return laplacian_GL(self.frame, self.f)

    @cached_property
    def lap_r(self) -> Vec:
        return laplacian_R(self.frame, self.f)

    @cached_property
    def delta_omega(self) -> Vec:
        """δ(φζ) = −(Z̄φ − iaφ)."""
        fr = self.frame
        return tuple(-(z - 1j * fr.a * p) for z, p in zip(fr.apply_Zbar(self.phi), self.phi))

    @cached_property
    def corollary(self) -> Tuple[float, float]:
        """Residuals of TZf + bZf + iZ(Z̄Zf − iaZf) = 0 and cZf + iZ̄(Z̄Zf − iaZf) = 0."""
        return (D_prime_10(self.frame, self.phi).residual(),
                D_second_10(self.frame, self.phi).residual())


def _locals(imm: ImmersionMap, samples: SampleSet) -> List[PointValues]:
    frames = samples.frames()
    imm.check_real([fr.point for fr in frames])
    return [PointValues(fr, imm) for fr in frames]


def _report(cid: str, statement: str, values, tol: float, samples: SampleSet, **kw) -> ConditionReport:
    return condition_report(cid, statement, values, tol, seed=samples.seed, **kw)


def _spread(values: Sequence[float]) -> float:
    return float(np.std(np.asarray(values, dtype=float)))


# ── Weierstraß representation ────────────────────────────────────────

def weierstrass_check(imm: ImmersionMap, samples: SampleSet, tol: float) -> List[ConditionReport]:
    """Conditions on φ = Zf characterising isometric immersions."""
    pts = _locals(imm, samples)
    r1, r2, r3, r4, r5, r4s = ([] for _ in range(6))
    for p in pts:
        fr, phi = p.frame, p.phi
        phibar = _conj(phi)
        integr = _add(D_second_10(fr, phi).coeff, D_prime_01(fr, phibar).coeff)
        r1.append(float(np.max(np.abs(_v(integr)))))
        r2.append(abs(bilinear(phi, phi)))
        r3.append(abs(norm2(phi) - 1.0))
        r4.append(abs(norm2(p.delta_omega) - 0.5))
        z_phibar = tuple(z + 1j * fr.a.conj() * q for z, q in zip(fr.apply_Z(phibar), phibar))
        r5.append(abs(bilinear(z_phibar, phi)))
        # δ(ω − ω̄) = −iTf
        r4s.append(abs(norm2(_sub(p.delta_omega, _conj(p.delta_omega))) - 1.0))
    reports = [
        _report("weierstrass.1", "D''ω + D'ω̄ = 0", r1, tol, samples),
        _report("weierstrass.2", "<φ, φ> = 0", r2, tol, samples),
        _report("weierstrass.3", "‖φ‖² = 1", r3, tol, samples,
                detail={"norm2_mean": float(np.mean([norm2(p.phi) for p in pts]))}),
        _report("weierstrass.4", "‖Z̄φ − iaφ‖² = 1/2", r4, tol, samples),
        _report("weierstrass.5", "<Zφ̄ + iāφ̄, φ> = 0", r5, tol, samples),
        _report("weierstrass.4*", "‖δ(ω − ω̄)‖² = ‖Tf‖² = 1", r4s, tol, samples),
    ]
    _log.info("weierstrass on %s: %s", imm.chart.name, [r.passed for r in reports])
    return reports


def isometry_check(imm: ImmersionMap, samples: SampleSet, tol: float) -> ConditionReport:
    pts = _locals(imm, samples)
    parts = {"<Zf,Zf>": [], "<Tf,Zf>": [], "‖Tf‖²-1": [], "‖Zf‖²-1": []}
    for p in pts:
        parts["<Zf,Zf>"].append(abs(bilinear(p.phi, p.phi)))
        parts["<Tf,Zf>"].append(abs(bilinear(p.tf, p.phi)))
        parts["‖Tf‖²-1"].append(abs(norm2(p.tf) - 1.0))
        parts["‖Zf‖²-1"].append(abs(norm2(p.phi) - 1.0))
    combined = [max(vals) for vals in zip(*parts.values())]
    return _report("isometry", "f*(euclidean) = Webster metric", combined, tol, samples,
                   detail={k: max(v) for k, v in parts.items()})


def integrability_check(omega: Union[ImmersionMap, Callable[[FrameData], Vec]],
                        samples: SampleSet, tol: float) -> List[ConditionReport]:
    """D′ω + D⁺ω̄ = 0 and D″ω + D′ω̄ = 0 for a ℂⁿ-valued (1,0)-form ω = gζ."""
    if isinstance(omega, ImmersionMap):
        imm = omega
        coeff = lambda fr: fr.apply_Z(imm.at(fr.point, fr.order))  # noqa: E731
    else:
        coeff = omega
    r20, r11 = [], []
    for fr in samples.frames():
        g = coeff(fr)
        gbar = _conj(g)
        r20.append(float(np.max(np.abs(_v(_add(D_prime_10(fr, g).coeff, D_plus_01(fr, gbar).coeff))))))
        r11.append(float(np.max(np.abs(_v(_add(D_second_10(fr, g).coeff, D_prime_01(fr, gbar).coeff))))))
    return [
        _report("integrability.20", "D'ω + D+ω̄ = 0", r20, tol, samples),
        _report("integrability.11", "D''ω + D'ω̄ = 0", r11, tol, samples),
    ]


# ── CR pluriharmonicity ──────────────────────────────────────────────

def pluriharmonic_check(imm: ImmersionMap, samples: SampleSet, tol: float) -> List[ConditionReport]:
    pts = _locals(imm, samples)
    c2, c3, zl, zbl, variant = [], [], [], [], []
    for p in pts:
        fr = p.frame
        c2.append(p.corollary[0])
        c3.append(p.corollary[1])
        variant.append(max(max(p.corollary), abs(norm2(p.delta_omega) - 0.5)))
        zbar_lap = fr.apply_Zbar(p.lap_gl)
        tz = fr.apply_T(p.zbar_f)
        zbl.append(float(np.max(np.abs(_v(_sub(zbar_lap, _sub(_scale(1j, tz), _scale(1j * fr.b, p.zbar_f))))))))
        zl.append(float(np.max(np.abs(_v(_sub(fr.apply_Z(p.lap_gl), _scale(1j * fr.c.conj(), p.zbar_f)))))))
    reports = [
        _report("pluriharmonic.2", "TZf + bZf + iZ(Z̄Zf − iaZf) = 0", c2, tol, samples),
        _report("pluriharmonic.3", "cZf + iZ̄(Z̄Zf − iaZf) = 0", c3, tol, samples),
        _report("pluriharmonic.zbar_laplacian", "Z̄Δ_GL f = iTZ̄f − ibZ̄f", zbl, tol, samples),
        _report("pluriharmonic.z_laplacian", "ZΔ_GL f = ic̄Z̄f", zl, tol, samples),
        _report("pluriharmonic.weierstrass_variant", "Dω = 0 and ‖δω‖² = 1/2", variant, tol, samples),
    ]
    if reports[0].passed != reports[1].passed:
        _log.warning("pluriharmonic conditions disagree on %s: (2)=%s (3)=%s",
                     imm.chart.name, reports[0].passed, reports[1].passed)
    return reports


# ── harmonicity chain ────────────────────────────────────────────────

def harmonicity_chain(imm: ImmersionMap, samples: SampleSet, tol: float,
                      prerequisite_tol: Optional[float] = None) -> List[ConditionReport]:
    """Pluriharmonic ⟹ ⟨Δ_GL f, Δ_GL f⟩ = 0 ⟹ Δ_R f normal of constant length (⟺ parallel when n = 4)."""
    iso = isometry_check(imm, samples, prerequisite_tol or tol)
    if not iso.passed:
        raise PrerequisiteFailed("harmonicity_chain", "isometry")
    pts = _locals(imm, samples)

    h1, h2, h3, h4, pol, unit, lengths = ([] for _ in range(7))
    for p in pts:
        fr = p.frame
        h1.append(max(p.corollary))
        gl2 = bilinear(p.lap_gl, p.lap_gl)
        h2.append(abs(gl2))
        ortho = max(abs(bilinear(p.lap_r, v)) for v in (p.phi, p.zbar_f, p.tf))
        h3.append(ortho)
        length = math.sqrt(norm2(p.lap_r))
        lengths.append(length)
        unit.append(abs(length - 1.0))
        pol.append(abs(4.0 * gl2 - (norm2(p.lap_r) - norm2(p.tf) + 2j * bilinear(p.lap_r, p.tf))))
        if imm.n == 4:
            parallel = max(abs(bilinear(fr.apply(v, p.lap_r), p.lap_r)) for v in ("Z", "Zbar", "T"))
            h4.append(max(parallel, ortho))
    spread = _spread(lengths)

    reports = [
        _report("harmonicity.1", "f is CR pluriharmonic", h1, tol, samples),
        _report("harmonicity.2", "<Δ_GL f, Δ_GL f> = 0", h2, tol, samples),
        _report("harmonicity.3", "Δ_R f ⟂ TM with constant length", h3, tol, samples, spread=spread,
                detail={"length_mean": float(np.mean(lengths))}),
    ]
    if imm.n == 4:
        reports.append(_report("harmonicity.4", "Δ_R f is a parallel normal section", h4, tol, samples,
                               spread=spread))
    reports.append(_report("harmonicity.polarization",
                           "4<Δ_GL f, Δ_GL f> = ‖Δ_R f‖² − ‖Tf‖² + 2i<Δ_R f, Tf>", pol, tol, samples))
    reports.append(_report("harmonicity.unit_normal", "‖Δ_R f‖ = 1", unit, tol, samples))

    ok = {r.condition_id: r.passed for r in reports}
    consistent = (not (ok["harmonicity.1"] and not ok["harmonicity.2"])
                  and not (ok["harmonicity.2"] and not ok["harmonicity.3"]))
    if imm.n == 4:
        consistent = consistent and ok["harmonicity.3"] == ok["harmonicity.4"]
    reports.append(ConditionReport(
        condition_id="harmonicity.implications",
        statement="(1) ⟹ (2) ⟹ (3), and (3) ⟺ (4) when n = 4",
        tolerance=tol, passed=consistent, seed=samples.seed, count=len(pts), detail=ok,
    ))
    return reports


# ── n = 4 geometry ───────────────────────────────────────────────────

def _require_four(check: str, imm: ImmersionMap) -> None:
    if imm.n != 4:
        raise WrongDimension(check, imm.n)


_ISOTROPY = (("Z", "Z"), ("Z", "Zbar"), ("Z", "T"), ("Zbar", "Zbar"), ("Zbar", "T"), ("T", "T"))


def isotropy_check(imm: ImmersionMap, samples: SampleSet, tol: float,
                   prerequisite_tol: Optional[float] = None) -> List[ConditionReport]:
    """Total isotropy of the image of Δ_GL f for the complex bilinear form."""
    _require_four("isotropy_check", imm)
    pts = _locals(imm, samples)
    if max(abs(bilinear(p.lap_gl, p.lap_gl)) for p in pts) > (prerequisite_tol or tol):
        raise PrerequisiteFailed("isotropy_check", "harmonicity (2)")
    out = []
    for v, w in _ISOTROPY:
        vals = [abs(bilinear(p.frame.apply(v, p.lap_gl), p.frame.apply(w, p.lap_gl))) for p in pts]
        out.append(_report(f"isotropy.{v}{w}", f"<{v}Δ_GL f, {w}Δ_GL f> = 0", vals, tol, samples))
    return out


def sasakian_constants(imm: ImmersionMap, samples: SampleSet, tol: float) -> List[ConditionReport]:
    pts = _locals(imm, samples)
    targets = (
        ("sasakian.laplacian", "‖Δ_GL f‖² = 1/2", lambda p: p.lap_gl, 0.5),
        ("sasakian.zbar_laplacian", "‖Z̄Δ_GL f‖² = 1/4", lambda p: p.frame.apply_Zbar(p.lap_gl), 0.25),
        ("sasakian.t_laplacian", "‖TΔ_GL f‖² = 1/8", lambda p: p.frame.apply_T(p.lap_gl), 0.125),
    )
    return [_report(cid, st, [abs(norm2(fn(p)) - want) for p in pts], tol, samples)
            for cid, st, fn, want in targets]


def cylinder_identities(imm: ImmersionMap, samples: SampleSet, tol: float) -> List[ConditionReport]:
    """Identities of the non-Sasakian branch; X⁴f needs jets of order at least 5."""
    pts = _locals(imm, samples)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)

    def worst(u: Vec) -> float:
        return float(np.max(np.abs(_v(u))))

    rows: Dict[str, Tuple[str, list]] = {
        "cylinder.Y_laplacian": ("YΔ_GL f = 0", []),
        "cylinder.X_laplacian": ("XΔ_GL f = Z̄f/√2", []),
        "cylinder.XX": ("XXf = −Δ_R f", []),
        "cylinder.XXX": ("XXXf = −Xf", []),
        "cylinder.XXXX": ("X⁴f = Δ_R f", []),
        "cylinder.T_laplacian": ("TΔ_GL f = 0", []),
        "cylinder.a_imaginary": ("a + ā = 0", []),
    }
    for p in pts:
        fr = p.frame
        xf = fr.apply_X(p.f)
        xxf = fr.apply_X(xf)
        xxxf = fr.apply_X(xxf)
        rows["cylinder.Y_laplacian"][1].append(worst(fr.apply_Y(p.lap_gl)))
        rows["cylinder.X_laplacian"][1].append(worst(_sub(fr.apply_X(p.lap_gl), _scale(inv_sqrt2, p.zbar_f))))
        rows["cylinder.XX"][1].append(worst(_add(xxf, p.lap_r)))
        rows["cylinder.XXX"][1].append(worst(_add(xxxf, xf)))
        rows["cylinder.XXXX"][1].append(worst(_sub(fr.apply_X(xxxf), p.lap_r)))
        rows["cylinder.T_laplacian"][1].append(worst(fr.apply_T(p.lap_gl)))
        rows["cylinder.a_imaginary"][1].append(abs((fr.a + fr.a.conj()).value))
    return [_report(cid, st, vals, tol, samples) for cid, (st, vals) in rows.items()]


def predicted_curvatures(c_abs: float) -> np.ndarray:
    """Principal curvatures expected in a gauge where c is purely imaginary, descending."""
    k = c_abs
    return np.sort(np.array([(1 + 2 * k) / 2, (1 - 2 * k) / 2, (1 - 4 * k * k) / 2]))[::-1]


@dataclass
class ShapeSpectrum:
    eigenvalues: np.ndarray  # (count, 3), descending per row
    symmetry_defect: float
    trace_residual: float
    c_abs: List[float] = field(default_factory=list)


_REAL_FRAME = ("X", "Y", "T")


def shape_spectrum(imm: ImmersionMap, samples: SampleSet, tol: float) -> ShapeSpectrum:
    """Eigenvalues of h(V, W) = −⟨VWf, ν⟩ on (X, Y, T) with ν = Δ_R f / ‖Δ_R f‖."""
    _require_four("shape_spectrum", imm)
    pts = _locals(imm, samples)
    eig, defect, trace_res, c_abs = [], 0.0, 0.0, []
    for p in pts:
        fr = p.frame
        lap = _v(p.lap_r).real
        length = float(np.linalg.norm(lap))
        ortho = max(abs(bilinear(p.lap_r, v)) for v in (p.phi, p.zbar_f, p.tf))
        if length <= tol or ortho > tol:
            raise PrerequisiteFailed("shape_spectrum", "harmonicity (3)")
        nu = lap / length
        first = {v: fr.apply(v, p.f) for v in _REAL_FRAME}
        h = np.array([[-float(np.real(np.dot(_v(fr.apply(v, first[w])), nu))) for w in _REAL_FRAME]
                      for v in _REAL_FRAME])
        defect = max(defect, float(np.max(np.abs(h - h.T))))
        sym = (h + h.T) / 2.0
        values = np.sort(np.linalg.eigvalsh(sym))[::-1]
        ttf = _v(fr.apply_T(p.tf)).real
        trace_res = max(trace_res, abs(float(np.sum(values)) - (length - float(np.dot(ttf, nu)))))
        eig.append(values)
        c_abs.append(abs(fr.c.value))
    if defect > tol:
        raise NonSymmetric(defect)
    return ShapeSpectrum(np.array(eig), defect, trace_res, c_abs)


# ── classification ───────────────────────────────────────────────────

@dataclass
class Classification:
    kind: str  # Sphere | Cylinder | Inconclusive
    evidence: Dict[str, float] = field(default_factory=dict)


_SPHERE_SPECTRUM = np.array([0.5, 0.5, 0.5])
_CYLINDER_SPECTRUM = np.array([1.0, 0.0, 0.0])


def classify(imm: ImmersionMap, samples: SampleSet, tol: float,
             prerequisite_tol: float = SUITE_TOLERANCES["weierstrass"]) -> Classification:
    """Sphere, Cylinder or Inconclusive for a CR pluriharmonic isometric immersion into ℝ⁴."""
    _require_four("classify", imm)
    if not all(r.passed for r in weierstrass_check(imm, samples, prerequisite_tol)):
        raise PrerequisiteFailed("classify", "weierstrass")
    if not all(r.passed for r in pluriharmonic_check(imm, samples, prerequisite_tol)):
        raise PrerequisiteFailed("classify", "pluriharmonic")

    spectrum = shape_spectrum(imm, samples, prerequisite_tol)
    pts = _locals(imm, samples)
    c_vals = np.array([p.frame.c.value for p in pts])

    offsets = np.array([_v(_sub(p.f, _scale(2.0, p.lap_r))).real for p in pts])
    evidence = {
        "max_abs_c": float(np.max(np.abs(c_vals))),
        "center_spread": float(np.max(np.std(offsets, axis=0))),
        "sphere_spectrum_gap": float(np.max(np.abs(spectrum.eigenvalues - _SPHERE_SPECTRUM))),
        "cylinder_spectrum_gap": float(np.max(np.abs(spectrum.eigenvalues - _CYLINDER_SPECTRUM))),
        "abs_c_gap": float(np.max(np.abs(np.abs(c_vals) - 0.5))),
        "prediction_gap": float(np.max(np.abs(
            spectrum.eigenvalues - np.array([predicted_curvatures(abs(c)) for c in c_vals])))),
    }
    if (evidence["max_abs_c"] < tol and evidence["center_spread"] < tol
            and evidence["sphere_spectrum_gap"] < tol):
        return Classification("Sphere", evidence)

    if evidence["cylinder_spectrum_gap"] < tol and evidence["abs_c_gap"] < tol:
        # gauge with c' = i/2 gives b' = b − (i/2) Im(Tc / c)
        gauged = [p.frame.b.value - 0.5j * (p.frame.apply_T(p.frame.c).value / p.frame.c.value).imag
                  for p in pts]
        evidence["gauged_b_gap"] = float(max(abs(b - 0.5j) for b in gauged))
        if evidence["gauged_b_gap"] < tol:
            return Classification("Cylinder", evidence)
    return Classification("Inconclusive", evidence)
