import math
from dataclasses import replace

import numpy as np
import pytest

from crweier import expr as ex
from crweier.errors import ContactViolation, DomainOutOfChart, NonRealGauge, NotPseudoconvex
from crweier.frame import (
    ChartSpec,
    build_frame,
    change_frame,
    is_sasakian,
    scale_contact,
    structure_functions,
    verify_gauge_law,
    verify_structure_equations,
    webster_inner,
    webster_metric,
)
from crweier.fuzz import fuzz_chart, random_polynomial
from crweier.glcomplex import laplacian_GL, laplacian_R
from crweier.jets import Jet, values
from crweier.models import chart_from_sources, model
from crweier.sampling import SampleSet

FRAME_TOL = 1e-8


def test_heisenberg_frame(heisenberg):
    fr = build_frame(heisenberg.chart, (0.2, -0.3, 0.1), 4)
    assert fr.levi.value == pytest.approx(2.0)
    np.testing.assert_allclose(values(fr.T), [0, 0, 1], atol=1e-12)
    for jet in (fr.a, fr.b, fr.c):
        assert jet.max_abs() < 1e-10


def test_cylinder_structure_constants(cylinder):
    u1 = 0.7
    fr = build_frame(cylinder.chart, (u1, 0.1, -0.4), 5)
    assert fr.levi.value == pytest.approx(2.0)
    assert abs(fr.a.value) < 1e-9
    assert fr.b.value == pytest.approx(0.5j, abs=1e-9)
    assert fr.c.value == pytest.approx(0.5j, abs=1e-9)
    np.testing.assert_allclose(values(fr.T), [0, math.cos(u1), math.sin(u1)], atol=1e-12)


def test_frame_orders(sphere):
    fr = build_frame(sphere.chart, sphere.chart.center(), 5)
    assert fr.Z[0].order == 4
    assert fr.a.order == 3


@pytest.mark.parametrize("name", ["heisenberg", "sphere", "cylinder"])
def test_structure_equations_hold_on_models(name):
    samples = SampleSet(model(name).chart, 6, seed=3, order=4)
    for fr in samples:
        residuals = verify_structure_equations(fr)
        worst = max(residuals, key=residuals.get)
        assert residuals[worst] < FRAME_TOL, worst


@pytest.mark.parametrize("seed", range(20))
def test_structure_equations_hold_on_random_charts(seed):
    chart = fuzz_chart(seed)
    for fr in SampleSet(chart, 3, seed=seed, order=4):
        residuals = verify_structure_equations(fr)
        assert max(residuals.values()) < FRAME_TOL


def test_corrupted_b_shows_in_jacobi_residual(heisenberg):
    fr = build_frame(heisenberg.chart, (0.2, -0.3, 0.1), 5)
    assert verify_structure_equations(fr)["jacobi"] < 1e-12
    bump = 1e-3j * Jet.variable(0, fr.b.order, fr.point)
    corrupted = replace(fr, b=fr.b + bump)
    assert verify_structure_equations(corrupted)["jacobi"] == pytest.approx(1e-3 / (2 * math.sqrt(2)), rel=1e-6)


def test_point_outside_domain(heisenberg):
    with pytest.raises(DomainOutOfChart):
        build_frame(heisenberg.chart, (5.0, 0.0, 0.0), 3)


def test_contact_violation():
    box = ((-1, 1),) * 3
    chart = chart_from_sources("bad", box, ("1", "0", "1"), ("0", "0", "1"))
    with pytest.raises(ContactViolation):
        build_frame(chart, (0.0, 0.0, 0.0), 3)


def test_wrong_orientation_is_not_pseudoconvex():
    box = ((-1, 1),) * 3
    chart = chart_from_sources("flipped", box, ("1/2", "i/2", "-i*u1 + u2"), ("-2*u2", "2*u1", "1"))
    with pytest.raises(NotPseudoconvex):
        build_frame(chart, (0.1, 0.2, 0.0), 3)


@pytest.mark.parametrize("name, gauge", [("heisenberg", "u1*u2 + sin(u3)"), ("sphere", "u2 - u1^2")])
def test_gauge_law(name, gauge):
    chart = model(name).chart
    points = SampleSet(chart, 5, seed=2).points
    worst = verify_gauge_law(chart, ex.parse(gauge), points, order=4)
    assert max(worst.values()) < FRAME_TOL


@pytest.mark.parametrize("seed", range(20))
def test_gauge_law_random_gauges(seed):
    name = ("heisenberg", "sphere", "cylinder")[seed % 3]
    rng = np.random.default_rng(seed)
    gauge = f"{random_polynomial(rng, 2, 0.5)} + sin({random_polynomial(rng, 1, 0.5)})"
    chart = model(name).chart
    worst = verify_gauge_law(chart, ex.parse(gauge), SampleSet(chart, 3, seed=seed).points, order=4)
    assert max(worst.values()) < FRAME_TOL


def test_gauge_recovers_cylinder_frame():
    pre = model("cylinder", pregauge=True).chart
    gauged = change_frame(pre, ex.parse("u1"))
    fr = build_frame(gauged, (0.3, 0.0, 0.5), 4)
    assert fr.b.value == pytest.approx(0.5j, abs=1e-9)
    assert fr.c.value == pytest.approx(0.5j, abs=1e-9)


def test_complex_gauge_rejected(heisenberg):
    with pytest.raises(NonRealGauge):
        change_frame(heisenberg.chart, ex.parse("i*u1"))


@pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
@pytest.mark.parametrize("laplacian", [laplacian_GL, laplacian_R])
def test_homothety_scales_laplacians_by_inverse_factor(sphere, lam, laplacian):
    point = (0.8, 0.4, -1.0)
    f = ex.evaluate(ex.parse("2*cos(u1)*cos(u2)"), point, 4)
    fr = build_frame(sphere.chart, point, 4)
    fr_scaled = build_frame(scale_contact(sphere.chart, lam), point, 4)
    lap = laplacian(fr, f).value
    assert abs(lap) > 0.1
    assert laplacian(fr_scaled, f).value == pytest.approx(lap / lam, rel=1e-9)


def test_scale_contact_rejects_nonpositive(sphere):
    with pytest.raises(ValueError):
        scale_contact(sphere.chart, 0.0)


def test_webster_metric_is_orthonormal_on_real_frame(sphere):
    fr = build_frame(sphere.chart, (0.6, 0.2, 0.3), 3)
    assert webster_inner(fr, fr.T, fr.T).value == pytest.approx(1.0)
    assert webster_inner(fr, fr.Z, fr.Z, kind="hermitian").value == pytest.approx(1.0)
    assert abs(webster_inner(fr, fr.Z, fr.Z).value) < 1e-12
    g = webster_metric(fr)
    np.testing.assert_allclose(g, g.T, atol=1e-12)
    assert np.all(np.linalg.eigvalsh(g) > 0)
    with pytest.raises(ValueError):
        webster_inner(fr, fr.T, fr.T, kind="sesquilinear")


def test_sasakian_detection(heisenberg, sphere_samples, cylinder_samples):
    assert is_sasakian(SampleSet(heisenberg.chart, 6, seed=1, order=4), 1e-8)
    assert is_sasakian(sphere_samples, 1e-8)
    assert not is_sasakian(cylinder_samples, 1e-8)


def test_probe_points_stay_inside(sphere):
    chart: ChartSpec = sphere.chart
    pts = chart.probe_points()
    assert len(pts) == 9
    assert all(chart.contains(p) for p in pts)


def test_structure_functions_match_frame(cylinder):
    fr = build_frame(cylinder.chart, (0.4, 0.0, 0.2), 5)
    sf = structure_functions(fr)
    for got, want in ((sf.a, fr.a), (sf.b, fr.b), (sf.c, fr.c)):
        np.testing.assert_allclose(got.coeffs, want.coeffs, atol=1e-12)
    assert sf.residuals
    assert max(sf.residuals.values()) < FRAME_TOL
