import numpy as np
import pytest

from crweier import expr as ex
from crweier.errors import NonRealImmersion, PrerequisiteFailed, WrongDimension
from crweier.immersion import (
    ImmersionMap,
    classify,
    cylinder_identities,
    harmonicity_chain,
    integrability_check,
    isometry_check,
    isotropy_check,
    pluriharmonic_check,
    predicted_curvatures,
    sasakian_constants,
    shape_spectrum,
    weierstrass_check,
)
from crweier.jets import Jet
from crweier.models import model
from crweier.sampling import SampleSet

TOL = 1e-8
LOOSE = 1e-6


def by_id(reports):
    return {r.condition_id: r for r in reports}


def failing(reports):
    return [r.condition_id for r in reports if not r.passed]


@pytest.mark.parametrize("name", ["sphere_samples", "cylinder_samples"])
def test_models_satisfy_weierstrass_conditions(name, request):
    samples = request.getfixturevalue(name)
    imm = ImmersionMap.from_chart(samples.chart)
    reports = weierstrass_check(imm, samples, TOL)
    assert len(reports) == 6
    assert failing(reports) == []
    assert not any("pluriharmonic" in r.condition_id for r in reports)
    assert isometry_check(imm, samples, TOL).passed


def test_scaled_sphere_breaks_normalisation(sphere_samples):
    imm = ImmersionMap.from_chart(sphere_samples.chart).scaled(1.1)
    reports = by_id(weierstrass_check(imm, sphere_samples, TOL))
    assert not reports["weierstrass.3"].passed
    assert reports["weierstrass.3"].detail["norm2_mean"] == pytest.approx(1.21)
    assert reports["weierstrass.2"].passed
    assert not isometry_check(imm, sphere_samples, TOL).passed


@pytest.mark.parametrize("eps", [0.0, 1e-4, 1e-2])
@pytest.mark.parametrize("bump", ["sin(u2)*cos(u3)", "u1^2"])
def test_weierstrass_conditions_agree_with_isometry(sphere_samples, eps, bump):
    chart = sphere_samples.chart
    sources = [ex.to_source(c) for c in chart.immersion]
    sources[1] = f"{sources[1]} + {eps!r}*({bump})"
    imm = ImmersionMap.from_sources(sources, chart)
    weierstrass_ok = all(r.passed for r in weierstrass_check(imm, sphere_samples, TOL))
    assert weierstrass_ok == isometry_check(imm, sphere_samples, TOL).passed
    assert weierstrass_ok == (eps == 0.0)


def test_pluriharmonic_models(sphere_samples, cylinder_samples):
    for samples in (sphere_samples, cylinder_samples):
        imm = ImmersionMap.from_chart(samples.chart)
        reports = pluriharmonic_check(imm, samples, TOL)
        assert failing(reports) == []
        assert "pluriharmonic.weierstrass_variant" in by_id(reports)


def test_pluriharmonic_check_on_heisenberg_functions(heisenberg):
    samples = SampleSet(heisenberg.chart, 6, seed=1, order=5)
    good = ImmersionMap.from_sources(heisenberg.expected["pluriharmonic"], heisenberg.chart)
    reports = by_id(pluriharmonic_check(good, samples, TOL))
    assert reports["pluriharmonic.2"].passed and reports["pluriharmonic.3"].passed

    bad_sources = heisenberg.expected["not_pluriharmonic"] + ("u1", "u2")
    bad = ImmersionMap.from_sources(bad_sources, heisenberg.chart)
    reports = by_id(pluriharmonic_check(bad, samples, TOL))
    assert max(reports["pluriharmonic.2"].max_residual, reports["pluriharmonic.3"].max_residual) > 1e-3
    assert not reports["pluriharmonic.weierstrass_variant"].passed


def test_integrability_of_exact_forms(cylinder_samples):
    imm = ImmersionMap.from_chart(cylinder_samples.chart)
    assert failing(integrability_check(imm, cylinder_samples, TOL)) == []


def test_integrability_detects_torsion(cylinder_samples):
    def constant_form(fr):
        return tuple(Jet.constant(v, fr.order - 1, fr.point) for v in (1j, 0, 0, 0))

    reports = by_id(integrability_check(constant_form, cylinder_samples, TOL))
    assert reports["integrability.11"].max_residual == pytest.approx(1.0)


@pytest.mark.parametrize("name", ["sphere_samples", "cylinder_samples"])
def test_harmonicity_chain_holds(name, request):
    samples = request.getfixturevalue(name)
    imm = ImmersionMap.from_chart(samples.chart)
    reports = by_id(harmonicity_chain(imm, samples, LOOSE))
    assert all(r.passed for r in reports.values())
    assert reports["harmonicity.3"].detail["length_mean"] == pytest.approx(1.0)
    assert reports["harmonicity.3"].spread < LOOSE
    assert "harmonicity.4" in reports


def test_harmonicity_needs_isometry(sphere_samples):
    imm = ImmersionMap.from_chart(sphere_samples.chart).scaled(1.1)
    with pytest.raises(PrerequisiteFailed):
        harmonicity_chain(imm, sphere_samples, LOOSE)


@pytest.mark.parametrize("name", ["sphere_samples", "cylinder_samples"])
def test_laplacian_image_is_isotropic(name, request):
    samples = request.getfixturevalue(name)
    imm = ImmersionMap.from_chart(samples.chart)
    reports = isotropy_check(imm, samples, LOOSE)
    assert len(reports) == 6
    assert failing(reports) == []


def test_dimension_checks(sphere):
    with pytest.raises(WrongDimension):
        ImmersionMap.from_sources(["u1", "u2"], sphere.chart)
    three = ImmersionMap.from_sources(["u1", "u2", "u3"], sphere.chart)
    samples = SampleSet(sphere.chart, 2, order=3)
    with pytest.raises(WrongDimension):
        isotropy_check(three, samples, LOOSE)
    with pytest.raises(WrongDimension):
        classify(three, samples, LOOSE)


def test_complex_components_rejected(sphere):
    imm = ImmersionMap.from_sources(["u1", "i*u2", "u3", "u1"], sphere.chart)
    with pytest.raises(NonRealImmersion):
        weierstrass_check(imm, SampleSet(sphere.chart, 2, order=3), TOL)


def test_sphere_shape_and_constants(sphere_samples):
    imm = ImmersionMap.from_chart(sphere_samples.chart)
    spectrum = shape_spectrum(imm, sphere_samples, LOOSE)
    np.testing.assert_allclose(spectrum.eigenvalues, 0.5, atol=LOOSE)
    assert spectrum.trace_residual < LOOSE
    assert failing(sasakian_constants(imm, sphere_samples, LOOSE)) == []


def test_cylinder_shape_and_identities(cylinder_samples):
    imm = ImmersionMap.from_chart(cylinder_samples.chart)
    spectrum = shape_spectrum(imm, cylinder_samples, LOOSE)
    np.testing.assert_allclose(spectrum.eigenvalues, np.tile([1.0, 0.0, 0.0], (len(cylinder_samples), 1)),
                               atol=LOOSE)
    np.testing.assert_allclose(spectrum.c_abs, 0.5, atol=1e-9)
    assert failing(cylinder_identities(imm, cylinder_samples, LOOSE)) == []


def test_predicted_curvatures():
    np.testing.assert_allclose(predicted_curvatures(0.0), [0.5, 0.5, 0.5])
    np.testing.assert_allclose(predicted_curvatures(0.5), [1.0, 0.0, 0.0])


@pytest.mark.parametrize(
    "name, params, kind",
    [
        ("sphere", {}, "Sphere"),
        ("sphere", {"chart": "b"}, "Sphere"),
        ("cylinder", {}, "Cylinder"),
        ("cylinder", {"pregauge": True}, "Cylinder"),
    ],
)
def test_classification(name, params, kind):
    desc = model(name, **params)
    samples = SampleSet(desc.chart, 8, seed=4, order=5)
    result = classify(desc.immersion, samples, LOOSE)
    assert result.kind == kind
    assert result.evidence["max_abs_c"] >= 0.0
    assert result.evidence["prediction_gap"] < LOOSE


def test_classify_needs_isometric_input(sphere_samples):
    imm = ImmersionMap.from_chart(sphere_samples.chart).scaled(1.1)
    with pytest.raises(PrerequisiteFailed):
        classify(imm, sphere_samples, LOOSE)
