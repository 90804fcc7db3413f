import numpy as np
import pytest

from starlike_radii.classbounds import ClassKind, from_normalized, normalize
from starlike_radii.errors import DomainError, ParameterError, SingularityError, UnsupportedError
from starlike_radii.extremal import (
    Direction,
    ExtremalKind,
    ExtremalTag,
    certify_sharpness,
    check_membership,
    companion,
    evaluate,
    image_curve,
    logderiv,
    sharpness_point,
)
from starlike_radii.radius_poly import polynomial_radius
from starlike_radii.regions import RegionKind, RegionTag, all_regions, boundary_residual, contains_many

SHARP_VALUES = (-1.0, -0.5, 0.5, 1.0)


@pytest.mark.parametrize("b", SHARP_VALUES)
@pytest.mark.parametrize("region", all_regions((0.0, 0.5)), ids=str)
def test_k1_radii_are_sharp(b, region):
    spec = normalize(ClassKind.K1, b)
    rho = polynomial_radius(spec, region).rho
    report = certify_sharpness(spec, region, rho)
    assert report.passed, f"residual {report.residual:.3g} at {report.point}"
    assert abs(report.point.z) == pytest.approx(rho)


@pytest.mark.parametrize("b", SHARP_VALUES)
@pytest.mark.parametrize("region", all_regions((0.0, 0.5)), ids=str)
def test_k2_diagonal_radii_are_sharp(b, region):
    spec = normalize(ClassKind.K2, b, b)
    rho = polynomial_radius(spec, region).rho
    report = certify_sharpness(spec, region, rho)
    assert report.passed, f"residual {report.residual:.3g} at {report.point}"
    assert report.kind.is_k2


@pytest.mark.parametrize("tag, minimum", [(RegionTag.NEPHROID, 1.0), (RegionTag.SIGMOID, 1e-3)])
def test_published_k2_grouping_misses_the_boundary(k2_extreme, tag, minimum):
    region = RegionKind(tag)
    rho = polynomial_radius(k2_extreme, region).rho
    point, kind = sharpness_point(ClassKind.K2, region, -1.0, rho=rho, c=-1.0, as_published=True)
    assert point.direction is Direction.MINUS_I
    assert kind.tag is ExtremalTag.K2_MOEBIUS
    assert boundary_residual(region, logderiv(kind, point.z)) > minimum
    # the alternate extremal at +rho lands on the touch point
    point, kind = sharpness_point(ClassKind.K2, region, -1.0, rho=rho, c=-1.0)
    assert point.direction is Direction.PLUS
    assert boundary_residual(region, logderiv(kind, point.z)) < 1e-6


def test_sharpness_point_directions():
    parabolic, sine = RegionKind(RegionTag.PARABOLIC), RegionKind(RegionTag.SINE)
    assert sharpness_point("K1", parabolic, -0.5, rho=0.2)[0].z == pytest.approx(-0.2j)
    assert sharpness_point("K1", parabolic, 0.5, rho=0.2)[0].z == pytest.approx(0.2j)
    assert sharpness_point("K1", sine, -0.5, rho=0.2)[0].z == pytest.approx(0.2)
    point, kind = sharpness_point("K1", sine, 0.5, rho=0.2)
    assert point.z == pytest.approx(-0.2)
    assert kind == ExtremalKind(ExtremalTag.K1_ALT, 0.5)


@pytest.mark.parametrize(
    "class_kind, b, c",
    [("K3", -1.0, None), ("K1", 0.0, None), ("K2", -0.5, 0.5), ("K2", 0.25, 1.0)],
)
def test_sharpness_unsupported(class_kind, b, c):
    with pytest.raises(UnsupportedError):
        sharpness_point(class_kind, RegionKind(RegionTag.PARABOLIC), b, rho=0.2, c=c)


def test_sharpness_point_arguments():
    parabolic = RegionKind(RegionTag.PARABOLIC)
    with pytest.raises(DomainError):
        sharpness_point("K1", parabolic, -1.0, rho=1.0)
    with pytest.raises(ParameterError):
        sharpness_point("K2", parabolic, -1.0, rho=0.2)


def test_certification_needs_raw_coefficients():
    with pytest.raises(UnsupportedError):
        certify_sharpness(from_normalized("K1", 2.0), RegionKind(RegionTag.PARABOLIC), 0.2)


def test_certification_fails_off_the_radius(k1_extreme):
    parabolic = RegionKind(RegionTag.PARABOLIC)
    report = certify_sharpness(k1_extreme, parabolic, 0.15)
    assert not report.passed
    assert report.residual > report.tol


@pytest.mark.parametrize(
    "tag, b, c",
    [(ExtremalTag.K1_MOEBIUS, 1.5, None), (ExtremalTag.K2_ALT, 0.5, None), (ExtremalTag.K2_MOEBIUS, 1.0, 0.5)],
)
def test_extremal_kind_validation(tag, b, c):
    with pytest.raises(ParameterError):
        ExtremalKind(tag, b, c)


KINDS = [
    ExtremalKind(ExtremalTag.K1_MOEBIUS, -1.0),
    ExtremalKind(ExtremalTag.K1_ALT, 0.5),
    ExtremalKind(ExtremalTag.K2_MOEBIUS, -1.0, -1.0),
    ExtremalKind(ExtremalTag.K2_ALT, 0.5, 0.5),
]


@pytest.mark.parametrize("kind", KINDS, ids=lambda kind: kind.tag.value)
def test_logderiv_matches_numerical_derivative(kind):
    z = np.array([0.2 + 0.1j, -0.3j, 0.05 - 0.4j])
    h = 1e-6
    derivative = (evaluate(kind, z + h) - evaluate(kind, z - h)) / (2 * h)
    np.testing.assert_allclose(logderiv(kind, z), z * derivative / evaluate(kind, z), rtol=1e-7)
    assert logderiv(kind, 0.0) == 1.0


def test_logderiv_domain_and_guard():
    kind = KINDS[0]
    with pytest.raises(DomainError):
        logderiv(kind, 1.0)
    with pytest.raises(SingularityError):
        logderiv(kind, 0.1, guard=2.0)
    with pytest.raises(ParameterError):
        companion(kind, 0.1)


@pytest.mark.parametrize("kind", KINDS, ids=lambda kind: kind.tag.value)
def test_extremals_belong_to_their_class(kind):
    report = check_membership(kind, samples=10_000, seed=3)
    assert report.passed
    assert (report.min_ratio_real_part is None) is (not kind.is_k2)


def test_image_curve_starts_on_the_real_axis():
    kind = KINDS[1]
    curve = image_curve(kind, 0.3, samples=64)
    assert curve.shape == (64,)
    assert curve[0] == pytest.approx(logderiv(kind, 0.3))
    assert Direction.MINUS_I.unit == -1j


@pytest.mark.parametrize("b", SHARP_VALUES)
@pytest.mark.parametrize("region", all_regions((0.0, 0.5)), ids=str)
def test_extremal_image_is_inside_just_below_the_radius(b, region):
    for spec in (normalize(ClassKind.K1, b), normalize(ClassKind.K2, b, b)):
        rho = polynomial_radius(spec, region).rho
        _, kind = sharpness_point(spec.kind, region, b, rho=rho, c=spec.c)
        image = image_curve(kind, 0.99 * rho)
        assert image.shape == (720,)
        assert contains_many(region, image).all(), f"{spec} {region}"
