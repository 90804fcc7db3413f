import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starlike_radii.classbounds import (
    ClassKind,
    center,
    center_radius,
    disc_bound,
    disc_radius,
    from_normalized,
    lemma_bound,
    normalize,
    side_constants,
)
from starlike_radii.errors import DomainError, ParameterError
from starlike_radii.extremal import ExtremalKind, ExtremalTag, logderiv


def test_normalize_extremes(k1_extreme, k2_extreme, k3_extreme):
    assert k1_extreme.params == (2.0,)
    assert k1_extreme.b == -1.0
    assert k2_extreme.params == (2.0, 2.0)
    assert k3_extreme.params == (1.0, 2.0)
    assert str(k2_extreme) == "K2(m=2, n=2)"


def test_normalize_keeps_raw_coefficients():
    spec = normalize("K3", 0.5, 0.5)
    assert spec.kind is ClassKind.K3
    assert spec.params == pytest.approx((0.5, 1.0))
    assert (spec.b, spec.c) == (0.5, 0.5)
    assert spec.has_raw
    assert not from_normalized("K3", 1.0, 0.5).has_raw


@pytest.mark.parametrize(
    "kind, b, c",
    [
        ("K1", 1.5, None),
        ("K2", 1.0, -1.0),
        ("K2", 0.5, None),
        ("K3", 0.0, 1.2),
        ("K4", 0.0, 0.0),
    ],
)
def test_normalize_rejects(kind, b, c):
    with pytest.raises(ParameterError):
        normalize(kind, b, c)


@pytest.mark.parametrize("kind, p1, p2", [("K1", 2.5, None), ("K2", 1.0, None), ("K3", 1.5, 0.0), ("K3", 0.5, -0.1)])
def test_from_normalized_rejects(kind, p1, p2):
    with pytest.raises(ParameterError):
        from_normalized(kind, p1, p2)


def test_center_and_inverse():
    assert center(0.0) == 1.0
    assert center_radius(center(0.3)) == pytest.approx(0.3)
    with pytest.raises(DomainError):
        center_radius(0.5)


def test_side_constants_reproduce_printed_digits():
    constants = side_constants()
    assert round(constants["parabolic_center_3_2"], 5) == 0.66874
    assert round(constants["lemniscate_center_sqrt2"], 6) == 0.643594
    assert round(constants["exponential_center_e"], 6) == 0.824495
    assert round(constants["exponential_center_cosh1"], 6) == 0.679792
    assert round(constants["nephroid_center_5_3"], 6) == 0.707107


def test_disc_bound_k1():
    bound = disc_bound(from_normalized("K1", 2.0), 0.5)
    assert bound.a == pytest.approx(1.133333, abs=1e-6)
    assert bound.R == pytest.approx(1.866667, abs=1e-6)


def test_disc_bound_k2_at_zero_parameters():
    spec = from_normalized("K2", 0.0, 0.0)
    assert disc_bound(spec, 0.1).R == pytest.approx(0.10001, rel=1e-4)
    assert disc_bound(spec, 0.1).R == pytest.approx(10 * 0.01 / (1 - 1e-4), rel=1e-12)


def test_disc_bound_at_zero_is_the_point_one():
    for spec in (from_normalized("K1", 1.0), from_normalized("K2", 1.0, 2.0), from_normalized("K3", 0.5, 1.0)):
        bound = disc_bound(spec, 0.0)
        assert (bound.a, bound.R) == (1.0, 0.0)


def test_disc_radius_is_vectorized():
    spec = from_normalized("K3", 1.0, 2.0)
    r = np.linspace(0.0, 0.5, 6)
    np.testing.assert_allclose(disc_radius(spec, r), [disc_bound(spec, x).R for x in r])
    with pytest.raises(DomainError):
        disc_radius(spec, [0.2, 1.0])


@given(
    kind=st.sampled_from(["K1", "K2", "K3"]),
    p1=st.floats(min_value=0.0, max_value=1.0),
    p2=st.floats(min_value=0.0, max_value=2.0),
    r=st.floats(min_value=0.01, max_value=0.9),
)
@settings(max_examples=200, deadline=None)
def test_disc_grows_with_radius(kind, p1, p2, r):
    spec = from_normalized(kind, p1, p2)
    inner, outer = disc_bound(spec, r), disc_bound(spec, r + 0.05)
    assert outer.a > inner.a
    assert outer.R > inner.R


@pytest.mark.parametrize("b, c", [(-1.0, -1.0), (-0.5, -0.5), (0.5, 0.5), (1.0, 1.0), (-0.5, -1.0)])
def test_extremal_images_stay_in_the_disc(b, c):
    families = [
        (normalize("K1", b), [ExtremalKind(ExtremalTag.K1_MOEBIUS, b), ExtremalKind(ExtremalTag.K1_ALT, b)]),
        (normalize("K2", b, c), [ExtremalKind(ExtremalTag.K2_MOEBIUS, b, c), ExtremalKind(ExtremalTag.K2_ALT, b, c)]),
    ]
    circle = np.exp(1j * np.linspace(0.0, 2 * np.pi, 720, endpoint=False))
    for r in np.linspace(0.05, 0.6, 12):
        for spec, kinds in families:
            disc = disc_bound(spec, r)
            for kind in kinds:
                distance = np.abs(logderiv(kind, r * circle) - disc.a).max()
                assert distance <= disc.R + 1e-9, f"{kind.tag.value} at r={r:.2f}"


def test_lemma_bound_values():
    assert lemma_bound(0.5, 0.0, 0.5) == pytest.approx(1.238095, abs=1e-6)
    assert lemma_bound(-0.5, 0.0, 0.5) == lemma_bound(0.5, 0.0, 0.5)
    assert lemma_bound(1.0, 0.0, 0.3) == pytest.approx(2 * 0.3 / (1 - 0.09))
    assert lemma_bound(0.0, 0.0, 0.3) == pytest.approx(4 * 0.09 / (1 - 0.3**4))
    assert lemma_bound(0.7, 0.4, 0.0) == 0.0


@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.6, 0.9])
def test_lemma_bound_grows_with_b(alpha):
    r = np.linspace(0.0, 0.95, 39)
    bounds = np.array([lemma_bound(b, alpha, r) for b in np.linspace(0.0, 1.0, 21)])
    assert (np.diff(bounds, axis=0) >= -1e-12).all()
    np.testing.assert_array_equal(lemma_bound(-0.75, alpha, r), lemma_bound(0.75, alpha, r))


@pytest.mark.parametrize("b, alpha, r", [(1.1, 0.0, 0.5), (0.5, 1.0, 0.5), (0.5, -0.1, 0.5), (0.5, 0.0, 1.0)])
def test_lemma_bound_domain(b, alpha, r):
    with pytest.raises(DomainError):
        lemma_bound(b, alpha, r)


def test_lemma_bound_vectorized():
    r = np.array([0.1, 0.4, 0.8])
    np.testing.assert_allclose(lemma_bound(0.3, 0.2, r), [lemma_bound(0.3, 0.2, x) for x in r])
    assert not math.isnan(lemma_bound(1.0, 0.99, 0.9))
