import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from etadirac.boundary import (BoundarySpec, ConstantEta, FourierEta, WeylEta, b_derivative, b_of,
                               beta_of, c2_regular, cone_points_in_closure, contains, frame_at,
                               from_samples, normal_tangent, signed_area, tangent_disc, unit_circle,
                               validate_eta, weyl_hypothesis_constants)
from etadirac.errors import DegenerateCurve, ZigzagPoint


class QuadraticGap:
    """``eta = pi/2 - theta^2`` (only evaluated near zero)."""

    def gap(self, theta):
        return np.asarray(theta, dtype=float) ** 2

    def __call__(self, theta):
        return np.pi / 2 - self.gap(theta)

    def derivative(self, theta):
        return -2 * np.asarray(theta, dtype=float)


def test_tangent_disc_frame_at_touching_point():
    frame = frame_at(tangent_disc(), 0.0)
    assert abs(frame.n - 1) < 1e-15 and abs(frame.t - 1j) < 1e-15
    assert abs(frame.point) < 1e-15


def test_half_angle_form_matches_direct_form():
    spec = tangent_disc(QuadraticGap())
    b = float(b_of(spec, 0.1))
    eta = mp.pi / 2 - mp.mpf("0.01")
    direct = (1 - mp.sin(eta)) / mp.cos(eta)
    assert abs(b - math.tan(0.005)) < 1e-15
    assert abs(b - float(direct)) < 1e-12
    assert abs(b - 5.0000417e-3) < 1e-10


def test_constant_b_matches_direct_form():
    for eta in (-1.2, -0.4, 0.0, 0.4, 1.0):
        spec = unit_circle(ConstantEta(eta))
        direct = (1 - math.sin(eta)) / math.cos(eta)
        assert abs(float(b_of(spec, 0.0)) - direct) < 1e-14


def test_min_abs_cos_for_sine_profile():
    spec = unit_circle(FourierEta(0.0, [], [0.3]))
    check = validate_eta(spec)
    assert check.ok
    assert abs(check.min_abs_cos - math.cos(0.3)) < 1e-15
    dense = np.linspace(0, 2 * np.pi, 200_001)
    assert abs(np.min(np.abs(np.cos(spec.eta(dense)))) - 0.9553365) < 1e-7


def test_zigzag_rejected():
    spec = unit_circle(ConstantEta(math.pi / 2))
    assert not validate_eta(spec).ok
    with pytest.raises(ZigzagPoint):
        b_of(spec, np.linspace(0, 1, 5))


def test_weyl_profile_values():
    spec = tangent_disc(WeylEta())
    chord2 = (2 * math.sin(0.1)) ** 2
    expected = math.tan(chord2 * math.exp(-chord2 / 2) / 2)
    assert abs(float(b_of(spec, 0.2)) - expected) < 1e-16
    assert abs(expected - 0.019542) < 1e-6
    assert float(b_of(spec, 0.0)) == 0.0


def test_weyl_hypothesis_constants_at_most_one():
    cb, cd = weyl_hypothesis_constants(tangent_disc())
    assert cb <= 1.0 and cd <= 1.0 + 1e-9
    assert abs(cb - 0.5) < 1e-3


@given(st.floats(min_value=-3, max_value=3, allow_nan=False))
def test_b_derivative_matches_finite_difference(theta):
    spec = unit_circle(FourierEta(0.1, [0.2], [0.3]))
    h = 1e-5
    fd = (b_of(spec, theta + h) - b_of(spec, theta - h)) / (2 * h)
    assert abs(b_derivative(spec, theta) - fd) < 1e-8


def test_weyl_gap_derivative_matches_finite_difference():
    eta = WeylEta()
    theta = np.linspace(-3, 3, 101)
    h = 1e-6
    fd = (eta.gap(theta + h) - eta.gap(theta - h)) / (2 * h)
    assert np.max(np.abs(eta.gap_derivative(theta) - fd)) < 1e-8


def test_beta_conventions_are_reciprocal():
    spec = unit_circle(FourierEta(0.0, [], [0.3]))
    theta = np.linspace(0, 6, 50)
    prod = beta_of(spec, theta, "v2_over_v1") * beta_of(spec, theta, "v1_over_v2")
    assert np.allclose(prod, 1.0, atol=1e-14)
    with pytest.raises(ValueError):
        beta_of(spec, theta, "nope")


def test_geometry_of_unit_circle():
    spec = unit_circle()
    assert abs(signed_area(spec) - math.pi) < 1e-12
    n, t = normal_tangent(spec, np.array([0.0, 1.0]))
    assert np.allclose(n, np.exp(1j * np.array([0.0, 1.0])))
    assert np.allclose(t, 1j * n)
    assert contains(spec, [0.5j, 1.5]).tolist() == [True, False]
    assert c2_regular(spec)


def test_from_samples_reproduces_circle():
    theta = 2 * np.pi * np.arange(32) / 32
    spec = from_samples(np.exp(1j * theta))
    th = np.linspace(0, 2 * np.pi, 17)
    assert np.allclose(spec.curve(th), np.exp(1j * th), atol=1e-13)
    assert c2_regular(spec)
    assert abs(signed_area(spec) - math.pi) < 1e-12


def test_invalid_curves():
    with pytest.raises(ValueError):
        from_samples(np.exp(-1j * 2 * np.pi * np.arange(16) / 16))
    with pytest.raises(DegenerateCurve):
        BoundarySpec(curve=lambda th: np.zeros_like(th, dtype=complex),
                     derivative=lambda th: np.zeros_like(th, dtype=complex),
                     eta=ConstantEta(0.0), kind="unit_circle")


def test_exterior_cone_at_touching_point():
    assert cone_points_in_closure(tangent_disc(), 0.5, 20_000) == 0
