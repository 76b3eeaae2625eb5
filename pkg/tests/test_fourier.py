import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from etadirac.fourier import (SQRT_2PI, FourierVector, SpinorTrace, analyze, hs_norm,
                              l2_norm_quadrature, multiply, sobolev_weights, synthesize)

coeffs = st.integers(min_value=0, max_value=12).flatmap(
    lambda N: arrays(np.complex128, 2 * N + 1,
                     elements=st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                 allow_infinity=False)))


def test_cos_coefficients():
    f = FourierVector.from_function(np.cos, 4)
    expected = np.zeros(9, dtype=complex)
    expected[[3, 5]] = SQRT_2PI / 2
    assert np.allclose(f.coeffs, expected, atol=1e-15)


def test_hs_norm_examples():
    assert abs(hs_norm(FourierVector.basis(5, 8), 0.5) - math.sqrt(6)) < 1e-15
    f = FourierVector(np.array([1, 0, 1], dtype=complex))
    assert abs(hs_norm(f, -0.5) - 1.0) < 1e-15


def test_basis_product():
    e1 = FourierVector.basis(1, 1)
    p = multiply(e1, e1)
    expected = np.zeros(5, dtype=complex)
    expected[4] = 1 / SQRT_2PI
    assert np.allclose(p.coeffs, expected, atol=1e-16)


@given(coeffs, coeffs)
def test_multiply_matches_pointwise_product(a, b):
    f, g = FourierVector(a), FourierVector(b)
    M = 2 * (f.N + g.N + 2)
    prod = multiply(f, g)
    samples = synthesize(f, M) * synthesize(g, M)
    assert np.allclose(analyze(samples, prod.N).coeffs, prod.coeffs, atol=1e-12 * (1 + np.abs(a).max() * np.abs(b).max()) * M)


@given(coeffs)
def test_analyze_synthesize_roundtrip(a):
    f = FourierVector(a)
    assert np.allclose(analyze(synthesize(f, 2 * f.N + 2), f.N).coeffs, a, atol=1e-12 * (1 + np.abs(a).max()))


@given(coeffs)
def test_parseval(a):
    f = FourierVector(a)
    samples = synthesize(f, 2 * f.N + 2)
    assert abs(l2_norm_quadrature(samples) - hs_norm(f, 0)) <= 1e-12 * (1 + hs_norm(f, 0))


@given(coeffs)
def test_sobolev_norms_monotone_in_s(a):
    f = FourierVector(a)
    assert hs_norm(f, -0.5) <= hs_norm(f, 0) + 1e-12 <= hs_norm(f, 0.5) + 2e-12


@given(coeffs)
def test_evaluation_matches_synthesis(a):
    f = FourierVector(a)
    M = 2 * f.N + 3
    theta = 2 * np.pi * np.arange(M) / M
    assert np.allclose(f(theta), synthesize(f, M), atol=1e-12 * (1 + np.abs(a).sum()))


def test_resize_and_arithmetic():
    f = FourierVector(np.arange(5, dtype=complex))
    g = f.resize(4)
    assert g.N == 4 and g.coeff(2) == 4 and g.coeff(4) == 0
    assert f.resize(1).coeffs.tolist() == [1, 2, 3]
    assert np.array_equal((f + g).coeffs, 2 * g.coeffs)
    assert np.array_equal((f - f).coeffs, np.zeros(5))
    assert np.array_equal((-f).coeffs, -f.coeffs)
    assert f.coeff(9) == 0


def test_weights():
    assert np.array_equal(sobolev_weights(2, 1.0), [3, 2, 1, 2, 3])


def test_validation():
    with pytest.raises(ValueError):
        FourierVector(np.zeros(4))
    with pytest.raises(ValueError):
        FourierVector(np.array([np.nan]))
    with pytest.raises(ValueError):
        FourierVector.basis(3, 2)
    with pytest.raises(ValueError):
        analyze(np.zeros(7))
    with pytest.raises(ValueError):
        analyze(np.zeros(8), 4)
    with pytest.raises(ValueError):
        synthesize(FourierVector.zeros(4), 5)
    with pytest.raises(ValueError):
        SpinorTrace(FourierVector.zeros(1), FourierVector.zeros(2))


def test_spinor_trace_roundtrip():
    tr = SpinorTrace(FourierVector.basis(1, 2), FourierVector.basis(-2, 2))
    back = SpinorTrace.from_array(tr.as_array())
    assert np.array_equal(back.as_array(), tr.as_array())
