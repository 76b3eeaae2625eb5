import math

import mpmath as mp
import numpy as np
import pytest

from etadirac.boundary import ConstantEta, FourierEta, tangent_disc, unit_circle
from etadirac.disc import (BoundaryOperator, assemble_boundary_matrix, bessel_j, boundary_residual,
                           default_bandwidth, first_eigenpairs, orthogonality_defect,
                           regularity_ratio, scan_spectrum, secular_roots, solve_disc,
                           trace_sobolev_profile)
from etadirac.errors import ResolutionError, ZigzagPoint
from etadirac.fourier import FourierVector, SpinorTrace

J0_ROOT = 2.404825557695773


def test_bessel_against_series_oracle(bessel_data):
    for m, x, ref in bessel_data["samples"]:
        assert abs(bessel_j(m, x) - ref) < 1e-14 * max(1.0, abs(ref))


def test_bessel_first_root(bessel_data):
    assert abs(bessel_data["j0_first_root"] - J0_ROOT) < 1e-14
    assert abs(bessel_j(0, J0_ROOT)) < 1e-15


def test_bessel_domain_checks():
    with pytest.raises(ValueError):
        bessel_j(301, 1.0)
    with pytest.raises(ValueError):
        bessel_j(0, -1.0)
    with pytest.raises(ValueError):
        bessel_j(0.5, 1.0)


@pytest.mark.parametrize("key", ["+0.0,+1", "+0.0,-1", "+0.4,+1", "+0.4,-1", "-0.4,+1", "-0.4,-1"])
def test_secular_roots_match_series_bisection_oracle(secular_data, key):
    eta, sgn = (float(x) for x in key.split(","))
    mine = secular_roots(eta, int(sgn), 15.0)
    ref = secular_data[key]
    assert [m for m, _ in mine] == [m for m, _ in ref]
    assert max(abs(a[1] - b[1]) for a, b in zip(mine, ref)) < 1e-11


def test_secular_eta_zero_smallest_root():
    m, k = secular_roots(0.0, 1, 3.0)[0]
    assert m == 0
    assert abs(bessel_j(1, k) - bessel_j(0, k)) < 1e-13


def test_sigma_min_vanishes_at_secular_roots():
    op = BoundaryOperator(unit_circle(ConstantEta(0.4)), 1, default_bandwidth(10))
    for _, k in secular_roots(0.4, 1, 10.0)[:8]:
        assert op.sigma_min(k) <= 1e-10


def _grouped(roots, tol=1e-8):
    out = []
    for _, k in roots:
        if out and abs(out[-1][0] - k) < tol:
            out[-1][1] += 1
        else:
            out.append([k, 1])
    return out


@pytest.mark.parametrize("eta", [0.0, 0.4])
def test_galerkin_matches_oracle_small_window(secular_data, eta):
    res = solve_disc(unit_circle(ConstantEta(eta)), 6.0)
    for sgn in (1, -1):
        ref = _grouped([mk for mk in secular_data[f"{eta:+.1f},{sgn:+d}"] if mk[1] <= 6.0])
        got = [(abs(e), m) for e, m in res.distinct() if np.sign(e) == sgn]
        assert len(got) == len(ref)
        for (k, m), (kr, mr) in zip(got, ref):
            assert abs(k - kr) < 1e-8 and m == mr


def test_reflected_angle_mirrors_spectrum():
    plus = solve_disc(unit_circle(ConstantEta(0.4)), 5.0, residuals=False).eigenvalues
    minus = solve_disc(unit_circle(ConstantEta(-0.4)), 5.0, residuals=False).eigenvalues
    assert np.allclose(sorted(plus), sorted(-np.array(minus)), atol=1e-9)


def test_grid_step_does_not_change_roots():
    spec = unit_circle(FourierEta(0.0, [], [0.3]))
    a = scan_spectrum(spec, 1, (0.01, 6.0), grid_step=0.01, residuals=False).eigenvalues
    b = scan_spectrum(spec, 1, (0.01, 6.0), grid_step=0.05, residuals=False).eigenvalues
    assert len(a) == len(b) and np.allclose(a, b, atol=1e-9)


def test_variable_profile_eigenpairs():
    spec = unit_circle(FourierEta(0.0, [], [0.3]))
    res = first_eigenpairs(spec, 20)
    assert len(res.eigenpairs) == 20
    assert all(np.isreal(p.energy) for p in res.eigenpairs)
    assert max(p.boundary_residual for p in res.eigenpairs) <= 1e-6
    assert max(p.interior_residual for p in res.eigenpairs) <= 1e-8
    assert orthogonality_defect(res.eigenpairs) <= 1e-8
    assert max(abs(p.energy) for p in res.eigenpairs) <= res.diagnostics["k_max"]


def _ground_mode_ratio_oracle(k):
    """``||u||_H1 / (||u|| + ||Tu||)`` for ``u = (J_0(kr), i J_1(kr) e^{i theta})`` by mpmath."""
    mp.mp.dps = 30
    J0 = lambda r: mp.besselj(0, k * r)
    J1 = lambda r: mp.besselj(1, k * r)
    dJ0 = lambda r: -k * mp.besselj(1, k * r)
    dJ1 = lambda r: k * (mp.besselj(0, k * r) - mp.besselj(2, k * r)) / 2
    l2 = 2 * mp.pi * mp.quad(lambda r: (J0(r) ** 2 + J1(r) ** 2) * r, [0, 1])
    grad = 2 * mp.pi * mp.quad(lambda r: (dJ0(r) ** 2 + dJ1(r) ** 2) * r + J1(r) ** 2 / r, [0, 1])
    return float(mp.sqrt(l2 + grad) / (mp.sqrt(l2) * (1 + k)))


def test_ground_mode_regularity_baseline():
    res = scan_spectrum(unit_circle(ConstantEta(0.0)), 1, (0.01, 2.0))
    p = res.eigenpairs[0]
    oracle = _ground_mode_ratio_oracle(p.k)
    assert abs(p.regularity_ratio - oracle) < 1e-12
    assert abs(p.regularity_ratio - 0.6216657655924316) < 1e-10   # regression baseline


def test_trace_saturation_and_negative_control():
    res = scan_spectrum(unit_circle(ConstantEta(0.0)), 1, (0.01, 2.0))
    assert trace_sobolev_profile(res.eigenpairs[0].field.trace())["saturated"]
    N = 4096
    n = np.arange(-N, N + 1)
    c = 1.0 / np.maximum(np.abs(n), 1)
    prof = trace_sobolev_profile(SpinorTrace(FourierVector(c), FourierVector(c)))
    assert not prof["saturated"]


def test_rejections():
    with pytest.raises(ZigzagPoint):
        BoundaryOperator(unit_circle(ConstantEta(math.pi / 2)), 1, 25)
    with pytest.raises(ValueError):
        BoundaryOperator(tangent_disc(ConstantEta(0.0)), 1, 25)
    op = BoundaryOperator(unit_circle(), 1, 25)
    with pytest.raises(ResolutionError):
        op.matrix(5.5)
    with pytest.raises(ValueError):
        secular_roots(0.0, 0, 5.0)


def test_matrix_helpers_and_residuals():
    spec = unit_circle(ConstantEta(0.0))
    M = assemble_boundary_matrix(2.0, 1, spec, 22)
    assert M.shape == (45, 45)
    res = scan_spectrum(spec, -1, (0.01, 3.0))
    for p in res.eigenpairs:
        assert boundary_residual(p.field, spec) < 1e-9
        assert math.isfinite(regularity_ratio(p.field))
    doc = res.as_document()
    assert len(doc["eigenpairs"]) == len(res.csv_rows()) == len(res.eigenpairs)
