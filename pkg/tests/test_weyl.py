import math

import numpy as np
import pytest
from scipy import integrate

from etadirac.errors import ConvergenceFailure
from etadirac.weyl import (Cutoff, WeylConfig, apriori_radius, boundary_defect, certify,
                           certify_sequence, extension_constants, measure, weyl_domain_checks)


def test_cutoff_plateaus_and_derivative_bound():
    chi = Cutoff()
    assert chi(np.array([0.4]))[0] == 1.0 and chi(np.array([1.1]))[0] == 0.0
    assert chi.max_derivative() <= 3.0


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_cutoff_against_adaptive_quadrature():
    chi = Cutoff(0.1)
    bump = lambda u: math.exp(-0.1 / (u * (1 - u))) if 0 < u < 1 else 0.0
    opts = dict(epsabs=1e-16, epsrel=1e-14, limit=200)
    total = integrate.quad(bump, 0, 1, **opts)[0]
    for x in (0.5001, 0.55, 0.7, 0.9, 0.99):
        ref = integrate.quad(bump, 2 * x - 1, 1, **opts)[0] / total
        assert abs(chi(np.array([x]))[0] - ref) < 1e-12
    assert abs(chi.max_derivative() - 2 * math.exp(-0.4) / total) < 1e-9
    assert abs(chi.max_derivative() - 2.708) < 1e-3
    with pytest.raises(ValueError):
        Cutoff(0.0)


def test_domain_hypotheses():
    chk = weyl_domain_checks(n_points=20_000)
    assert chk["hypotheses_ok"] and chk["cone_ok"]
    assert abs(chk["t_at_touching_point"] - 1j) < 1e-15
    cb, ct = extension_constants()
    assert abs(cb - 0.5) < 1e-2 and ct <= 1.0 + 1e-6


@pytest.mark.parametrize("n", [1, 2, 4])
def test_boundary_condition_exact(n):
    assert boundary_defect(n, 0.01) < 1e-14


def test_quotient_is_scale_invariant():
    cfg = dict(n=2, R=0.5, s=0.02)
    a = measure(WeylConfig(**cfg))
    b = measure(WeylConfig(**cfg, scale=1e3))
    assert abs(a.quotient - b.quotient) <= 1e-12 * a.quotient
    assert abs(b.norm_v / a.norm_v - 1e3) < 1e-9


def test_norm_grows_while_cutoff_term_stays_bounded():
    n, R = 2, 0.5
    rows = []
    for j in range(3, 12, 2):
        s = R * 2.0 ** -j
        m = measure(WeylConfig(n=n, R=R, s=s, scale=s ** -n))
        rows.append((m.norm_v, m.cutoff_term, m.quotient))
    norms, cut, quot = zip(*rows)
    assert all(b > a for a, b in zip(norms, norms[1:]))
    assert max(cut) < 1.5 * min(cut)
    assert all(b < a for a, b in zip(quot, quot[1:]))


def test_certified_sequence():
    reports = certify_sequence(4)
    for r in reports:
        assert r.certified and r.quotient <= 1 / r.n and r.agreement < 0.01
    masses = [r.mass_outside[0.05] for r in reports]
    assert all(b < a for a, b in zip(masses, masses[1:]))
    assert reports[0].quotient < 1


def test_coarse_quadrature_is_caught():
    with pytest.raises(ConvergenceFailure) as info:
        certify(1, order=2)
    assert "disagreement" in str(info.value) and info.value.trace


def test_apriori_radius_rule_exhausts_ladder_at_n1():
    # the sufficient radius from the sampled constants is too small to certify n = 1
    with pytest.raises(ConvergenceFailure):
        certify(1, radius_rule="apriori")
    assert apriori_radius(4, 0.5, 1.0) < 0.05


def test_validation():
    with pytest.raises(ValueError):
        WeylConfig(n=0, R=0.5, s=0.1)
    with pytest.raises(ValueError):
        WeylConfig(n=1, R=0.6, s=0.1)
    with pytest.raises(ValueError):
        WeylConfig(n=1, R=0.5, s=0.0)
    with pytest.raises(ValueError):
        certify_sequence(0)
    with pytest.raises(ValueError):
        certify_sequence(7)
    with pytest.raises(ValueError):
        certify(1, radius_rule="nope")
