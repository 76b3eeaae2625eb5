import math

import numpy as np
import pytest

from etadirac.config import from_dict
from etadirac.suites import HEADER, SUITES, Row, run_suite


@pytest.fixture
def cfg():
    return from_dict({"numerics": {"samples": 20}})


def test_row_logic():
    assert Row("x", "p", 1e-16, 1e-15).passed
    assert not Row("x", "p", 2e-15, 1e-15).passed
    assert not Row("x", "p", float("nan"), 1.0).passed
    assert Row("x", "p", 0.5, 0.1, lower=True).passed
    assert not Row("x", "p", 0.05, 0.1, lower=True).passed
    assert Row("x", "p", 3.0, math.inf).passed
    assert len(Row("x", "p", 0.0, 0.0).as_tuple()) == len(HEADER)


@pytest.mark.parametrize("name", ["pauli", "cauchy", "commutator", "conformal"])
def test_fast_suites_pass(cfg, name):
    rows = run_suite(name, cfg, np.random.default_rng(1))
    assert rows
    failed = [r for r in rows if not r.passed]
    assert not failed, failed


def test_conformal_suite_with_moebius_map():
    cfg = from_dict({"domain": {"family": "conformal_image", "map": "moebius", "c": 0.3}})
    rows = SUITES["conformal"](cfg, np.random.default_rng(2))
    assert all(r.passed for r in rows)
    assert any("moebius" in r.parameter for r in rows)


def test_symmetry_suite_constant_eta():
    cfg = from_dict({"eta": {"value": 0.4}})
    rows = SUITES["symmetry"](cfg, np.random.default_rng(3), count=8, n_poly=3)
    assert all(r.passed for r in rows), [r for r in rows if not r.passed]


def test_unknown_suite(cfg):
    with pytest.raises(ValueError):
        run_suite("nope", cfg, np.random.default_rng(0))
