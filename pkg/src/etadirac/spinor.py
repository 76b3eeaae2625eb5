"""Pointwise 2x2 spinor algebra at a boundary point.

Matrices are plain ``(2, 2)`` complex numpy arrays. Tangent and normal
vectors are stored as unit complex numbers ``t = t1 + i t2``.
"""

from dataclasses import dataclass

import numpy as np

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

IDENTITY = np.eye(2, dtype=complex)

_UNIT_TOL = 1e-12


def pauli(j):
    """Return a copy of the Pauli matrix ``sigma_j`` for ``j`` in 1..3."""
    if j not in (1, 2, 3):
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {j!r}")
    return _PAULI[j - 1].copy()


@dataclass(frozen=True)
class BoundaryFrame:
    """Outward normal, tangent and boundary angle at one boundary point.

    The pair (n, t) is positively oriented, i.e. ``t = i n``.
    """

    point: complex
    n: complex
    t: complex
    eta: float

    def __post_init__(self):
        if abs(abs(self.n) - 1.0) > _UNIT_TOL or abs(abs(self.t) - 1.0) > _UNIT_TOL:
            raise ValueError("normal and tangent must be unit complex numbers")
        if abs(self.t - 1j * self.n) > 1e-10:
            raise ValueError("frame must be positively oriented (t = i n)")

    @classmethod
    def from_normal(cls, n, eta, point=0j):
        n = complex(n) / abs(n)
        return cls(point=complex(point), n=n, t=1j * n, eta=float(eta))


def sigma_dot(v):
    """``v1 sigma_1 + v2 sigma_2`` for the planar vector ``v = v1 + i v2``."""
    return v.real * _PAULI[0] + v.imag * _PAULI[1]


def a_eta(frame):
    """``cos(eta) sigma.t + sin(eta) sigma_3``; hermitian with square one."""
    return np.cos(frame.eta) * sigma_dot(frame.t) + np.sin(frame.eta) * _PAULI[2]


def proj_pm(frame, sign):
    """Orthogonal projection ``(1 + sign * A_eta) / 2``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return 0.5 * (IDENTITY + sign * a_eta(frame))


def sigma_dot_n(frame):
    """``sigma.n``, which in complex form reads ``[[0, conj(n)], [n, 0]]``."""
    return sigma_dot(frame.n)


def anticommutator(a, b):
    return a @ b + b @ a


def commutator(a, b):
    return a @ b - b @ a


def identity_defects(frame):
    """Max-abs defects of every algebraic identity at ``frame``.

    Returns a dict keyed by a short identity name; all values should be at
    roundoff level.
    """
    A = a_eta(frame)
    sn = sigma_dot_n(frame)
    pp, pm = proj_pm(frame, 1), proj_pm(frame, -1)

    def dev(m):
        return float(np.max(np.abs(m)))

    return {
        "A hermitian": dev(A - A.conj().T),
        "A^2 = 1": dev(A @ A - IDENTITY),
        "{A, sigma.n} = 0": dev(anticommutator(A, sn)),
        "(sigma.n)^2 = 1": dev(sn @ sn - IDENTITY),
        "P+^2 = P+": dev(pp @ pp - pp),
        "P-^2 = P-": dev(pm @ pm - pm),
        "P+ P- = 0": dev(pp @ pm),
        "P+ + P- = 1": dev(pp + pm - IDENTITY),
        "P+ sigma.n = sigma.n P-": dev(pp @ sn - sn @ pm),
    }


def pauli_relation_defects():
    """Defects of ``{s_j, s_k} = 2 delta_jk`` and ``[s_j, s_k] = 2i eps_jkl s_l``."""
    out = {}
    for j in range(1, 4):
        for k in range(1, 4):
            sj, sk = pauli(j), pauli(k)
            target = 2.0 * IDENTITY if j == k else np.zeros((2, 2))
            out[f"{{s{j}, s{k}}}"] = float(np.max(np.abs(anticommutator(sj, sk) - target)))
            comm = np.zeros((2, 2), dtype=complex)
            for l in range(1, 4):
                comm += 2j * _levi_civita(j, k, l) * pauli(l)
            out[f"[s{j}, s{k}]"] = float(np.max(np.abs(commutator(sj, sk) - comm)))
    return out


def _levi_civita(j, k, l):
    return (j - k) * (k - l) * (l - j) / 2
