"""Interior spinor fields with analytic Wirtinger derivatives.

Every field exposes ``value``, ``dz`` and ``dzbar`` returning arrays of
shape ``(2, ...)``, and ``apply_T`` for ``T = -2i [[0, d_z], [d_zbar, 0]]``.
"""

import numpy as np
from scipy.special import jv

from .fourier import SQRT_2PI, FourierVector, SpinorTrace
from .quadrature import CircleQuadrature, DiscQuadrature


class SpinorField:
    def value(self, z):
        raise NotImplementedError

    def dz(self, z):
        raise NotImplementedError

    def dzbar(self, z):
        raise NotImplementedError

    def apply_T(self, z):
        return -2j * np.stack([self.dz(z)[1], self.dzbar(z)[0]])

    def evaluate(self, quad):
        """``(value, dz, dzbar)`` at the quadrature nodes."""
        return self.value(quad.z), self.dz(quad.z), self.dzbar(quad.z)


class PolynomialSpinor(SpinorField):
    """Components ``sum_{j,k} a[j, k] z^j conj(z)^k``."""

    def __init__(self, c1, c2):
        self.c = [np.atleast_2d(np.asarray(c1, dtype=complex)),
                  np.atleast_2d(np.asarray(c2, dtype=complex))]

    @classmethod
    def random(cls, degree, rng):
        def one():
            a = rng.normal(size=(degree + 1, degree + 1)) + 1j * rng.normal(size=(degree + 1, degree + 1))
            j, k = np.indices(a.shape)
            a[j + k > degree] = 0
            return a
        return cls(one(), one())

    @staticmethod
    def _eval(a, z):
        z = np.asarray(z, dtype=complex)
        zb = np.conj(z)
        out = np.zeros(z.shape, dtype=complex)
        for j in range(a.shape[0]):
            for k in range(a.shape[1]):
                if a[j, k] != 0:
                    out = out + a[j, k] * z ** j * zb ** k
        return out

    @staticmethod
    def _d(a, axis):
        # differentiate the power along the given axis
        d = np.zeros_like(a)
        if axis == 0:
            d[:-1, :] = a[1:, :] * np.arange(1, a.shape[0])[:, None]
        else:
            d[:, :-1] = a[:, 1:] * np.arange(1, a.shape[1])[None, :]
        return d

    def value(self, z):
        return np.stack([self._eval(a, z) for a in self.c])

    def dz(self, z):
        return np.stack([self._eval(self._d(a, 0), z) for a in self.c])

    def dzbar(self, z):
        return np.stack([self._eval(self._d(a, 1), z) for a in self.c])


class FourierBesselSpinor(SpinorField):
    """``sum_m c_m (J_m(kr) e^{i m theta}, i sgn J_{m+1}(kr) e^{i(m+1) theta})``.

    Each term solves ``T u = sgn k u``; derivatives follow from
    ``d_zbar (J_m e^{i m theta}) = -(k/2) J_{m+1} e^{i(m+1) theta}`` and
    ``d_z (J_m e^{i m theta}) = (k/2) J_{m-1} e^{i(m-1) theta}``.
    """

    def __init__(self, k, sgn, coeffs, N=None):
        self.k = float(k)
        self.sgn = int(sgn)
        coeffs = np.asarray(coeffs, dtype=complex)
        self.N = (coeffs.size - 1) // 2 if N is None else N
        self.coeffs = coeffs
        self.m = np.arange(-self.N, self.N + 1)

    @property
    def energy(self):
        return self.sgn * self.k

    def _modes(self, z, shift):
        """``sum_m w_m J_{m+shift}(kr) e^{i(m+shift) theta}`` for weights ``w``."""
        z = np.asarray(z, dtype=complex)
        r, th = np.abs(z), np.angle(z)
        order = self.m + shift
        J = jv(order[:, None], self.k * r.ravel()[None, :])
        ph = np.exp(1j * np.multiply.outer(order, th.ravel()))
        return (J * ph).reshape((order.size,) + z.shape)

    def _combine(self, basis, w):
        return np.tensordot(w, basis, axes=(0, 0))

    def value(self, z):
        c = self.coeffs
        return np.stack([self._combine(self._modes(z, 0), c),
                         self._combine(self._modes(z, 1), 1j * self.sgn * c)])

    def dzbar(self, z):
        c, h = self.coeffs, self.k / 2
        return np.stack([self._combine(self._modes(z, 1), -h * c),
                         self._combine(self._modes(z, 2), -h * 1j * self.sgn * c)])

    def dz(self, z):
        c, h = self.coeffs, self.k / 2
        return np.stack([self._combine(self._modes(z, -1), h * c),
                         self._combine(self._modes(z, 0), h * 1j * self.sgn * c)])

    def evaluate(self, quad):
        """Tensor-product evaluation on a polar grid: Bessel tables on the radial nodes only."""
        if getattr(quad, "r", None) is None:
            return super().evaluate(quad)
        orders = np.arange(-self.N - 1, self.N + 3)
        J = jv(orders[:, None], self.k * quad.r[None, :])
        ph = np.exp(1j * np.multiply.outer(orders, quad.theta))

        def combine(shift, w):
            rows = self.m + shift + self.N + 1
            return ((w[:, None] * J[rows]).T @ ph[rows]).ravel()

        c, h, i_s = self.coeffs, self.k / 2, 1j * self.sgn
        value = np.stack([combine(0, c), combine(1, i_s * c)])
        dzbar = np.stack([combine(1, -h * c), combine(2, -h * i_s * c)])
        dz = np.stack([combine(-1, h * c), combine(0, h * i_s * c)])
        return value, dz, dzbar

    def trace(self):
        """Boundary trace at bandwidth ``N + 1``."""
        c1 = np.zeros(2 * self.N + 3, dtype=complex)
        c2 = np.zeros(2 * self.N + 3, dtype=complex)
        idx = self.m + self.N + 1
        c1[idx] = SQRT_2PI * self.coeffs * jv(self.m, self.k)
        c2[idx + 1] = SQRT_2PI * 1j * self.sgn * self.coeffs * jv(self.m + 1, self.k)
        return SpinorTrace(FourierVector(c1), FourierVector(c2))

    def scaled(self, factor):
        return FourierBesselSpinor(self.k, self.sgn, self.coeffs * factor, self.N)


def t_from(dz, dzbar):
    return -2j * np.stack([dz[1], dzbar[0]])


def inner(u, v, quad):
    """``<u, v>_{L^2(D)}``, antilinear in ``u``, by quadrature."""
    return complex(quad.integrate(np.sum(np.conj(u.evaluate(quad)[0]) * v.evaluate(quad)[0], axis=0)))


def norms(u, quad):
    """``||u||``, ``||T u||`` and ``||grad u||`` from one evaluation.

    Uses ``|grad f|^2 = 2 (|d_z f|^2 + |d_zbar f|^2)``.
    """
    val, dz, dzb = u.evaluate(quad)
    sq = lambda a: float(np.sqrt(quad.integrate(np.sum(np.abs(a) ** 2, axis=0))))
    grad = float(np.sqrt(quad.integrate(np.sum(2 * (np.abs(dz) ** 2 + np.abs(dzb) ** 2), axis=0))))
    return {"l2": sq(val), "T": sq(t_from(dz, dzb)), "grad": grad}


def l2_norm(u, quad):
    return norms(u, quad)["l2"]


def t_norm(u, quad):
    return norms(u, quad)["T"]


def gradient_norm(u, quad):
    return norms(u, quad)["grad"]


def boundary_pairing(u, v, cquad):
    """``int_S <u, sigma.n v> ds`` with ``sigma.n v = (conj(n) v2, n v1)``."""
    z = cquad.z
    uu, vv = u.value(z), v.value(z)
    integrand = np.conj(uu[0]) * np.conj(z) * vv[1] + np.conj(uu[1]) * z * vv[0]
    return complex(cquad.integrate(integrand))


def _symmetry_terms(u, v, nr, nt):
    quad = DiscQuadrature.build(nr, nt)
    lhs = complex(quad.integrate(np.sum(np.conj(u.value(quad.z)) * v.apply_T(quad.z), axis=0)))
    rhs = complex(quad.integrate(np.sum(np.conj(u.apply_T(quad.z)) * v.value(quad.z), axis=0)))
    bnd = boundary_pairing(u, v, CircleQuadrature.build(nt))
    return lhs, rhs, bnd


def symmetry_defect(u, v, spec=None, nr=16, nt=32):
    """Integration-by-parts defects on the unit disc.

    Returns a dict with ``full = |<u,Tv> - <Tu,v> + i int <u, sigma.n v>|``,
    ``pure = |<u,Tv> - <Tu,v>|`` and ``grid_change``, the change of the
    full defect's ingredients when both resolutions are doubled.
    """
    if spec is not None and spec.kind != "unit_circle":
        raise ValueError("symmetry defect is evaluated on the unit disc")
    lhs, rhs, bnd = _symmetry_terms(u, v, nr, nt)
    lhs2, rhs2, bnd2 = _symmetry_terms(u, v, 2 * nr, 2 * nt)
    change = max(abs(lhs - lhs2), abs(rhs - rhs2), abs(bnd - bnd2))
    return {"full": abs(lhs - rhs + 1j * bnd), "pure": abs(lhs - rhs), "grid_change": change}
