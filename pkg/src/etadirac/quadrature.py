"""Tensor quadrature on the unit disc and graded Gauss-Legendre panels."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DiscQuadrature:
    """Nodes ``z`` and weights ``w`` with ``sum w f(z) ~ int_D f dA``.

    Gauss-Legendre in ``r`` on ``[0, 1]`` (the Jacobian ``r`` folded into
    the weights) times the trapezoid rule in the angle. Exact for
    ``r^j e^{i l theta}`` polynomials with ``j + 1 <= 2 nr - 1`` and
    ``|l| < nt``.
    """

    z: np.ndarray
    w: np.ndarray
    nr: int
    nt: int
    r: np.ndarray = None
    theta: np.ndarray = None

    @classmethod
    def build(cls, nr, nt):
        if nr < 1 or nt < 1:
            raise ValueError("quadrature sizes must be positive")
        x, wx = np.polynomial.legendre.leggauss(nr)
        r = 0.5 * (x + 1.0)
        wr = 0.5 * wx * r
        theta = 2 * np.pi * np.arange(nt) / nt
        z = np.multiply.outer(r, np.exp(1j * theta)).ravel()
        w = np.multiply.outer(wr, np.full(nt, 2 * np.pi / nt)).ravel()
        return cls(z=z, w=w, nr=nr, nt=nt, r=r, theta=theta)

    def refined(self):
        return DiscQuadrature.build(2 * self.nr, 2 * self.nt)

    def integrate(self, values):
        return np.sum(self.w * values, axis=-1)


@dataclass(frozen=True)
class CircleQuadrature:
    """Trapezoid rule on the unit circle with respect to arclength."""

    theta: np.ndarray
    w: np.ndarray

    @classmethod
    def build(cls, nt):
        theta = 2 * np.pi * np.arange(nt) / nt
        return cls(theta=theta, w=np.full(nt, 2 * np.pi / nt))

    @property
    def z(self):
        return np.exp(1j * self.theta)

    def integrate(self, values):
        return np.sum(self.w * values, axis=-1)


def graded_panels(a, b, smallest, ratio=2.0):
    """Break points on ``[a, b]`` graded geometrically away from ``a``.

    The first panel has width ``smallest`` and each next one is ``ratio``
    times wider; the last panel is stretched to end at ``b``.
    """
    if not b > a:
        raise ValueError("need b > a")
    pts = [a]
    h = min(smallest, b - a)
    while pts[-1] + h < b:
        pts.append(pts[-1] + h)
        h *= ratio
    if b - pts[-1] < 0.5 * h / ratio and len(pts) > 1:
        pts[-1] = b
    else:
        pts.append(b)
    return np.asarray(pts)


def composite_gauss(breaks, q):
    """Nodes and weights of ``q``-point Gauss-Legendre on each panel."""
    x, wx = np.polynomial.legendre.leggauss(q)
    a, b = breaks[:-1, None], breaks[1:, None]
    nodes = 0.5 * (b - a) * x[None, :] + 0.5 * (a + b)
    weights = 0.5 * (b - a) * wx[None, :]
    return nodes.ravel(), weights.ravel()
