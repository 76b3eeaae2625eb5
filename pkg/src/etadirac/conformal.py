"""Closed-form conformal maps of the disc and transplantation by them.

A map ``G: D -> Omega`` pulls functions back by ``(U f)(w) = f(G(w))``.
Dirac spinors transform componentwise; the Wirtinger chain rule gives
``d_w (v2 o G) = G' (d_z v2) o G`` for holomorphic ``v2`` and
``d_wbar (v1 o G) = conj(G') (d_zbar v1) o G`` for antiholomorphic ``v1``.
"""

from dataclasses import dataclass, field

import numpy as np

from .boundary import EPS_ETA, beta_of, validate_eta
from .errors import ConvergenceFailure, ZigzagPoint
from .fourier import SQRT_2PI, FourierVector, analyze

FAMILIES = ("identity", "quadratic", "moebius")
QUADRATIC_LIMIT = 0.45


@dataclass(frozen=True)
class ConformalMap:
    family: str
    params: dict = field(default_factory=dict)

    def forward(self, w):
        w = np.asarray(w, dtype=complex)
        if self.family == "identity":
            return w.copy()
        if self.family == "quadratic":
            return w + self.params["a"] * w ** 2
        c, rot = self.params["c"], np.exp(1j * self.params["angle"])
        return rot * (w - c) / (1 - np.conj(c) * w)

    def derivative(self, w):
        w = np.asarray(w, dtype=complex)
        if self.family == "identity":
            return np.ones_like(w)
        if self.family == "quadratic":
            return 1 + 2 * self.params["a"] * w
        c, rot = self.params["c"], np.exp(1j * self.params["angle"])
        return rot * (1 - abs(c) ** 2) / (1 - np.conj(c) * w) ** 2

    def inverse(self, z, newton_steps=4):
        """``F = G^{-1}``; closed form, polished by Newton steps for the quadratic family."""
        z = np.asarray(z, dtype=complex)
        if self.family == "identity":
            return z.copy()
        if self.family == "moebius":
            c, rot = self.params["c"], np.exp(1j * self.params["angle"])
            y = z / rot
            return (y + c) / (1 + np.conj(c) * y)
        a = self.params["a"]
        if a == 0:
            return z.copy()
        # the root of a w^2 + w - z with |w| <= 1 is the one tending to z as a -> 0
        w = 2 * z / (1 + np.sqrt(1 + 4 * a * z))
        for _ in range(newton_steps):
            w = w - (self.forward(w) - z) / self.derivative(w)
        return w

    def describe(self):
        return {"family": self.family, **{k: (complex(v) if isinstance(v, complex) else v)
                                          for k, v in self.params.items()}}


def make_map(family, **params):
    """Build a map of one of the closed-form families.

    ``quadratic``: ``G(w) = w + a w^2`` with ``|a| <= 0.45``.
    ``moebius``: ``G(w) = e^{i angle} (w - c) / (1 - conj(c) w)`` with ``|c| < 1``.
    """
    if family == "identity":
        if params:
            raise ValueError("the identity map takes no parameters")
        return ConformalMap("identity")
    if family == "quadratic":
        a = params.pop("a", 0.0)
        if params:
            raise ValueError(f"unexpected parameters {sorted(params)}")
        if abs(a) > QUADRATIC_LIMIT:
            raise ValueError(f"quadratic parameter |a| = {abs(a):g} exceeds {QUADRATIC_LIMIT}")
        a = complex(a) if np.iscomplexobj(a) else float(a)
        return ConformalMap("quadratic", {"a": a})
    if family == "moebius":
        c = complex(params.pop("c", 0.0))
        angle = float(params.pop("angle", 0.0))
        if params:
            raise ValueError(f"unexpected parameters {sorted(params)}")
        if abs(c) >= 0.95:
            raise ValueError("Moebius parameter must satisfy |c| < 0.95")
        return ConformalMap("moebius", {"c": c, "angle": angle})
    raise ValueError(f"unknown map family {family!r}; expected one of {FAMILIES}")


def min_derivative(cmap, samples=256, rings=16):
    """Smallest sampled ``|G'|`` on the closed disc."""
    theta = 2 * np.pi * np.arange(samples) / samples
    r = np.linspace(0.0, 1.0, rings + 1)
    return float(np.min(np.abs(cmap.derivative(np.multiply.outer(r, np.exp(1j * theta))))))


def injectivity_check(cmap, n_pairs=10_000, rng=None):
    """Smallest ``|G(w_i) - G(w_j)| / |w_i - w_j|`` over random boundary pairs."""
    rng = np.random.default_rng(0) if rng is None else rng
    t1 = rng.uniform(0, 2 * np.pi, n_pairs)
    t2 = rng.uniform(0, 2 * np.pi, n_pairs)
    keep = np.abs(np.exp(1j * t1) - np.exp(1j * t2)) > 1e-9
    w1, w2 = np.exp(1j * t1[keep]), np.exp(1j * t2[keep])
    ratio = np.abs(cmap.forward(w1) - cmap.forward(w2)) / np.abs(w1 - w2)
    return float(ratio.min())


def transplant(f, cmap, points):
    """``(U f)(w) = f(G(w))`` at the given disc (or circle) points."""
    return f(cmap.forward(np.asarray(points, dtype=complex)))


def transplant_boundary(f, cmap, theta):
    """Boundary pullback ``theta -> f(G(e^{i theta}))``."""
    return transplant(f, cmap, np.exp(1j * np.asarray(theta, dtype=float)))


def contour_wirtinger(func, w0, which="z", radius=0.05, samples=64):
    """Wirtinger derivative from the first Fourier coefficient on a small circle.

    ``d_z f(w0)`` is ``mean f(w0 + r e^{i phi}) e^{-i phi} / r``; the
    trapezoid sum converges geometrically and is exact up to roundoff for
    holomorphic ``f`` (and, with ``e^{+i phi}``, for antiholomorphic ``f``
    and ``d_zbar``).
    """
    w0 = np.asarray(w0, dtype=complex)
    phi = 2 * np.pi * np.arange(samples) / samples
    ring = np.exp(1j * phi)
    vals = func(w0[..., None] + radius * ring)
    kern = np.conj(ring) if which == "z" else ring
    return np.mean(vals * kern, axis=-1) / radius


def chain_rule_residuals(cmap, holo, dholo, points):
    """Chain-rule defects for both spinor components at interior ``points``.

    ``holo``/``dholo`` are a holomorphic test function on ``Omega`` and its
    derivative. The second component uses ``v2 = holo``, the first
    ``v1 = conj(holo)``. Left sides come from :func:`contour_wirtinger`
    applied to the pullbacks, right sides from the analytic derivatives.
    """
    points = np.asarray(points, dtype=complex)
    G, dG = cmap.forward(points), cmap.derivative(points)
    u2 = contour_wirtinger(lambda w: holo(cmap.forward(w)), points, "z")
    u1 = contour_wirtinger(lambda w: np.conj(holo(cmap.forward(w))), points, "zbar")
    r2 = np.abs(u2 - dG * dholo(G))
    r1 = np.abs(u1 - np.conj(dG) * np.conj(dholo(G)))
    return {"component2": float(r2.max()), "component1": float(r1.max())}


def inverse_defect(cmap, points):
    return float(np.max(np.abs(cmap.inverse(cmap.forward(points)) - points)))


class ArclengthCorrespondence:
    """Normalized arclength ``tau(theta) = 2 pi s(theta) / L`` of ``theta -> G(e^{i theta})``.

    ``|G'(e^{i theta})|`` is expanded in a Fourier series and integrated
    termwise; the inverse ``theta(tau)`` is found by Newton's method.
    """

    def __init__(self, cmap, N):
        self.cmap = cmap
        M = 2 * max(4 * N, 64)
        theta = 2 * np.pi * np.arange(M) / M
        speed = np.abs(cmap.derivative(np.exp(1j * theta)))
        c = np.fft.rfft(speed) / M
        self.length = float(2 * np.pi * c[0].real)
        self.c = c
        self.k = np.arange(c.size)
        self.M = M

    def speed(self, theta):
        return np.abs(self.cmap.derivative(np.exp(1j * np.asarray(theta, dtype=float))))

    def tau(self, theta):
        theta = np.asarray(theta, dtype=float)
        k, c = self.k[1:], self.c[1:]
        w = np.where(k == self.M // 2, 1.0, 2.0)
        # integral of sum_k w_k Re(c_k e^{ik theta}) from 0
        ph = np.exp(1j * np.multiply.outer(theta, k))
        integ = ((ph - 1) / (1j * k)) @ (w * c)
        s = self.c[0].real * theta + integ.real
        return 2 * np.pi * s / self.length

    def theta(self, tau, tol=1e-14, maxiter=50):
        tau = np.asarray(tau, dtype=float)
        th = tau.copy()
        for _ in range(maxiter):
            step = (self.tau(th) - tau) / (2 * np.pi * self.speed(th) / self.length)
            th = th - step
            if np.max(np.abs(step)) < tol:
                return th
        raise ConvergenceFailure("arclength inversion did not converge")


def _weights(n, s):
    return (np.abs(n) + 1.0) ** s


def u_matrix(cmap, N, rows=None):
    """``U`` from ``e_n(tau)`` on the boundary (``|n| <= N``) to ``e_j(theta)``, ``|j| <= rows``."""
    rows = 3 * N if rows is None else rows
    corr = ArclengthCorrespondence(cmap, N)
    M = 8 * max(rows, 8)
    theta = 2 * np.pi * np.arange(M) / M
    tau = corr.tau(theta)
    n = np.arange(-N, N + 1)
    cols = [analyze(np.exp(1j * m * tau) / SQRT_2PI, rows).coeffs for m in n]
    return np.array(cols).T, corr


def u_adjoint_matrix(cmap, N, rows=None):
    """The ``L^2`` adjoint ``(U^* g)(tau) = theta'(tau) g(theta(tau))``, assembled by quadrature in ``tau``."""
    rows = 3 * N if rows is None else rows
    corr = ArclengthCorrespondence(cmap, N)
    M = 8 * max(rows, 8)
    tau = 2 * np.pi * np.arange(M) / M
    th = corr.theta(tau)
    dth = corr.length / (2 * np.pi * corr.speed(th))
    j = np.arange(-rows, rows + 1)
    cols = [analyze(dth * np.exp(1j * m * th) / SQRT_2PI, N).coeffs for m in j]
    return np.array(cols).T


@dataclass(frozen=True)
class UNormReport:
    s: float
    N: int
    sigma_max: float
    sigma_min: float

    @property
    def condition(self):
        return self.sigma_max / self.sigma_min


def u_norm_matrix(cmap, s, N):
    """``H^s``-weighted truncation of ``U`` and its extreme singular values."""
    if not -1 <= s <= 1:
        raise ValueError("s must lie in [-1, 1]")
    if N > 256:
        raise ValueError("bandwidth is limited to 256")
    U, _ = u_matrix(cmap, N)
    rows = (U.shape[0] - 1) // 2
    W = _weights(np.arange(-rows, rows + 1), s)[:, None] * U / _weights(np.arange(-N, N + 1), s)[None, :]
    sv = np.linalg.svd(W, compute_uv=False)
    if not np.all(np.isfinite(sv)) or sv[-1] <= 0:
        raise ConvergenceFailure("U-matrix quadrature produced a singular truncation")
    return W, UNormReport(s=s, N=N, sigma_max=float(sv[0]), sigma_min=float(sv[-1]))


def adjoint_defect(cmap, N):
    """``max |U^* - U^H|`` with both sides assembled independently."""
    U, _ = u_matrix(cmap, N)
    return float(np.max(np.abs(u_adjoint_matrix(cmap, N) - U.conj().T)))


@dataclass(frozen=True)
class TransportedBoundary:
    beta_circle: FourierVector
    min_abs: float

    @property
    def nowhere_vanishing(self):
        return self.min_abs > 0


def transport_beta(spec, cmap=None, N=64, eps_eta=EPS_ETA, samples=None):
    """``beta = U(conj(t) cos eta / (1 - sin eta))`` on the circle.

    ``spec`` is either the unit circle (identity map) or a conformal image
    parametrized by the disc angle, so the pullback is evaluation at the
    same ``theta``.
    """
    if spec.kind == "conformal_image":
        cmap = spec.params["map"] if cmap is None else cmap
    elif spec.kind == "unit_circle":
        cmap = make_map("identity") if cmap is None else cmap
    else:
        raise ValueError("transport_beta needs a disc or a conformal image of the disc")
    check = validate_eta(spec, eps_eta)
    if not check.ok:
        raise ZigzagPoint("boundary angle reaches the zigzag value; beta is undefined")
    M = 2 * (N + 1) if samples is None else samples
    theta = 2 * np.pi * np.arange(M) / M
    beta = beta_of(spec, theta, "v1_over_v2", eps_eta)
    dense = 2 * np.pi * np.arange(16 * M) / (16 * M)
    min_abs = float(np.min(np.abs(beta_of(spec, dense, "v1_over_v2", eps_eta))))
    return TransportedBoundary(beta_circle=analyze(beta, N), min_abs=min_abs)


@dataclass(frozen=True)
class InversionResult:
    images: np.ndarray
    derivative_abs: np.ndarray
    bound: float

    @property
    def sup_derivative(self):
        return float(np.max(self.derivative_abs))


def inversion_map(z_j, points, d_min):
    """``I(z) = 1 / (z - z_j)`` with ``|I'(z)| = |z - z_j|^{-2} <= d_min^{-2}``."""
    points = np.asarray(points, dtype=complex)
    if d_min <= 0:
        raise ValueError("d_min must be positive")
    dist = np.abs(points - z_j)
    if np.min(dist) < d_min * (1 - 1e-12):
        raise ValueError(f"z_j lies within {np.min(dist):.3g} < d_min of the domain")
    return InversionResult(images=1.0 / (points - z_j), derivative_abs=dist ** -2.0,
                           bound=float(d_min ** -2.0))


def _inside_polygon(poly, pts):
    a, b = poly, np.roll(poly, -1)
    p = np.asarray(pts)[:, None]
    straddle = (a.imag[None, :] > p.imag) != (b.imag[None, :] > p.imag)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = a.real + (p.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
    return np.count_nonzero(straddle & (p.real < x), axis=1) % 2 == 1


def becomes_exterior(gamma_j, others, z_j):
    """Whether the inverted component ``I(gamma_j)`` encloses every other inverted component."""
    outer = 1.0 / (np.asarray(gamma_j) - z_j)
    return all(bool(np.all(_inside_polygon(outer, 1.0 / (np.asarray(o) - z_j)))) for o in others)
