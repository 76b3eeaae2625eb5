"""Boundary curves, boundary angle profiles and the scalar boundary functions.

A boundary condition ``P_- u = 0`` with angle ``eta`` is equivalent to
``u2 = B t u1`` on the boundary with ``B = (1 - sin eta) / cos eta``. Here
``B`` is always evaluated in the half-angle form ``tan(gap / 2)`` with
``gap = pi/2 - eta``; this is exact and keeps full relative accuracy where
``eta`` approaches ``pi/2`` (the zigzag angle).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateCurve, ZigzagPoint
from .spinor import BoundaryFrame

EPS_ETA = 1e-6
_MIN_SPEED = 1e-12

KINDS = ("unit_circle", "tangent_disc", "conformal_image", "custom_samples")


class ConstantEta:
    def __init__(self, value):
        self.value = float(value)

    def __call__(self, theta):
        return np.full(np.shape(theta), self.value)

    def derivative(self, theta):
        return np.zeros(np.shape(theta))

    def gap(self, theta):
        return np.full(np.shape(theta), np.pi / 2 - self.value)

    def describe(self):
        return {"profile": "constant", "value": self.value}


class FourierEta:
    """``mean + sum_k cos_k cos(k theta) + sin_k sin(k theta)``, k starting at 1."""

    def __init__(self, mean=0.0, cos=(), sin=()):
        self.mean = float(mean)
        self.cos = np.asarray(cos, dtype=float)
        self.sin = np.asarray(sin, dtype=float)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, self.mean)
        for k, a in enumerate(self.cos, start=1):
            out = out + a * np.cos(k * theta)
        for k, b in enumerate(self.sin, start=1):
            out = out + b * np.sin(k * theta)
        return out

    def derivative(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        for k, a in enumerate(self.cos, start=1):
            out = out - k * a * np.sin(k * theta)
        for k, b in enumerate(self.sin, start=1):
            out = out + k * b * np.cos(k * theta)
        return out

    def gap(self, theta):
        return np.pi / 2 - self(theta)

    def describe(self):
        return {"profile": "fourier", "mean": self.mean,
                "cos": self.cos.tolist(), "sin": self.sin.tolist()}


class WeylEta:
    """Angle profile that reaches the zigzag value quadratically at ``theta = 0``.

    ``eta = pi/2 - gap`` with ``gap = rho^2 exp(-rho^2 / 2)`` and
    ``rho = 2 sin(theta / 2)`` the chord distance from the touching point.
    ``gap`` is smooth and periodic, ``gap ~ theta^2`` near zero and
    ``0 < gap <= 2/e`` elsewhere, so ``cos eta > 0`` away from ``theta = 0``.
    """

    def gap(self, theta):
        rho2 = 4.0 * np.sin(np.asarray(theta, dtype=float) / 2) ** 2
        return rho2 * np.exp(-rho2 / 2)

    def gap_derivative(self, theta):
        theta = np.asarray(theta, dtype=float)
        rho2 = 4.0 * np.sin(theta / 2) ** 2
        return 2.0 * np.sin(theta) * (1.0 - rho2 / 2) * np.exp(-rho2 / 2)

    def __call__(self, theta):
        return np.pi / 2 - self.gap(theta)

    def derivative(self, theta):
        return -self.gap_derivative(theta)

    def describe(self):
        return {"profile": "weyl"}


@dataclass(frozen=True)
class BoundarySpec:
    """A closed counterclockwise ``C^2`` curve ``theta -> z(theta)`` with an angle profile."""

    curve: object
    derivative: object
    eta: object
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        theta = 2 * np.pi * np.arange(64) / 64
        if np.min(np.abs(self.derivative(theta))) < _MIN_SPEED:
            raise DegenerateCurve("parametrization speed vanishes")
        if signed_area(self) <= 0:
            raise ValueError("boundary must be oriented counterclockwise")

    def point(self, theta):
        return self.curve(np.asarray(theta, dtype=float))


def unit_circle(eta=None):
    eta = ConstantEta(0.0) if eta is None else eta
    return BoundarySpec(
        curve=lambda th: np.exp(1j * th),
        derivative=lambda th: 1j * np.exp(1j * th),
        eta=eta, kind="unit_circle",
    )


def tangent_disc(eta=None):
    """The disc ``|z + 1| < 1``, touching the origin with tangent ``i`` there."""
    eta = WeylEta() if eta is None else eta
    return BoundarySpec(
        curve=lambda th: -1.0 + np.exp(1j * th),
        derivative=lambda th: 1j * np.exp(1j * th),
        eta=eta, kind="tangent_disc",
    )


def conformal_image(cmap, eta=None):
    """Image of the unit circle under ``cmap``, parametrized by the disc angle."""
    eta = ConstantEta(0.0) if eta is None else eta
    return BoundarySpec(
        curve=lambda th: cmap.forward(np.exp(1j * th)),
        derivative=lambda th: cmap.derivative(np.exp(1j * th)) * 1j * np.exp(1j * th),
        eta=eta, kind="conformal_image", params={"map": cmap},
    )


def from_samples(points, eta=None):
    """Curve given by uniform samples, continued by trigonometric interpolation."""
    points = np.asarray(points, dtype=complex)
    M = points.size
    if M < 8:
        raise ValueError("need at least 8 boundary samples")
    c = np.fft.fft(points) / M
    k = np.fft.fftfreq(M, 1.0 / M)
    if M % 2 == 0:
        # split the Nyquist mode symmetrically so the interpolant is real-analytic
        c = np.append(c, c[M // 2] / 2)
        c[M // 2] /= 2
        k = np.append(k, -k[M // 2])

    def curve(th):
        return np.exp(1j * np.multiply.outer(np.asarray(th, dtype=float), k)) @ c

    def deriv(th):
        return np.exp(1j * np.multiply.outer(np.asarray(th, dtype=float), k)) @ (1j * k * c)

    eta = ConstantEta(0.0) if eta is None else eta
    return BoundarySpec(curve=curve, derivative=deriv, eta=eta, kind="custom_samples",
                        params={"coefficients": c, "wavenumbers": k})


def signed_area(spec, samples=512):
    theta = 2 * np.pi * np.arange(samples) / samples
    z = spec.curve(theta)
    dz = spec.derivative(theta)
    return float(0.5 * np.mean(np.imag(np.conj(z) * dz)) * 2 * np.pi)


def normal_tangent(spec, theta):
    """Unit outward normal and tangent arrays; ``t = z'/|z'|`` and ``n = -i t``."""
    dz = spec.derivative(np.asarray(theta, dtype=float))
    speed = np.abs(dz)
    if np.any(speed < _MIN_SPEED):
        raise DegenerateCurve("parametrization speed below 1e-12")
    t = dz / speed
    return -1j * t, t


def frame_at(spec, theta):
    n, t = normal_tangent(spec, float(theta))
    return BoundaryFrame(point=complex(spec.point(float(theta))), n=complex(n),
                         t=complex(t), eta=float(spec.eta(float(theta))))


def b_of(spec, theta, eps_eta=EPS_ETA):
    """``B = (1 - sin eta) / cos eta`` evaluated as ``tan(gap / 2)``.

    Raises :class:`ZigzagPoint` where ``|cos eta| < eps_eta`` unless the
    boundary is the tangent disc used for the Weyl construction, where ``B``
    is continued by the same closed form (``B = 0`` at the touching point).
    """
    theta = np.asarray(theta, dtype=float)
    gap = spec.eta.gap(theta)
    if spec.kind != "tangent_disc":
        if np.any(np.abs(np.sin(gap)) < eps_eta):
            raise ZigzagPoint(
                f"|cos eta| < {eps_eta:g} on the boundary: zero lies in the essential "
                "spectrum and the boundary condition leaves the H^1 framework")
    return np.tan(gap / 2)


def b_derivative(spec, theta):
    """``dB/dtheta`` from the closed form."""
    theta = np.asarray(theta, dtype=float)
    gap = spec.eta.gap(theta)
    dgap = -spec.eta.derivative(theta)
    if hasattr(spec.eta, "gap_derivative"):
        dgap = spec.eta.gap_derivative(theta)
    return dgap / (2.0 * np.cos(gap / 2) ** 2)


def beta_of(spec, theta, convention="v2_over_v1", eps_eta=EPS_ETA):
    """Ratio between boundary spinor components.

    ``"v2_over_v1"`` gives ``B t``; ``"v1_over_v2"`` gives its reciprocal
    ``conj(t) cos(eta) / (1 - sin(eta))``.
    """
    B = b_of(spec, theta, eps_eta)
    _, t = normal_tangent(spec, theta)
    if convention == "v2_over_v1":
        return B * t
    if convention == "v1_over_v2":
        if np.any(B == 0):
            raise ZeroDivisionError("1 - sin(eta) vanishes; v1/v2 ratio undefined")
        return np.conj(t) / B
    raise ValueError(f"unknown convention {convention!r}")


@dataclass(frozen=True)
class EtaValidation:
    min_abs_cos: float
    ok: bool


def validate_eta(spec, eps_eta=EPS_ETA, samples=256):
    if samples < 16:
        raise ValueError("need at least 16 samples")
    theta = 2 * np.pi * np.arange(samples) / samples
    m = float(np.min(np.abs(np.sin(spec.eta.gap(theta)))))
    return EtaValidation(min_abs_cos=m, ok=m >= eps_eta)


def contains(spec, points, samples=1024, chunk=20000):
    """Even-odd point-in-curve test against the sampled boundary polygon."""
    points = np.ravel(np.asarray(points, dtype=complex))
    theta = 2 * np.pi * np.arange(samples) / samples
    a = spec.curve(theta)
    b = np.roll(a, -1)
    out = np.zeros(points.size, dtype=bool)
    for lo in range(0, points.size, chunk):
        p = points[lo:lo + chunk, None]
        ya, yb = a.imag[None, :], b.imag[None, :]
        straddle = (ya > p.imag) != (yb > p.imag)
        with np.errstate(divide="ignore", invalid="ignore"):
            xcross = a.real + (p.imag - ya) * (b.real - a.real) / (yb - ya)
        hits = straddle & (p.real < xcross)
        out[lo:lo + chunk] = np.count_nonzero(hits, axis=1) % 2 == 1
    return out


def c2_regular(spec, samples=256, tol=1e-8):
    """Heuristic ``C^2`` check.

    Closed-form curves: second differences stay bounded under refinement.
    Sampled curves: ``k^2 |c_k|`` has decayed below ``tol`` (relative) at the
    top quarter of the resolved band.
    """
    if spec.kind == "custom_samples":
        c = spec.params["coefficients"]
        k = np.abs(spec.params["wavenumbers"])
        kmax = k.max()
        weighted = k ** 2 * np.abs(c)
        return bool(np.max(weighted[k > 0.75 * kmax]) <= tol * max(np.max(weighted), 1e-300))
    vals = []
    for m in (samples, 2 * samples):
        th = 2 * np.pi * np.arange(m) / m
        z = spec.curve(th)
        d2 = (np.roll(z, -1) - 2 * z + np.roll(z, 1)) / (2 * np.pi / m) ** 2
        vals.append(np.max(np.abs(d2)))
    return bool(np.isfinite(vals[1]) and vals[1] <= 1.5 * vals[0] + 1e-12)


def weyl_hypothesis_constants(spec, psi_max=1.0, samples=20001):
    """Sampled ``sup |B|/psi^2`` and ``sup |dB/dpsi|/|psi|`` over ``0 < |psi| <= psi_max``."""
    psi = np.linspace(-psi_max, psi_max, samples)
    psi = psi[psi != 0]
    B = b_of(spec, psi)
    dB = b_derivative(spec, psi)
    return float(np.max(np.abs(B) / psi ** 2)), float(np.max(np.abs(dB) / np.abs(psi)))


def cone_points_in_closure(spec, r0, n_points=100_000, rng=None):
    """Count sample points of ``{r e^{i phi}: 0 < r <= r0, |phi| <= pi/4}`` inside the closed domain.

    Interior points come from rejection sampling of the cone; boundary
    points are curve samples with ``0 < |z| <= r0``.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    # uniform in the cone sector by area
    r = r0 * np.sqrt(rng.uniform(0.0, 1.0, n_points))
    phi = rng.uniform(-np.pi / 4, np.pi / 4, n_points)
    pts = r * np.exp(1j * phi)
    pts = pts[r > 0]
    if spec.kind == "tangent_disc":
        interior_hits = int(np.count_nonzero(np.abs(pts + 1.0) <= 1.0))
    else:
        interior_hits = int(np.count_nonzero(contains(spec, pts)))
    theta = 2 * np.pi * np.arange(4096) / 4096
    zb = spec.curve(theta)
    rb = np.abs(zb)
    in_cone = (rb > 1e-12) & (rb <= r0) & (np.abs(np.angle(zb)) <= np.pi / 4)
    return interior_hits + int(np.count_nonzero(in_cone))
