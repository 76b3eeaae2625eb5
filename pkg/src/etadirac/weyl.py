"""Singular Weyl sequence at a boundary point where ``cos eta`` vanishes quadratically.

Domain: the disc ``|z + 1| < 1`` touching the origin, with the angle
profile of :class:`~etadirac.boundary.WeylEta`. The fields are

    v_n = chi_R(|z|) (z - s)^(-n) (1, B~ t~),

with interior extensions ``t~ = i (z + 1)`` and ``B~ = B(arg(z + 1))``, so
the boundary condition ``v2 = B t v1`` holds exactly. The pole sits at
``s > 0`` outside the closed domain. All fields are multiplied by ``s^n``
(the quotient is homogeneous of degree zero) to keep magnitudes near one.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .boundary import (WeylEta, b_derivative, b_of, cone_points_in_closure, frame_at,
                       tangent_disc, weyl_hypothesis_constants)
from .errors import ConvergenceFailure
from .quadrature import composite_gauss, graded_panels

LADDER = (4, 40)


def weyl_domain():
    """The tangent disc with the quadratically degenerating angle profile."""
    return tangent_disc(WeylEta())


def weyl_domain_checks(spec=None, r0=0.5, n_points=100_000, rng=None):
    """Sampled hypotheses on ``B`` and the exterior cone condition at the origin."""
    spec = weyl_domain() if spec is None else spec
    cb, cd = weyl_hypothesis_constants(spec)
    frame = frame_at(spec, 0.0)
    # inside the cone |z + 1|^2 = 1 + 2 r cos(phi) + r^2 > 1 since cos(phi) > 0
    r = np.linspace(1e-6, r0, 200)[:, None]
    phi = np.linspace(-np.pi / 4, np.pi / 4, 201)[None, :]
    closed_form = bool(np.all(1 + 2 * r * np.cos(phi) + r ** 2 > 1))
    hits = cone_points_in_closure(spec, r0, n_points, rng)
    return {
        "B_over_psi2": cb, "dB_over_psi": cd,
        "hypotheses_ok": cb <= 1.0 and cd <= 1.0,
        "t_at_touching_point": frame.t,
        "cone_closed_form": closed_form, "cone_sample_hits": hits,
        "cone_ok": closed_form and hits == 0,
    }


class Cutoff:
    """Smooth ``chi`` with ``chi = 1`` on ``[0, 1/2]``, ``chi = 0`` on ``[1, inf)``.

    ``chi(x) = 1 - I(2x - 1) / I(1)`` with ``I(y) = int_0^y exp(-a / (u (1 - u))) du``.
    ``max |chi'| = 2 exp(-4 a) / I(1)``, which is below 3 for ``a = 0.1``.
    """

    _ORDER = 24
    # panels graded towards both ends, where the bump is flat to all orders
    _BREAKS = np.array([0.0, 0.01, 0.02, 0.04, 0.08, 0.16, 0.3, 0.5,
                        0.7, 0.84, 0.92, 0.96, 0.98, 0.99, 1.0])

    def __init__(self, depth=0.1):
        if depth <= 0:
            raise ValueError("depth must be positive")
        self.depth = float(depth)
        self._x, self._w = np.polynomial.legendre.leggauss(self._ORDER)
        self.total = float(self._integral(np.array([1.0]))[0])

    def bump(self, y):
        y = np.asarray(y, dtype=float)
        inside = (y > 0) & (y < 1)
        yy = np.where(inside, y, 0.5)
        return np.where(inside, np.exp(-self.depth / (yy * (1 - yy))), 0.0)

    def _integral(self, y):
        out = np.zeros(y.shape)
        for lo, hi in zip(self._BREAKS[:-1], self._BREAKS[1:]):
            a = np.minimum(y, lo)
            b = np.minimum(y, hi)
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            nodes = mid[..., None] + half[..., None] * self._x
            out += half * np.sum(self.bump(nodes) * self._w, axis=-1)
        return out

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x <= 0.5, 1.0, 0.0)
        mid = (x > 0.5) & (x < 1)
        if np.any(mid):
            out[mid] = 1.0 - self._integral(2 * x[mid] - 1) / self.total
        return out

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return -2.0 * self.bump(2 * x - 1) / self.total

    def max_derivative(self, samples=100_001):
        return float(np.max(np.abs(self.derivative(np.linspace(0, 1.2, samples)))))


def cutoff(depth=0.1):
    return Cutoff(depth)


def extension_constants(spec=None, psi_max=1.0, samples=4001):
    """``C_B = sup |B~| / |z|^2`` and ``C_t = sup |grad(B~ t~)| / |z|`` sampled near the origin."""
    spec = weyl_domain() if spec is None else spec
    rho = np.linspace(0.0, 1.0, 201)[1:]
    psi = np.linspace(-psi_max, psi_max, samples)
    P, Rh = np.meshgrid(psi, rho, indexing="ij")
    z = -1 + Rh * np.exp(1j * P)
    keep = np.abs(z) > 1e-3
    z, P = z[keep], P[keep]
    az = np.abs(z)
    B = b_of(spec, P)
    dzB = b_derivative(spec, P) / (2j * (z + 1))
    tt = 1j * (z + 1)
    # grad of B~ t~ has size sqrt(2) (|d_z| + |d_zbar|) bound; B~ t~ is real B times t~
    dz_bt = dzB * tt + B * 1j
    dzb_bt = np.conj(dzB) * tt
    grad = np.sqrt(2 * (np.abs(dz_bt) ** 2 + np.abs(dzb_bt) ** 2))
    return float(np.max(B / az ** 2)), float(np.max(grad / az))


def apriori_radius(n, cb, ct):
    """Largest ``R`` with ``C_B C_t (2 + sqrt(2) n) R <= 1 / (2n)``."""
    return 1.0 / (2 * n * cb * ct * (2 + math.sqrt(2) * n))


@dataclass
class WeylConfig:
    n: int
    R: float
    s: float
    order: int = 12
    ratio: float = 2.0
    scale: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if not 0 < self.R <= 0.5:
            raise ValueError("cutoff radius must lie in (0, R0] with R0 = 0.5")
        if self.s <= 0:
            raise ValueError("pole offset must be positive (outside the closed domain)")


@dataclass
class WeylMeasurement:
    quotient: float
    norm_v: float
    norm_Tv: float
    cutoff_term: float
    geometric_term: float
    mass_outside: dict
    nodes: int


def _grid(cfg):
    R, s = cfg.R, cfg.s
    # |z|^2 = (1 - rho)^2 + 4 rho sin^2(psi / 2) < R^2 bounds psi on the support
    arg = min(1.0, R / (2 * math.sqrt(1 - R)))
    psi_max = 2 * math.asin(arg)
    p, wp = composite_gauss(graded_panels(0.0, psi_max, s / 8, cfg.ratio), cfg.order)
    d, wd = composite_gauss(graded_panels(0.0, R, s / 8, cfg.ratio), cfg.order)
    psi = np.concatenate([-p[::-1], p])
    wpsi = np.concatenate([wp[::-1], wp])
    rho = 1.0 - d
    z = -1.0 + np.multiply.outer(rho, np.exp(1j * psi))
    w = np.multiply.outer(wd * rho, wpsi)
    return z, w, np.broadcast_to(psi[None, :], z.shape)


def measure(cfg, chi=None, spec=None, deltas=(0.05,)):
    """Norms of ``v_n`` and ``T v_n`` on a graded polar grid about ``-1``."""
    chi = Cutoff() if chi is None else chi
    spec = weyl_domain() if spec is None else spec
    n, R, s = cfg.n, cfg.R, cfg.s
    z, w, psi_b = _grid(cfg)
    az = np.abs(z)
    x = az / R
    c = chi(x)
    dc = chi.derivative(x) / R
    dz_chi = dc * np.conj(z) / (2 * az)
    dzb_chi = dc * z / (2 * az)
    phi = np.angle(z + 1)
    B = b_of(spec, phi)
    dzB = b_derivative(spec, phi) / (2j * (z + 1))
    tt = 1j * (z + 1)
    p = cfg.scale * (s / (z - s)) ** n
    v1 = c * p
    v2 = c * B * tt * p
    cut1 = -2j * dz_chi * B * tt * p
    cut2 = -2j * dzb_chi * p
    geo1 = -2j * c * p * (dzB * tt + B * 1j - n * B * tt / (z - s))
    mass = w * (np.abs(v1) ** 2 + np.abs(v2) ** 2)
    nv2 = float(np.sum(mass))
    nt2 = float(np.sum(w * (np.abs(cut1 + geo1) ** 2 + np.abs(cut2) ** 2)))
    cut = float(np.sqrt(np.sum(w * (np.abs(cut1) ** 2 + np.abs(cut2) ** 2))))
    geo = float(np.sqrt(np.sum(w * np.abs(geo1) ** 2)))
    outside = {float(d): float(np.sum(mass[az > d]) / nv2) for d in deltas}
    return WeylMeasurement(quotient=math.sqrt(nt2 / nv2), norm_v=math.sqrt(nv2),
                           norm_Tv=math.sqrt(nt2), cutoff_term=cut, geometric_term=geo,
                           mass_outside=outside, nodes=z.size)


def boundary_defect(n, s, spec=None, samples=257):
    """``max |v2 - B t v1|`` at boundary points near the touching point."""
    spec = weyl_domain() if spec is None else spec
    psi = np.linspace(-1.0, 1.0, samples)
    z = -1 + np.exp(1j * psi)
    p = (s / (z - s)) ** n
    v1 = p
    v2 = b_of(spec, np.angle(z + 1)) * (1j * (z + 1)) * p
    t = frame_at(spec, 0.0).t * np.exp(1j * psi)
    return float(np.max(np.abs(v2 - b_of(spec, psi) * t * v1)))


@dataclass
class WeylReport:
    n: int
    R: float
    s: float
    j: int
    quotient: float
    quotient_fine: float
    agreement: float
    mass_outside: dict
    cutoff_term: float
    geometric_term: float
    apriori_radius: float
    certified: bool
    ladder: list = field(default_factory=list)

    def as_dict(self):
        d = asdict(self)
        d["mass_outside"] = {str(k): v for k, v in self.mass_outside.items()}
        return d


def _ladder_quotient(n, R, j, order, chi, spec, cache):
    if j not in cache:
        cache[j] = measure(WeylConfig(n=n, R=R, s=R * 2.0 ** -j, order=order), chi, spec).quotient
    return cache[j]


def certify(n, R=0.5, order=12, radius_rule="fixed", chi=None, spec=None, tol=0.01,
            ladder=LADDER):
    """Find the first ladder rung ``s = R 2^-j`` with ``||T v_n|| / ||v_n|| <= 1/n``.

    The quotient decreases along the ladder, so the first passing rung is
    located by bisection after checking the last one. The accepted rung is
    re-measured with doubled Gauss orders; a relative change above ``tol``
    raises :class:`ConvergenceFailure`.
    """
    chi = Cutoff() if chi is None else chi
    spec = weyl_domain() if spec is None else spec
    cb, ct = extension_constants(spec)
    r_apriori = apriori_radius(n, cb, ct)
    if radius_rule == "apriori":
        R = r_apriori
    elif radius_rule != "fixed":
        raise ValueError(f"unknown radius rule {radius_rule!r}")
    target = 1.0 / n
    lo, hi = ladder
    cache = {}
    if _ladder_quotient(n, R, hi, order, chi, spec, cache) > target:
        trace = sorted(cache.items())
        raise ConvergenceFailure(
            f"ladder exhausted for n = {n}: quotient {trace[-1][1]:.4g} > {target:.4g} at j = {hi}",
            trace=trace)
    if _ladder_quotient(n, R, lo, order, chi, spec, cache) <= target:
        j = lo
    else:
        a, b = lo, hi
        while b - a > 1:
            mid = (a + b) // 2
            if _ladder_quotient(n, R, mid, order, chi, spec, cache) <= target:
                b = mid
            else:
                a = mid
        j = b
    s = R * 2.0 ** -j
    coarse = measure(WeylConfig(n=n, R=R, s=s, order=order), chi, spec)
    fine = measure(WeylConfig(n=n, R=R, s=s, order=2 * order), chi, spec)
    agreement = abs(fine.quotient - coarse.quotient) / coarse.quotient
    report = WeylReport(n=n, R=R, s=s, j=j, quotient=coarse.quotient, quotient_fine=fine.quotient,
                        agreement=agreement, mass_outside=coarse.mass_outside,
                        cutoff_term=coarse.cutoff_term / coarse.norm_v,
                        geometric_term=coarse.geometric_term / coarse.norm_v,
                        apriori_radius=r_apriori, certified=coarse.quotient <= target,
                        ladder=sorted(cache.items()))
    if agreement > tol:
        raise ConvergenceFailure(
            f"two-level quadrature disagreement {agreement:.3g} exceeds {tol:g} for n = {n}",
            trace=report.ladder)
    return report


def certify_sequence(n_max, R=0.5, order=12, radius_rule="fixed", tol=0.01):
    if not 1 <= n_max <= 6:
        raise ValueError("n_max must lie in 1..6")
    chi, spec = Cutoff(), weyl_domain()
    return [certify(n, R, order, radius_rule, chi, spec, tol) for n in range(1, n_max + 1)]
