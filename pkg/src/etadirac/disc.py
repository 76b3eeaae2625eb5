"""Eigenpairs of the Dirac operator on the unit disc.

With ``u = sum_m c_m (J_m(kr) e^{i m theta}, i sgn J_{m+1}(kr) e^{i(m+1) theta})``
the interior equation ``T u = sgn k u`` holds termwise, and the boundary
condition ``u2 = B t u1`` with ``t = i e^{i theta}`` becomes, per frequency,

    sgn J_{n+1}(k) c_n = (2 pi)^(-1/2) sum_m B_hat(n - m) J_m(k) c_m.

For constant angle this decouples into ``sgn J_{m+1}(k) = B J_m(k)``.
Variable angles give a nonlinear eigenproblem in ``k`` that is solved by
locating zeros of the smallest singular value.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import jv

from .boundary import EPS_ETA, ConstantEta, b_of, unit_circle, validate_eta
from .errors import ResolutionError, ZigzagPoint
from .fields import FourierBesselSpinor, norms, t_from
from .fourier import SQRT_2PI, analyze, hs_norm
from .quadrature import CircleQuadrature, DiscQuadrature

SIGMA_THRESHOLD = 1e-6
REFINE_WIDTH = 1e-10
NEAR_MISS = 1e-3      # refined minima in [SIGMA_THRESHOLD, NEAR_MISS) are reported, not accepted
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def bessel_j(m, x):
    """``J_m(x)`` for integer ``|m| <= 300`` and ``0 <= x <= 200``."""
    m = np.asarray(m)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(m) > 300) or np.any(x < 0) or np.any(x > 200):
        raise ValueError("bessel_j is supported for |m| <= 300 and 0 <= x <= 200")
    if not np.all(np.equal(np.mod(m, 1), 0)):
        raise ValueError("order must be an integer")
    return jv(m, x)


def default_bandwidth(k_max):
    return int(math.ceil(k_max)) + 20


def _secular_b(eta_const, eps_eta):
    spec = unit_circle(ConstantEta(eta_const))
    return float(b_of(spec, 0.0, eps_eta))


def secular_roots(eta_const, sgn, k_max, eps_eta=EPS_ETA, step=0.01, m_max=None):
    """Roots of ``sgn J_{m+1}(k) - B J_m(k)`` in ``(0, k_max]`` for every mode.

    Returns a list of ``(m, k)`` sorted by ``k``. Sign changes on a grid of
    width ``step`` are bracketed and refined to ``1e-13``.
    """
    if sgn not in (1, -1):
        raise ValueError("sgn must be +1 or -1")
    if not 0 < k_max <= 200:
        raise ValueError("k_max must lie in (0, 200]")
    B = _secular_b(eta_const, eps_eta)
    m_max = default_bandwidth(k_max) if m_max is None else m_max
    grid = np.arange(step, k_max + step, step)
    grid = grid[grid <= k_max]
    if grid[-1] < k_max:
        grid = np.append(grid, k_max)
    out = []
    for m in range(-m_max, m_max + 1):
        def g(k, m=m):
            return sgn * jv(m + 1, k) - B * jv(m, k)
        vals = g(grid)
        s = np.sign(vals)
        for i in np.nonzero(s[:-1] * s[1:] < 0)[0]:
            out.append((m, brentq(g, grid[i], grid[i + 1], xtol=1e-13)))
        out.extend((m, float(grid[i])) for i in np.nonzero(vals == 0)[0])
    return sorted(out, key=lambda mk: (mk[1], mk[0]))


def boundary_coefficients(spec, N, eps_eta=EPS_ETA):
    """Fourier coefficients of ``B`` up to ``|n| <= 2N``."""
    M = 8 * (N + 1)
    theta = 2 * np.pi * np.arange(M) / M
    return analyze(b_of(spec, theta, eps_eta), 2 * N)


def _check_disc(spec):
    if spec.kind != "unit_circle":
        raise ValueError("the Fourier-Bessel solver works on the unit disc only")


class BoundaryOperator:
    """Callable ``k -> M(k)`` with ``B_hat`` precomputed for a fixed spec and bandwidth."""

    def __init__(self, spec, sgn, N, eps_eta=EPS_ETA):
        _check_disc(spec)
        if sgn not in (1, -1):
            raise ValueError("sgn must be +1 or -1")
        check = validate_eta(spec, eps_eta)
        if not check.ok:
            raise ZigzagPoint(
                f"min |cos eta| = {check.min_abs_cos:.3g} < {eps_eta:g}: the angle reaches the "
                "zigzag value, where zero joins the essential spectrum")
        self.spec, self.sgn, self.N = spec, sgn, N
        self.m = np.arange(-N, N + 1)
        bhat = boundary_coefficients(spec, N, eps_eta)
        diff = self.m[:, None] - self.m[None, :]
        self.toeplitz = bhat.coeffs[diff + 2 * N] / SQRT_2PI

    def matrix(self, k, normalize=True):
        if k > self.N - 20 + 1e-9:
            raise ResolutionError(f"bandwidth {self.N} too small for k = {k:.6g}; need N >= k + 20")
        Jm = jv(self.m, k)
        Jm1 = jv(self.m + 1, k)
        M = np.diag(self.sgn * Jm1).astype(complex) - self.toeplitz * Jm[None, :]
        scale = np.maximum(np.maximum(np.abs(Jm), np.abs(Jm1)), 1e-280)
        if normalize:
            M = M / scale[None, :]
        return M, scale

    def singular_values(self, k):
        return np.linalg.svd(self.matrix(k)[0], compute_uv=False)

    def sigma_min(self, k):
        return self.singular_values(k)[-1]


def assemble_boundary_matrix(k, sgn, spec, N, eps_eta=EPS_ETA):
    """Column-normalized boundary matrix ``M(k)``; singular at eigenvalues ``sgn k``."""
    return BoundaryOperator(spec, sgn, N, eps_eta).matrix(k)[0]


@dataclass
class Eigenpair:
    energy: float
    k: float
    sgn: int
    multiplicity: int
    field: FourierBesselSpinor
    sigma_min: float
    boundary_residual: float = float("nan")
    interior_residual: float = float("nan")
    regularity_ratio: float = float("nan")


@dataclass
class SpectralResult:
    """Eigenpairs sorted by ``|E|`` (ties by ``E``), with the scan traces."""

    eigenpairs: list
    traces: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    flagged: list = field(default_factory=list)   # near-miss minima, not accepted

    @property
    def eigenvalues(self):
        return [p.energy for p in self.eigenpairs]

    def distinct(self, tol=1e-8):
        """``(E, multiplicity)`` after merging eigenpairs closer than ``tol``."""
        out = []
        for p in self.eigenpairs:
            if out and out[-1][0] == p.sgn and abs(out[-1][1] - p.k) < tol:
                out[-1][2] += 1
            else:
                out.append([p.sgn, p.k, 1])
        return [(s * k, n) for s, k, n in out]

    CSV_HEADER = ("index", "energy", "multiplicity", "sigma_min",
                  "boundary_residual", "interior_residual", "regularity_ratio")

    def as_document(self):
        """Plain dict for :func:`etadirac.io.write_json`."""
        return {
            "eigenpairs": [
                {"energy": p.energy, "multiplicity": p.multiplicity, "sigma_min": p.sigma_min,
                 "boundary_residual": p.boundary_residual,
                 "interior_residual": p.interior_residual,
                 "regularity_ratio": p.regularity_ratio}
                for p in self.eigenpairs
            ],
            "diagnostics": self.diagnostics,
            "flagged": self.flagged,
        }

    def csv_rows(self):
        return [(i, p.energy, p.multiplicity, p.sigma_min, p.boundary_residual,
                 p.interior_residual, p.regularity_ratio)
                for i, p in enumerate(self.eigenpairs)]


def _golden(f, a, b, width):
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _find_roots(op, grid, min_width=1e-6, safety=1.5):
    """Bisect every cell that may contain a zero of ``sigma_min``.

    Singular values move by at most ``||M(b) - M(a)||_2`` across a cell
    (Weyl's perturbation bound), so a cell can hold a root only when
    ``sigma_min(a) + sigma_min(b)`` stays below that norm, up to the
    ``safety`` factor covering curvature of ``M`` within the cell. Flagged
    cells are halved down to ``min_width`` and then refined by golden
    section. Unlike minimum detection on a grid, this does not lose roots
    hidden next to a neighbour with a much flatter singular value branch.
    """
    def evaluate(k):
        M = op.matrix(k)[0]
        return M, np.linalg.svd(M, compute_uv=False)[-1]

    vals = [evaluate(k) for k in grid]
    sig = np.array([v[1] for v in vals])
    stack = [(grid[i], grid[i + 1], vals[i], vals[i + 1]) for i in range(len(grid) - 1)]
    candidates = []
    while stack:
        a, b, (Ma, sa), (Mb, sb) = stack.pop()
        if sa + sb > safety * np.linalg.norm(Mb - Ma, 2):
            continue
        if b - a <= min_width:
            candidates.append((a, b))
            continue
        mid = 0.5 * (a + b)
        vm = evaluate(mid)
        stack.append((a, mid, (Ma, sa), vm))
        stack.append((mid, b, vm, (Mb, sb)))
    # adjacent flagged cells around one root form a cluster
    clusters = []
    for a, b in sorted(candidates):
        if clusters and a - clusters[-1][1] <= min_width:
            clusters[-1][1] = max(clusters[-1][1], b)
        else:
            clusters.append([a, b])
    found, near = [], []
    for a, b in clusters:
        k, smin = _golden(op.sigma_min, a, b, REFINE_WIDTH)
        if smin < SIGMA_THRESHOLD:
            sv = op.singular_values(k)
            found.append((k, int(np.count_nonzero(sv < SIGMA_THRESHOLD * sv[0])), smin))
        elif smin < NEAR_MISS:
            near.append((float(k), float(smin)))
    return sig, found, near


def _merge(found, tol=1e-8):
    found = sorted(found)
    out = []
    for k, mult, smin in found:
        if out and abs(out[-1][0] - k) < tol:
            if smin < out[-1][2]:
                out[-1] = (k, max(mult, out[-1][1]), smin)
            continue
        out.append((k, mult, smin))
    return out


def scan_spectrum(spec, sgn, k_range, grid_step=0.01, N=None, eps_eta=EPS_ETA, residuals=True):
    """Eigenvalues ``sgn k`` with ``k`` in ``k_range`` and their eigenfunctions.

    ``sigma_min(M(k))`` is sampled on a grid and candidate cells are located
    by :func:`_find_roots`; a refined minimum is accepted below ``1e-6``.
    The multiplicity is the number of singular values below ``1e-6``
    relative to the largest. Roots closer than about ``2e-6`` merge.
    """
    k_lo, k_hi = k_range
    k_lo = max(k_lo, grid_step)
    N = default_bandwidth(k_hi) if N is None else N
    op = BoundaryOperator(spec, sgn, N, eps_eta)
    grid = np.arange(k_lo, k_hi + 0.5 * grid_step, grid_step)
    sig, found, near = _find_roots(op, grid)
    flagged = [{"energy": sgn * k, "sigma_min": smin} for k, smin in near]
    pairs = []
    for k, mult, smin in _merge(found):
        if not (k_lo < k <= k_hi):
            continue
        M, scale = op.matrix(k)
        _, s, vh = np.linalg.svd(M)
        basis = vh[-mult:].conj() / scale[None, :]
        for field_ in _orthonormal_fields(basis, k, sgn, N):
            pairs.append(Eigenpair(energy=sgn * k, k=k, sgn=sgn, multiplicity=mult,
                                   field=field_, sigma_min=float(smin)))
    result = SpectralResult(eigenpairs=pairs, traces={sgn: (grid, sig)}, flagged=flagged,
                            diagnostics={"bandwidth": N, "grid_step": grid_step})
    if residuals:
        compute_residuals(result, spec, eps_eta)
    return result


def _mode_norms(k, N):
    """``int_D |J_m(kr)|^2 + |J_{m+1}(kr)|^2 dA`` per mode, by Lommel's integral."""
    m = np.arange(-N, N + 2)
    J = jv(m, k)
    dJ = 0.5 * (jv(m - 1, k) - jv(m + 1, k))
    I = 0.5 * (dJ ** 2 + (1 - m ** 2 / k ** 2) * J ** 2)
    return 2 * np.pi * (I[:-1] + I[1:])


def _orthonormal_fields(basis, k, sgn, N):
    """Orthonormalize kernel vectors in ``L^2(D)``; modes are mutually orthogonal."""
    w = _mode_norms(k, N)
    G = (basis.conj() * w[None, :]) @ basis.T
    L = np.linalg.cholesky(G)
    coeffs = np.linalg.solve(L, basis)
    return [FourierBesselSpinor(k, sgn, c, N) for c in coeffs]


def disc_quadrature(N):
    return DiscQuadrature.build(2 * N, 4 * N)


def boundary_residual(field_, spec, eps_eta=EPS_ETA, samples=None):
    """``||u2 - B t u1|| / ||u||`` on the circle."""
    samples = 8 * (field_.N + 2) if samples is None else samples
    cq = CircleQuadrature.build(samples)
    u = field_.value(cq.z)
    t = 1j * cq.z
    B = b_of(spec, cq.theta, eps_eta)
    num = cq.integrate(np.abs(u[1] - B * t * u[0]) ** 2)
    den = cq.integrate(np.sum(np.abs(u) ** 2, axis=0))
    return float(np.sqrt(num / den))


def interior_residual(field_, quad=None):
    """``||T u - E u|| / ||u||`` with ``T`` applied through the derivative recurrences."""
    quad = disc_quadrature(field_.N) if quad is None else quad
    val, dz, dzb = field_.evaluate(quad)
    r = t_from(dz, dzb) - field_.energy * val
    num = quad.integrate(np.sum(np.abs(r) ** 2, axis=0))
    den = quad.integrate(np.sum(np.abs(val) ** 2, axis=0))
    return float(np.sqrt(num / den))


def regularity_ratio(field_, quad=None):
    """``||u||_{H^1} / (||u|| + ||T u||)``; equals one for constant spinors."""
    quad = disc_quadrature(getattr(field_, "N", 8)) if quad is None else quad
    nrm = norms(field_, quad)
    return math.sqrt(nrm["l2"] ** 2 + nrm["grad"] ** 2) / (nrm["l2"] + nrm["T"])


def compute_residuals(result, spec, eps_eta=EPS_ETA):
    quad = None
    for p in result.eigenpairs:
        if quad is None or quad.nr != 2 * p.field.N:
            quad = disc_quadrature(p.field.N)
        p.boundary_residual = boundary_residual(p.field, spec, eps_eta)
        p.interior_residual = interior_residual(p.field, quad)
        p.regularity_ratio = regularity_ratio(p.field, quad)
    return result


def orthogonality_defect(pairs, quad=None):
    """Largest ``|<u_i, u_j>|`` over pairs with distinct eigenvalues, by quadrature."""
    if not pairs:
        return 0.0
    quad = disc_quadrature(max(p.field.N for p in pairs)) if quad is None else quad
    vals = [np.concatenate(p.field.evaluate(quad)[0]) for p in pairs]
    w = np.concatenate([quad.w, quad.w])
    norms = [math.sqrt(np.sum(w * np.abs(v) ** 2).real) for v in vals]
    worst = 0.0
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if abs(pairs[i].energy - pairs[j].energy) < 1e-8:
                continue
            ip = abs(np.sum(w * np.conj(vals[i]) * vals[j])) / (norms[i] * norms[j])
            worst = max(worst, ip)
    return worst


def solve_disc(spec, k_max, grid_step=0.01, N=None, eps_eta=EPS_ETA, residuals=True, k_min=0.0):
    """Both signs of the spectrum with ``k_min < |E| <= k_max``, sorted by ``|E|``."""
    def run(sgn):
        return scan_spectrum(spec, sgn, (max(k_min, grid_step), k_max), grid_step, N, eps_eta,
                             residuals)

    # the two signs are independent scans; LAPACK releases the GIL
    with ThreadPoolExecutor(max_workers=2) as pool:
        res = list(pool.map(run, (1, -1)))
    pairs = sorted(res[0].eigenpairs + res[1].eigenpairs, key=lambda p: (p.k, p.energy))
    traces = {**res[0].traces, **res[1].traces}
    return SpectralResult(eigenpairs=pairs, traces=traces,
                          diagnostics=dict(res[0].diagnostics),
                          flagged=res[0].flagged + res[1].flagged)


def trace_sobolev_profile(trace, tol=0.01):
    """Partial sums ``sum_{|n| <= M} (|n| + 1) |u_hat(n)|^2`` over doubling ``M``.

    ``saturated`` is true when the last doubling adds less than ``tol``
    (relative), the finite-bandwidth signature of ``H^{1/2}`` membership.
    """
    comps = [trace.comp1, trace.comp2] if hasattr(trace, "comp1") else [trace]
    Nmax = max(c.N for c in comps)
    levels = [1]
    while levels[-1] < Nmax:
        levels.append(min(2 * levels[-1], Nmax))
    sums = []
    for M in levels:
        sums.append(sum(hs_norm(c.resize(min(M, c.N)), 0.5) ** 2 for c in comps))
    sums = np.asarray(sums)
    if len(sums) < 2 or sums[-1] == 0:
        increase = 0.0
    else:
        increase = float((sums[-1] - sums[-2]) / sums[-1])
    return {"levels": levels, "partial_sums": sums.tolist(), "last_increase": increase,
            "saturated": increase < tol}


def first_eigenpairs(spec, count, N=None, k_start=None, k_step=2.0, k_limit=60.0,
                     grid_step=0.01, eps_eta=EPS_ETA):
    """The ``count`` eigenpairs of smallest ``|E|`` (counted with multiplicity).

    The window ``|E| <= k_max`` grows from ``k_start`` until it holds
    ``count`` eigenpairs; by default it starts at ``sqrt(2 count) + 1``, just
    above the eigenvalue-counting estimate ``#{|E| <= k} ~ k^2 / 2`` for the
    unit disc. With ``N`` given, that bandwidth is used for every window;
    otherwise the default for the window is used.
    """
    k_max = math.sqrt(2 * count) + 1.0 if k_start is None else k_start
    while True:
        if N is not None and k_max > N - 20:
            raise ResolutionError(f"bandwidth {N} cannot reach {count} eigenpairs")
        res = solve_disc(spec, k_max, grid_step, N, eps_eta)
        if len(res.eigenpairs) >= count:
            res.eigenpairs = res.eigenpairs[:count]
            res.diagnostics["k_max"] = k_max
            return res
        if k_max >= k_limit:
            raise ResolutionError(f"fewer than {count} eigenpairs with |E| <= {k_limit}")
        k_max = min(k_max + k_step, k_limit)
