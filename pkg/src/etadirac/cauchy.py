"""Cauchy kernels on the unit disc, their traces, commutators and norms.

On the unit circle the Cauchy kernel acts diagonally on the Fourier basis:

    K e_n    = (2 pi)^(-1/2) zeta^n          for n >= 0, and 0 otherwise,
    Kbar e_n = (2 pi)^(-1/2) conj(zeta)^|n|  for n <= 0, and 0 otherwise.

Interior functions are therefore kept as Taylor coefficients. ``L^2(D)``
inner products use ``<zeta^n, zeta^k> = pi delta_nk / (n + 1)``.
"""

from dataclasses import dataclass

import numpy as np

from .boundary import normal_tangent, unit_circle
from .fourier import SQRT_2PI, FourierVector, SpinorTrace, analyze, hs_norm, multiply, synthesize


@dataclass(frozen=True)
class HolomorphicDiscFunction:
    """``sum_k c_k w^k`` with ``w = zeta``, or ``w = conj(zeta)`` when ``conjugate``."""

    taylor: np.ndarray
    conjugate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "taylor", np.asarray(self.taylor, dtype=complex))

    def __call__(self, zeta):
        w = np.conj(zeta) if self.conjugate else np.asarray(zeta)
        return np.polynomial.polynomial.polyval(w, self.taylor)

    def l2_norm_squared(self):
        k = np.arange(self.taylor.size)
        return float(np.sum(np.abs(self.taylor) ** 2 * np.pi / (k + 1)))

    def is_zero(self):
        return not np.any(self.taylor)

    def boundary_trace(self, N):
        """Fourier coefficients of the restriction to the unit circle."""
        c = np.zeros(2 * N + 1, dtype=complex)
        m = min(N + 1, self.taylor.size)
        if self.conjugate:
            c[N - np.arange(m)] = SQRT_2PI * self.taylor[:m]
        else:
            c[N + np.arange(m)] = SQRT_2PI * self.taylor[:m]
        return FourierVector(c)


def l2_inner(h1, h2):
    """``<h1, h2>_{L^2(D)}``, antilinear in the first slot."""
    a, b = h1.taylor, h2.taylor
    if h1.conjugate == h2.conjugate:
        m = min(a.size, b.size)
        k = np.arange(m)
        val = np.sum(np.conj(a[:m]) * b[:m] * np.pi / (k + 1))
        # <conj(z)^n, conj(z)^k> is the conjugate of <z^n, z^k>, which is real
        return complex(val)
    # holomorphic against antiholomorphic monomials: only constants overlap
    return complex(np.conj(a[0]) * b[0] * np.pi)


def apply_K(f):
    return HolomorphicDiscFunction(f.coeffs[f.N:] / SQRT_2PI, conjugate=False)


def apply_Kbar(f):
    return HolomorphicDiscFunction(f.coeffs[f.N::-1] / SQRT_2PI, conjugate=True)


def trace_K(f):
    """Keep frequencies ``n >= 0`` (the Hardy projection)."""
    c = f.coeffs.copy()
    c[:f.N] = 0
    return FourierVector(c)


def trace_Kbar(f):
    """Keep frequencies ``n <= 0``."""
    c = f.coeffs.copy()
    c[f.N + 1:] = 0
    return FourierVector(c)


def apply_S(trace):
    return apply_K(trace.comp1), apply_Kbar(trace.comp2)


def _require_circle(spec):
    if spec is not None and spec.kind != "unit_circle":
        raise ValueError("the Cauchy data projector is only available on the unit circle")


def calderon(trace, spec=None):
    """Projector onto Cauchy data of solutions of ``T u = 0`` in the disc.

    Computed as the trace of the Cauchy extension ``S``; idempotent, and
    every trace of an ``S``-extension is a fixed point.
    """
    _require_circle(spec)
    h1, h2 = apply_S(trace)
    return SpinorTrace(h1.boundary_trace(trace.N), h2.boundary_trace(trace.N))


def sigma_n_times(trace):
    """Pointwise ``sigma.n`` on the circle: ``(conj(n) f2, n f1)`` with ``n = e^{i theta}``."""
    N = trace.N
    n_vec = FourierVector.basis(1, 1) * SQRT_2PI
    nbar_vec = FourierVector.basis(-1, 1) * SQRT_2PI
    return SpinorTrace(multiply(nbar_vec, trace.comp2).resize(N),
                       multiply(n_vec, trace.comp1).resize(N))


def boundary_layer(trace, spec=None):
    """``-2 gamma S (sigma.n trace)`` on the truncated space.

    The result is off-diagonal in the spinor components and squares to
    zero; it annihilates traces of ``S``-extensions.
    """
    _require_circle(spec)
    h1, h2 = apply_S(sigma_n_times(trace))
    return SpinorTrace(-2 * h1.boundary_trace(trace.N), -2 * h2.boundary_trace(trace.N))


def boundary_layer_matrix(N, route="shift"):
    """Dense matrix of :func:`boundary_layer` on ``[comp1; comp2]`` coefficient vectors.

    ``route="shift"`` uses that multiplication by ``n = e^{i theta}`` shifts
    indices by one; ``route="quadrature"`` multiplies sampled basis functions
    by the frame normal and re-analyzes with the FFT.
    """
    size = 2 * N + 1
    if route == "shift":
        up = np.eye(size, k=-1)    # (n f)_hat(k) = f_hat(k - 1)
        down = np.eye(size, k=1)   # (conj(n) f)_hat(k) = f_hat(k + 1)
        pk = np.diag((np.arange(-N, N + 1) >= 0).astype(float))
        pkbar = np.diag((np.arange(-N, N + 1) <= 0).astype(float))
        Z = np.zeros((size, size))
        return -2 * np.block([[Z, pk @ down], [pkbar @ up, Z]]).astype(complex)
    if route == "quadrature":
        M = 4 * (N + 2)
        theta = 2 * np.pi * np.arange(M) / M
        n, _ = normal_tangent(unit_circle(), theta)
        cols = []
        for j in range(2 * size):
            vec = np.zeros(2 * size, dtype=complex)
            vec[j] = 1.0
            tr = SpinorTrace.from_array(vec)
            s1 = synthesize(tr.comp1, M)
            s2 = synthesize(tr.comp2, M)
            g1 = analyze(np.conj(n) * s2, N)
            g2 = analyze(n * s1, N)
            cols.append(np.concatenate([-2 * trace_K(g1).coeffs, -2 * trace_Kbar(g2).coeffs]))
        return np.array(cols).T
    raise ValueError(f"unknown route {route!r}")


def calderon_matrix(N, route="diagonal"):
    """Dense matrix of :func:`calderon`.

    ``route="cauchy_integral"`` evaluates the Cauchy integrals
    ``(1/2 pi i) int f(z)/(z - zeta) dz`` and their conjugates by the
    trapezoid rule on a circle ``|zeta| = rho < 1``, reads off Taylor
    coefficients and rescales them to boundary values.
    """
    size = 2 * N + 1
    if route == "diagonal":
        idx = np.arange(-N, N + 1)
        return np.diag(np.concatenate([(idx >= 0), (idx <= 0)]).astype(complex))
    if route != "cauchy_integral":
        raise ValueError(f"unknown route {route!r}")
    rho = 1.0 - 2.0 / max(N, 4)
    Mq = 32 * max(N, 4)
    Me = 4 * (N + 1)
    phi = 2 * np.pi * np.arange(Mq) / Mq
    z = np.exp(1j * phi)
    zeta = rho * np.exp(2j * np.pi * np.arange(Me) / Me)
    idx = np.arange(-N, N + 1)
    basis = np.exp(1j * np.outer(phi, idx)) / SQRT_2PI          # Mq x size
    kern = z[None, :] / (z[None, :] - zeta[:, None]) / Mq        # K with dz = i z dphi
    kbar = np.conj(z)[None, :] / (np.conj(z)[None, :] - np.conj(zeta)[:, None]) / Mq
    out = np.zeros((2 * size, 2 * size), dtype=complex)
    scale = rho ** -np.abs(idx)
    for block, kernel in ((0, kern), (1, kbar)):
        vals = kernel @ basis                                    # interior values on |zeta| = rho
        coef = np.fft.fft(vals, axis=0) / Me * SQRT_2PI           # coefficients at radius rho
        coef = coef[idx % Me, :] * scale[:, None]
        out[block * size:(block + 1) * size, block * size:(block + 1) * size] = coef
    return out


def commutator_apply(beta, f, route="branch"):
    """``[beta, gamma K] f = beta gamma K f - gamma K (beta f)``.

    ``route="branch"`` sums the Hankel-type index formula directly; for
    ``n >= 0`` only ``k < 0`` contributes (with a minus sign), for ``n < 0``
    only ``k >= 0``. ``route="compose"`` multiplies and projects.
    """
    if route == "compose":
        return multiply(beta, trace_K(f)) - trace_K(multiply(beta, f))
    if route != "branch":
        raise ValueError(f"unknown route {route!r}")
    Nb, Nf = beta.N, f.N
    Nout = Nb + Nf
    n = np.arange(-Nout, Nout + 1)[:, None]
    k = np.arange(-Nf, Nf + 1)[None, :]
    diff = n - k
    valid = np.abs(diff) <= Nb
    table = np.where(valid, beta.coeffs[np.clip(diff + Nb, 0, 2 * Nb)], 0)
    sign = np.where(n >= 0, np.where(k < 0, -1.0, 0.0), np.where(k >= 0, 1.0, 0.0))
    return FourierVector((table * sign) @ f.coeffs / SQRT_2PI)


def smoothing_ratio(beta, f, s):
    """``||[beta, gamma K] f||_{H^{s+1/2}} / (||beta||_{H^1} ||f||_{H^s})``; at most 1."""
    if s not in (-0.5, 0, 0.0):
        raise ValueError("smoothing ratio is defined for s = -1/2 or s = 0")
    den = hs_norm(beta, 1.0) * hs_norm(f, s)
    if den == 0:
        raise ValueError("beta and f must be nonzero")
    return hs_norm(commutator_apply(beta, f), s + 0.5) / den


def extension_operator_norm(N, component="S"):
    """Norm of the Cauchy extension from ``H^{-1/2}`` to ``L^2(D)`` at bandwidth ``N``.

    The Gram matrix of the extended basis functions is assembled from the
    closed-form monomial inner products and whitened by the ``H^{-1/2}``
    weights; the norm is the square root of its top eigenvalue.
    """
    if N < 1:
        raise ValueError("bandwidth must be positive")
    idx = np.arange(-N, N + 1)
    ops = {"K": [apply_K], "Kbar": [apply_Kbar], "S": [apply_K, apply_Kbar]}[component]
    funcs = []
    for op in ops:
        funcs += [op(FourierVector.basis(n, N)) for n in idx]
    G = np.array([[l2_inner(a, b) if a.conjugate == b.conjugate or len(ops) == 1 else 0.0
                   for b in funcs] for a in funcs])
    w = np.tile((np.abs(idx) + 1.0) ** 0.5, len(ops))   # inverse of the H^{-1/2} weight
    A = w[:, None] * G * w[None, :]
    return float(np.sqrt(max(np.linalg.eigvalsh(A).max(), 0.0)))


@dataclass(frozen=True)
class BootstrapSplit:
    smooth_part: FourierVector
    commutator_part: FourierVector

    def reassemble(self):
        """``gamma K (beta f1)`` recovered from the two summands."""
        return self.smooth_part - self.commutator_part


def bootstrap_split(beta_tilde, f1):
    """Split ``gamma K (beta f1) = beta gamma K f1 - [beta, gamma K] f1``."""
    return BootstrapSplit(multiply(beta_tilde, trace_K(f1)), commutator_apply(beta_tilde, f1))


def wirtinger_fd(func, z, h=1e-4, which="zbar"):
    """Fourth-order centered finite-difference Wirtinger derivative.

    ``which="z"`` gives ``(d/dx - i d/dy) / 2``, ``"zbar"`` gives
    ``(d/dx + i d/dy) / 2``.
    """
    z = np.asarray(z, dtype=complex)

    def d(step):
        return (-func(z + 2 * step) + 8 * func(z + step)
                - 8 * func(z - step) + func(z - 2 * step)) / (12 * h)

    dx, dy = d(h), d(1j * h)
    return 0.5 * (dx + 1j * dy) if which == "zbar" else 0.5 * (dx - 1j * dy)
