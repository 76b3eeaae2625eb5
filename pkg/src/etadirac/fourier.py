"""Fourier analysis on the unit circle.

Coefficients are taken against the orthonormal basis
``e_n(theta) = exp(i n theta) / sqrt(2 pi)``, so that

    f_hat(n) = (2 pi)^(-1/2) * integral_0^{2 pi} f(theta) exp(-i n theta) dtheta.

Every factor of ``2 pi`` in the package is localized in this module.
"""

from dataclasses import dataclass

import numpy as np

SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class FourierVector:
    """Coefficients ``f_hat(n)`` for ``n = -N..N`` stored at position ``n + N``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 == 0:
            raise ValueError("coefficient array must be 1-D with odd length 2N+1")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self):
        return (self.coeffs.size - 1) // 2

    @property
    def indices(self):
        return np.arange(-self.N, self.N + 1)

    def coeff(self, n):
        if abs(n) > self.N:
            return 0j
        return self.coeffs[n + self.N]

    @classmethod
    def zeros(cls, N):
        return cls(np.zeros(2 * N + 1, dtype=complex))

    @classmethod
    def basis(cls, n, N):
        """The basis function ``e_n`` at bandwidth ``N``."""
        if abs(n) > N:
            raise ValueError(f"index {n} outside bandwidth {N}")
        c = np.zeros(2 * N + 1, dtype=complex)
        c[n + N] = 1.0
        return cls(c)

    @classmethod
    def from_function(cls, func, N, oversample=4):
        """Coefficients of a callable ``theta -> values`` by trapezoid analysis."""
        M = max(oversample * (N + 1), 16)
        theta = 2 * np.pi * np.arange(2 * M) / (2 * M)
        return analyze(func(theta), N)

    def resize(self, N):
        """Zero-pad or truncate to bandwidth ``N``."""
        out = np.zeros(2 * N + 1, dtype=complex)
        m = min(N, self.N)
        out[N - m:N + m + 1] = self.coeffs[self.N - m:self.N + m + 1]
        return FourierVector(out)

    def __add__(self, other):
        N = max(self.N, other.N)
        return FourierVector(self.resize(N).coeffs + other.resize(N).coeffs)

    def __sub__(self, other):
        N = max(self.N, other.N)
        return FourierVector(self.resize(N).coeffs - other.resize(N).coeffs)

    def __neg__(self):
        return FourierVector(-self.coeffs)

    def __mul__(self, scalar):
        return FourierVector(self.coeffs * scalar)

    __rmul__ = __mul__

    def __call__(self, theta):
        """Evaluate the represented function at angles ``theta``."""
        theta = np.asarray(theta, dtype=float)
        phases = np.exp(1j * np.multiply.outer(theta, self.indices))
        return phases @ self.coeffs / SQRT_2PI


@dataclass(frozen=True)
class SpinorTrace:
    """Boundary values of a two-component spinor; both components share ``N``."""

    comp1: FourierVector
    comp2: FourierVector

    def __post_init__(self):
        if self.comp1.N != self.comp2.N:
            raise ValueError("spinor components must share the same bandwidth")

    @property
    def N(self):
        return self.comp1.N

    def as_array(self):
        return np.concatenate([self.comp1.coeffs, self.comp2.coeffs])

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr)
        half = arr.size // 2
        return cls(FourierVector(arr[:half]), FourierVector(arr[half:]))

    def __sub__(self, other):
        return SpinorTrace(self.comp1 - other.comp1, self.comp2 - other.comp2)


def analyze(samples, N=None):
    """Fourier coefficients from ``2M`` samples at ``theta_j = 2 pi j / 2M``.

    Exact for band-limited inputs whose bandwidth does not exceed ``M - 1``.
    """
    samples = np.asarray(samples, dtype=complex)
    if samples.ndim != 1 or samples.size < 2 or samples.size % 2:
        raise ValueError("need an even number (2M) of uniform samples")
    M = samples.size // 2
    if N is None:
        N = M - 1
    if N > M - 1:
        raise ValueError(f"{samples.size} samples cannot resolve bandwidth {N} (need M >= N + 1)")
    F = np.fft.fft(samples) * (SQRT_2PI / samples.size)
    idx = np.arange(-N, N + 1) % samples.size
    return FourierVector(F[idx])


def synthesize(f, num_samples):
    """Values of ``f`` at ``num_samples`` uniform angles starting at zero."""
    if num_samples < 2 * f.N + 1:
        raise ValueError("too few samples for the bandwidth")
    buf = np.zeros(num_samples, dtype=complex)
    buf[f.indices % num_samples] = f.coeffs
    return np.fft.ifft(buf) * (num_samples / SQRT_2PI)


def sobolev_weights(N, s):
    return (np.abs(np.arange(-N, N + 1)) + 1.0) ** s


def hs_norm(f, s):
    """``sqrt(sum_n (|n| + 1)^(2s) |f_hat(n)|^2)``."""
    w = sobolev_weights(f.N, 2.0 * s)
    return float(np.sqrt(np.sum(w * np.abs(f.coeffs) ** 2)))


def multiply(g, f):
    """Coefficients of the pointwise product, bandwidth ``N_g + N_f``."""
    return FourierVector(np.convolve(g.coeffs, f.coeffs) / SQRT_2PI)


def l2_norm_quadrature(samples):
    """``L^2`` norm on the circle of uniform samples (trapezoid rule)."""
    samples = np.asarray(samples)
    return float(np.sqrt(2 * np.pi * np.mean(np.abs(samples) ** 2)))
