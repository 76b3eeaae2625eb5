"""Two-dimensional Dirac operators with angle boundary conditions.

Modules
-------
spinor      pointwise spinor algebra at boundary frames
boundary    curves, angle profiles and the boundary functions ``B`` and ``beta``
fourier     Fourier coefficients and Sobolev norms on the circle
cauchy      Cauchy extensions, Hardy projections, commutators
fields      interior spinor fields and integration by parts
disc        Fourier-Bessel eigensolver on the unit disc
conformal   conformal maps, transplantation and its matrix
weyl        singular Weyl sequences at a degenerate boundary point
suites      verification tables
cli         command-line front end
"""

from .boundary import (ConstantEta, FourierEta, WeylEta, conformal_image, tangent_disc,
                       unit_circle)
from .disc import SpectralResult, first_eigenpairs, scan_spectrum, secular_roots, solve_disc
from .errors import (ConfigError, ConvergenceFailure, DegenerateCurve, EtaDiracError,
                     ResolutionError, ZigzagPoint)
from .weyl import certify, certify_sequence

__version__ = "0.1.0"

__all__ = [
    "ConstantEta", "FourierEta", "WeylEta", "conformal_image", "tangent_disc", "unit_circle",
    "SpectralResult", "first_eigenpairs", "scan_spectrum", "secular_roots", "solve_disc",
    "ConfigError", "ConvergenceFailure", "DegenerateCurve", "EtaDiracError", "ResolutionError",
    "ZigzagPoint", "certify", "certify_sequence",
]
