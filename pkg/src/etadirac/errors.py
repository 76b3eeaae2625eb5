"""Exception hierarchy shared by all modules."""


class EtaDiracError(Exception):
    """Base class for errors raised by :mod:`etadirac`."""


class ZigzagPoint(EtaDiracError, ValueError):
    """The boundary condition degenerates (``|cos eta|`` below tolerance).

    Near such points the operator has essential spectrum at zero and the
    solvers refuse to run.
    """


class DegenerateCurve(EtaDiracError, ValueError):
    """The boundary parametrization has (numerically) vanishing speed."""


class ResolutionError(EtaDiracError):
    """A discretization is too coarse for the requested accuracy."""


class ConvergenceFailure(EtaDiracError):
    """An iterative or ladder search ended without meeting its target.

    ``trace`` holds whatever intermediate records the search produced.
    """

    def __init__(self, msg, trace=None):
        super().__init__(msg)
        self.trace = trace if trace is not None else []


class ConfigError(EtaDiracError, ValueError):
    """Invalid run configuration. ``key`` names the offending entry."""

    def __init__(self, msg, key=None):
        super().__init__(msg)
        self.key = key
