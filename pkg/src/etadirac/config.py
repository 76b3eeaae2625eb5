"""Run configuration read from TOML.

Schema (every section and key optional; unknown keys are rejected)::

    seed = 20240611

    [domain]
    family = "unit_circle"      # unit_circle | conformal_image | tangent_disc
    map = "quadratic"           # conformal_image only: identity | quadratic | moebius
    a = 0.3                     # quadratic parameter, |a| <= 0.45
    c = 0.2                     # moebius parameter (real part); c_imag for the imaginary part
    c_imag = 0.0
    angle = 0.0

    [eta]
    profile = "constant"        # constant | fourier | weyl
    value = 0.0                 # constant profile
    mean = 0.0                  # fourier profile
    cos = []
    sin = [0.3]

    [numerics]
    bandwidth = 35              # Fourier-Bessel bandwidth (default ceil(k_max) + 20)
    k_min = 0.0
    k_max = 15.0
    grid_step = 0.01
    eps_eta = 1e-6
    boundary_tol = 1e-6
    interior_tol = 1e-8
    samples = 200               # random draws in the verification suites
    n_max = 4                   # Weyl sequence length
    weyl_radius = 0.5
    weyl_order = 12
    weyl_tol = 0.01
    radius_rule = "fixed"       # fixed | apriori

    [output]
    dir = "out"
"""

import sys
from dataclasses import dataclass, field

from .errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_SEED = 20240611

_SCHEMA = {
    "domain": {"family": str, "map": str, "a": float, "c": float, "c_imag": float, "angle": float},
    "eta": {"profile": str, "value": float, "mean": float, "cos": list, "sin": list},
    "numerics": {"bandwidth": int, "k_min": float, "k_max": float, "grid_step": float,
                 "eps_eta": float, "boundary_tol": float, "interior_tol": float,
                 "samples": int, "n_max": int, "weyl_radius": float, "weyl_order": int,
                 "weyl_tol": float, "radius_rule": str},
    "output": {"dir": str},
}

_DEFAULTS = {
    "domain": {"family": "unit_circle"},
    "eta": {"profile": "constant", "value": 0.0},
    "numerics": {"k_min": 0.0, "k_max": 15.0, "grid_step": 0.01, "eps_eta": 1e-6,
                 "boundary_tol": 1e-6, "interior_tol": 1e-8, "samples": 200, "n_max": 4,
                 "weyl_radius": 0.5, "weyl_order": 12, "weyl_tol": 0.01,
                 "radius_rule": "fixed"},
    "output": {"dir": "out"},
}

_POSITIVE = ("grid_step", "eps_eta", "boundary_tol", "interior_tol", "weyl_radius", "weyl_tol",
             "samples", "weyl_order", "k_max")

_CHOICES = {
    ("domain", "family"): ("unit_circle", "conformal_image", "tangent_disc"),
    ("domain", "map"): ("identity", "quadratic", "moebius"),
    ("eta", "profile"): ("constant", "fourier", "weyl"),
    ("numerics", "radius_rule"): ("fixed", "apriori"),
}


@dataclass
class RunConfig:
    command: str = ""
    seed: int = DEFAULT_SEED
    domain: dict = field(default_factory=dict)
    eta: dict = field(default_factory=dict)
    numerics: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)


def _coerce(section, key, value, kind):
    where = f"{section}.{key}"
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where} must be a number", key=where)
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where} must be an integer", key=where)
        return value
    if kind is list:
        if not isinstance(value, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            raise ConfigError(f"{where} must be a list of numbers", key=where)
        return [float(v) for v in value]
    if not isinstance(value, str):
        raise ConfigError(f"{where} must be a string", key=where)
    return value


def from_dict(doc, command=""):
    """Validate a parsed document and fill in defaults."""
    cfg = RunConfig(command=command)
    for key, value in doc.items():
        if key == "seed":
            if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < 2 ** 64:
                raise ConfigError("seed must be an unsigned 64-bit integer", key="seed")
            cfg.seed = value
            continue
        if key not in _SCHEMA:
            raise ConfigError(f"unknown section or key {key!r}", key=key)
        if not isinstance(value, dict):
            raise ConfigError(f"{key!r} must be a table", key=key)
        for sub in value:
            if sub not in _SCHEMA[key]:
                raise ConfigError(f"unknown key {key}.{sub}", key=f"{key}.{sub}")
    for section, schema in _SCHEMA.items():
        merged = dict(_DEFAULTS.get(section, {}))
        for sub, value in doc.get(section, {}).items():
            merged[sub] = _coerce(section, sub, value, schema[sub])
        for (sec, sub), options in _CHOICES.items():
            if sec == section and sub in merged and merged[sub] not in options:
                raise ConfigError(f"{sec}.{sub} must be one of {options}", key=f"{sec}.{sub}")
        if section == "numerics":
            for sub in _POSITIVE:
                if merged[sub] <= 0:
                    raise ConfigError(f"numerics.{sub} must be positive", key=f"numerics.{sub}")
            if merged["k_min"] < 0 or merged["k_min"] >= merged["k_max"]:
                raise ConfigError("numerics.k_min must lie in [0, k_max)", key="numerics.k_min")
            if not 1 <= merged["n_max"] <= 6:
                raise ConfigError("numerics.n_max must lie in 1..6", key="numerics.n_max")
            if merged["weyl_radius"] > 0.5:
                raise ConfigError("numerics.weyl_radius must not exceed 0.5",
                                  key="numerics.weyl_radius")
            if "bandwidth" in merged and merged["bandwidth"] < 1:
                raise ConfigError("numerics.bandwidth must be positive", key="numerics.bandwidth")
        setattr(cfg, section, merged)
    if cfg.domain["family"] == "conformal_image" and "map" not in cfg.domain:
        raise ConfigError("domain.map is required for a conformal image", key="domain.map")
    return cfg


def load(path, command=""):
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}", key=None) from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed TOML in {path}: {exc}", key=None) from exc
    return from_dict(doc, command)


def build_eta(cfg):
    from .boundary import ConstantEta, FourierEta, WeylEta
    eta = cfg.eta
    if eta["profile"] == "constant":
        return ConstantEta(eta.get("value", 0.0))
    if eta["profile"] == "fourier":
        return FourierEta(eta.get("mean", 0.0), eta.get("cos", []), eta.get("sin", []))
    return WeylEta()


def build_map(cfg):
    from .conformal import make_map
    d = cfg.domain
    family = d.get("map", "identity")
    try:
        if family == "quadratic":
            return make_map("quadratic", a=d.get("a", 0.0))
        if family == "moebius":
            return make_map("moebius", c=complex(d.get("c", 0.0), d.get("c_imag", 0.0)),
                            angle=d.get("angle", 0.0))
        return make_map("identity")
    except ValueError as exc:
        raise ConfigError(str(exc), key="domain") from exc


def build_spec(cfg):
    from .boundary import conformal_image, tangent_disc, unit_circle
    family = cfg.domain["family"]
    eta = build_eta(cfg)
    if family == "unit_circle":
        return unit_circle(eta)
    if family == "tangent_disc":
        return tangent_disc(eta)
    return conformal_image(build_map(cfg), eta)


def build_disc_spec(cfg):
    """The unit-disc problem equivalent to the configured domain.

    The tangent disc is a translate of the unit disc with the same normal
    at equal parameter, and a conformal image under the identity map is
    the disc itself; other domains are rejected.
    """
    from .boundary import unit_circle
    family = cfg.domain["family"]
    if family == "conformal_image" and cfg.domain.get("map", "identity") != "identity":
        raise ConfigError("spectra are computed on the disc only; use verify conformal or "
                          "conformal-check for conformal images", key="domain.map")
    return unit_circle(build_eta(cfg))
