"""Command-line front end.

Subcommands ``spectrum``, ``verify <suite>``, ``weyl`` and
``conformal-check`` read a TOML configuration (see :mod:`etadirac.config`)
and write CSV, JSON and two-column data files into the output directory.

Exit codes: 0 success, 1 configuration or usage error, 2 zigzag
rejection, 3 numerical non-convergence or a failed check.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import config as cfgmod
from . import io
from .boundary import ConstantEta
from .conformal import u_norm_matrix
from .disc import secular_roots, solve_disc
from .errors import ConfigError, ConvergenceFailure, ResolutionError, ZigzagPoint
from .suites import HEADER, SUITES, configured_map, run_suite
from .weyl import certify_sequence, extension_constants, weyl_domain_checks

EXIT_OK, EXIT_USAGE, EXIT_ZIGZAG, EXIT_NUMERIC = 0, 1, 2, 3
ORACLE_TOL = 1e-8


def _u64(text):
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid bandwidth {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("bandwidth must be positive")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML configuration file")
    common.add_argument("--out", help="output directory (overrides output.dir)")
    common.add_argument("--seed", type=_u64, help="random seed (overrides seed)")
    common.add_argument("--bandwidth", type=_positive_int,
                        help="Fourier-Bessel bandwidth N (overrides numerics.bandwidth)")
    parser = argparse.ArgumentParser(prog="etadirac", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="eigenpairs on the disc")
    verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("suite", choices=sorted(SUITES))
    sub.add_parser("weyl", parents=[common], help="certify the singular Weyl sequence")
    sub.add_parser("conformal-check", parents=[common], help="conformal transport checks")
    return parser


def _load(args):
    cfg = cfgmod.load(args.config, args.command) if args.config else cfgmod.from_dict({}, args.command)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.bandwidth is not None:
        cfg.numerics["bandwidth"] = args.bandwidth
    if args.out is not None:
        cfg.output["dir"] = args.out
    return cfg


def _echo(cfg):
    return {"command": cfg.command, "seed": cfg.seed, "domain": cfg.domain, "eta": cfg.eta,
            "numerics": cfg.numerics}


def _path(cfg, name):
    return os.path.join(cfg.output["dir"], name)


# ------------------------------------------------------------------ spectrum

def _group(values, tol=ORACLE_TOL):
    out = []
    for v in sorted(values):
        if out and abs(out[-1][0] - v) < tol:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return out


def oracle_comparison(result, eta_value, k_min, k_max, eps_eta):
    """Rows comparing Galerkin eigenvalues with the per-mode secular roots."""
    rows = []
    ok = True
    computed = result.distinct(ORACLE_TOL)
    for sgn in (1, -1):
        roots = [k for _, k in secular_roots(eta_value, sgn, k_max, eps_eta) if k > k_min]
        oracle = _group(roots)
        mine = [(abs(e), m) for e, m in computed if np.sign(e) == sgn]
        for i in range(max(len(oracle), len(mine))):
            o = oracle[i] if i < len(oracle) else [float("nan"), 0]
            g = mine[i] if i < len(mine) else (float("nan"), 0)
            diff = abs(o[0] - g[0])
            match = bool(diff <= ORACLE_TOL and o[1] == g[1])
            ok &= match
            rows.append((sgn * o[0], o[1], sgn * g[0], g[1], diff, match))
    rows.sort(key=lambda r: (abs(r[0]) if math.isfinite(r[0]) else abs(r[2]), r[0]))
    return rows, ok


def cmd_spectrum(cfg):
    num = cfg.numerics
    spec = cfgmod.build_disc_spec(cfg)
    try:
        result = solve_disc(spec, num["k_max"], num["grid_step"], num.get("bandwidth"),
                            num["eps_eta"], k_min=num["k_min"])
    except ResolutionError as exc:
        raise ConfigError(str(exc), key="numerics.bandwidth") from exc
    pairs = result.eigenpairs
    checks = {
        "boundary_residual": max((p.boundary_residual for p in pairs), default=0.0),
        "interior_residual": max((p.interior_residual for p in pairs), default=0.0),
    }
    passed = (checks["boundary_residual"] <= num["boundary_tol"]
              and checks["interior_residual"] <= num["interior_tol"]
              and all(math.isfinite(p.regularity_ratio) for p in pairs))
    io.ensure_dir(cfg.output["dir"])
    if isinstance(spec.eta, ConstantEta):
        rows, match = oracle_comparison(result, spec.eta.value, num["k_min"], num["k_max"],
                                        num["eps_eta"])
        io.write_csv(_path(cfg, "secular_oracle.csv"),
                     ("energy_oracle", "multiplicity_oracle", "energy_galerkin",
                      "multiplicity_galerkin", "abs_difference", "match"), rows)
        checks["secular_oracle_match"] = match
        passed &= match
    checks["passed"] = passed
    doc = {"config": _echo(cfg), **result.as_document(), "checks": checks}
    io.write_json(_path(cfg, "spectrum.json"), doc)
    io.write_csv(_path(cfg, "eigenvalues.csv"), result.CSV_HEADER, result.csv_rows())
    for sgn, name in ((1, "plus"), (-1, "minus")):
        k, s = result.traces[sgn]
        io.write_columns(_path(cfg, f"sigma_min_{name}.dat"), k, s)
    print(f"{len(pairs)} eigenpairs with {num['k_min']:g} < |E| <= {num['k_max']:g}; "
          f"max boundary residual {checks['boundary_residual']:.3e}, "
          f"max interior residual {checks['interior_residual']:.3e}")
    if not passed:
        print("residual or oracle checks failed; see spectrum.json", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# -------------------------------------------------------------------- verify

def write_rows(path, rows):
    io.write_csv(path, HEADER, [r.as_tuple() for r in rows])


def report_failures(rows):
    failed = [r for r in rows if not r.passed]
    for r in failed:
        rel = ">=" if r.lower else "<="
        print(f"FAIL {r.identity} [{r.parameter}]: {r.defect:.3e} (required {rel} "
              f"{r.tolerance:.3e})", file=sys.stderr)
    return failed


def cmd_verify(cfg, suite):
    rng = np.random.default_rng(cfg.seed)
    rows = run_suite(suite, cfg, rng)
    io.ensure_dir(cfg.output["dir"])
    write_rows(_path(cfg, f"verify_{suite}.csv"), rows)
    failed = report_failures(rows)
    print(f"{suite}: {len(rows) - len(failed)}/{len(rows)} checks passed")
    return EXIT_NUMERIC if failed else EXIT_OK


# ---------------------------------------------------------------------- weyl

def cmd_weyl(cfg):
    num = cfg.numerics
    reports = certify_sequence(num["n_max"], R=num["weyl_radius"], order=num["weyl_order"],
                               radius_rule=num["radius_rule"], tol=num["weyl_tol"])
    masses = [r.mass_outside[0.05] for r in reports]
    decreasing = all(b < a for a, b in zip(masses, masses[1:]))
    certified = all(r.certified for r in reports)
    cb, ct = extension_constants()
    doc = {
        "config": _echo(cfg),
        "domain_checks": {k: v for k, v in weyl_domain_checks(rng=np.random.default_rng(cfg.seed)).items()},
        "extension_constants": {"C_B": cb, "C_t": ct},
        "reports": [r.as_dict() for r in reports],
        "mass_outside_decreasing": decreasing,
        "certified": certified,
    }
    io.ensure_dir(cfg.output["dir"])
    io.write_json(_path(cfg, "weyl.json"), doc)
    io.write_csv(_path(cfg, "weyl.csv"),
                 ("n", "j", "s", "R", "quotient", "bound", "quotient_fine", "agreement",
                  "mass_outside_0.05", "certified"),
                 [(r.n, r.j, r.s, r.R, r.quotient, 1.0 / r.n, r.quotient_fine, r.agreement,
                   r.mass_outside[0.05], r.certified) for r in reports])
    ns = [r.n for r in reports]
    io.write_columns(_path(cfg, "weyl_quotient.dat"), ns, [r.quotient for r in reports])
    io.write_columns(_path(cfg, "weyl_reference.dat"), ns, [1.0 / n for n in ns])
    for r in reports:
        print(f"n = {r.n}: ||Tv||/||v|| = {r.quotient:.5f} <= {1 / r.n:.5f} at s = R 2^-{r.j}, "
              f"two-level change {r.agreement:.2e}, mass outside 0.05 = {r.mass_outside[0.05]:.4f}")
    if not decreasing:
        print("note: mass outside |z| = 0.05 is not strictly decreasing", file=sys.stderr)
    return EXIT_OK if certified else EXIT_NUMERIC


# ----------------------------------------------------------- conformal-check

def cmd_conformal_check(cfg):
    rng = np.random.default_rng(cfg.seed)
    rows = SUITES["conformal"](cfg, rng)
    io.ensure_dir(cfg.output["dir"])
    write_rows(_path(cfg, "conformal.csv"), rows)
    cmap = configured_map(cfg)
    sizes = (16, 32, 64, 128)
    for s, tag in ((-1.0, "sm1"), (0.0, "s0"), (1.0, "s1")):
        cond = [u_norm_matrix(cmap, s, N)[1].condition for N in sizes]
        io.write_columns(_path(cfg, f"u_condition_{tag}.dat"), sizes, cond)
    failed = report_failures(rows)
    print(f"conformal: {len(rows) - len(failed)}/{len(rows)} checks passed")
    return EXIT_NUMERIC if failed else EXIT_OK


def run(argv=None):
    """Parse ``argv``, run the command and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _load(args)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite)
        if args.command == "weyl":
            return cmd_weyl(cfg)
        return cmd_conformal_check(cfg)
    except ConfigError as exc:
        where = f" (key: {exc.key})" if exc.key else ""
        print(f"configuration error{where}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ZigzagPoint as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_ZIGZAG
    except ConvergenceFailure as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        for item in exc.trace:
            print(f"  {item}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv=None):
    sys.exit(run(argv))
