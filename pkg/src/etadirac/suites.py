"""Verification suites: tables of identity defects against tolerances.

Each suite takes a :class:`~etadirac.config.RunConfig` and a numpy
``Generator`` and returns a list of :class:`Row`. A row passes when its
defect is at most the tolerance, or, for rows marked ``lower``, when the
measured value is at least the bound.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import cauchy as ck
from .boundary import ConstantEta, conformal_image, unit_circle
from .config import build_disc_spec, build_map
from .conformal import (adjoint_defect, becomes_exterior, chain_rule_residuals, injectivity_check,
                        inverse_defect, inversion_map, make_map, min_derivative, transport_beta,
                        u_norm_matrix)
from .disc import (disc_quadrature, first_eigenpairs, orthogonality_defect,
                   trace_sobolev_profile)
from .fields import PolynomialSpinor, boundary_pairing, symmetry_defect, t_from
from .fourier import SQRT_2PI, FourierVector, SpinorTrace, analyze
from .quadrature import CircleQuadrature, DiscQuadrature
from .spinor import BoundaryFrame, identity_defects, pauli_relation_defects

HEADER = ("identity", "parameter", "defect", "tolerance", "pass")


@dataclass(frozen=True)
class Row:
    identity: str
    parameter: str
    defect: float
    tolerance: float
    lower: bool = False

    @property
    def passed(self):
        if not math.isfinite(self.defect):
            return False
        return self.defect >= self.tolerance if self.lower else self.defect <= self.tolerance

    def as_tuple(self):
        return (self.identity, self.parameter, float(self.defect), float(self.tolerance),
                self.passed)


def _random_vector(rng, N, decay=0.0):
    n = np.arange(-N, N + 1)
    c = rng.normal(size=2 * N + 1) + 1j * rng.normal(size=2 * N + 1)
    return FourierVector(c / (np.abs(n) + 1.0) ** decay)


# --------------------------------------------------------------------- pauli

def pauli(cfg, rng, frames=None):
    """Pauli relations and boundary-matrix identities at random frames."""
    frames = cfg.numerics["samples"] if frames is None else frames
    tol = 1e-14
    rows = [Row(f"Pauli relation {name}", "exact matrices", d, tol)
            for name, d in pauli_relation_defects().items()]
    worst = {}
    for _ in range(frames):
        phi = rng.uniform(0, 2 * np.pi)
        eta = rng.uniform(-np.pi, np.pi)
        frame = BoundaryFrame.from_normal(np.exp(1j * phi), eta)
        for name, d in identity_defects(frame).items():
            worst[name] = max(worst.get(name, 0.0), d)
    rows += [Row(name, f"frames={frames}", d, tol) for name, d in worst.items()]
    return rows


# -------------------------------------------------------------------- cauchy

def _cauchy_integral_values(coeffs, zeta, conjugate, Mq=2048):
    """Cauchy integrals of ``e_n`` (columns) at interior points by the trapezoid rule."""
    phi = 2 * np.pi * np.arange(Mq) / Mq
    z = np.exp(1j * phi)
    N = (coeffs.shape[0] - 1) // 2
    basis = np.exp(1j * np.outer(phi, np.arange(-N, N + 1))) / SQRT_2PI
    if conjugate:
        kern = np.conj(z)[None, :] / (np.conj(z)[None, :] - np.conj(zeta)[:, None]) / Mq
    else:
        kern = z[None, :] / (z[None, :] - zeta[:, None]) / Mq
    return kern @ basis @ coeffs


def cauchy(cfg, rng, N=128, n_norm=100, n_fd=20, fd_points=50):
    """Kernel actions, Hardy complementarity, interior norms and Cauchy data projectors."""
    rows = []
    idx = np.arange(-N, N + 1)
    zeta = 0.9 * np.sqrt(rng.uniform(0, 1, 40)) * np.exp(2j * np.pi * rng.uniform(0, 1, 40))
    eye = np.eye(2 * N + 1)
    for conj, op, name in ((False, ck.apply_K, "K"), (True, ck.apply_Kbar, "Kbar")):
        closed = np.array([op(FourierVector(eye[:, j]))(zeta) for j in range(2 * N + 1)]).T
        integral = _cauchy_integral_values(eye, zeta, conj)
        rows.append(Row(f"{name} e_n: closed form vs Cauchy integral", f"|n|<={N}, |zeta|<=0.9",
                        float(np.max(np.abs(closed - integral))), 1e-13))

    # traces of the extensions are the Hardy projections; complementarity
    worst_trace = worst_sum = worst_prod = worst_idem = 0.0
    for _ in range(20):
        f = _random_vector(rng, N)
        tk, tkb = ck.trace_K(f), ck.trace_Kbar(f)
        worst_trace = max(worst_trace,
                          np.max(np.abs(ck.apply_K(f).boundary_trace(N).coeffs - tk.coeffs)),
                          np.max(np.abs(ck.apply_Kbar(f).boundary_trace(N).coeffs - tkb.coeffs)))
        const = f.coeff(0) * FourierVector.basis(0, N)
        worst_sum = max(worst_sum, np.max(np.abs((tk + tkb - f - const).coeffs)))
        worst_prod = max(worst_prod, np.max(np.abs((ck.trace_K(tkb) - const).coeffs)),
                         np.max(np.abs((ck.trace_Kbar(tk) - const).coeffs)))
        worst_idem = max(worst_idem, np.max(np.abs((ck.trace_K(tk) - tk).coeffs)),
                         np.max(np.abs((ck.trace_Kbar(tkb) - tkb).coeffs)))
    par = f"N={N}"
    rows += [
        Row("trace of K f equals the Hardy projection", par, worst_trace, 1e-14),
        Row("complementarity gK + gKbar = 1 + <.,e_0>e_0", par, worst_sum, 0.0),
        Row("complementarity gK gKbar = <.,e_0>e_0", par, worst_prod, 0.0),
        Row("Hardy projections idempotent", par, worst_idem, 0.0),
    ]

    # interior L2 norms: closed form, explicit series and exact polar quadrature
    Nf = 32
    quad = DiscQuadrature.build(Nf + 2, 2 * Nf + 4)
    worst_q = worst_series = worst_ratio = 0.0
    for _ in range(n_norm):
        f = _random_vector(rng, Nf)
        h = ck.apply_K(f)
        closed = h.l2_norm_squared()
        series = float(np.sum(np.abs(f.coeffs[Nf:]) ** 2 / (2 * np.arange(Nf + 1) + 2)))
        numeric = float(quad.integrate(np.abs(h(quad.z)) ** 2))
        worst_q = max(worst_q, abs(closed - numeric) / closed)
        worst_series = max(worst_series, abs(closed - series) / closed)
        g = _random_vector(rng, Nf)
        s1, s2 = ck.apply_S(SpinorTrace(f, g))
        hm = math.sqrt(np.sum(np.abs(f.coeffs) ** 2 / (np.abs(f.indices) + 1))
                       + np.sum(np.abs(g.coeffs) ** 2 / (np.abs(g.indices) + 1)))
        worst_ratio = max(worst_ratio,
                          math.sqrt(s1.l2_norm_squared() + s2.l2_norm_squared()) / hm)
    rows += [
        Row("||K f||^2 = sum |f_n|^2 / (2n + 2)", f"samples={n_norm}", worst_series, 1e-12),
        Row("||K f||^2 closed form vs disc quadrature", f"samples={n_norm}", worst_q, 1e-12),
        Row("||S f||_L2 / ||f||_H^-1/2 <= 1", f"samples={n_norm}", worst_ratio, 1.0),
    ]
    norm = ck.extension_operator_norm(32)
    rows += [
        Row("extension norm H^-1/2 -> L2 equals sqrt(1/2)", "N=32", abs(norm - math.sqrt(0.5)),
            1e-12),
        Row("extension norm H^-1/2 -> L2 at most 1", "N=32", norm, 1.0),
    ]

    # holomorphy of the extensions by finite differences
    worst_fd = 0.0
    for _ in range(n_fd):
        f = _random_vector(rng, 16)
        pts = 0.8 * np.sqrt(rng.uniform(0, 1, fd_points)) * np.exp(2j * np.pi * rng.uniform(0, 1, fd_points))
        worst_fd = max(worst_fd,
                       np.max(np.abs(ck.wirtinger_fd(ck.apply_K(f), pts, which="zbar"))),
                       np.max(np.abs(ck.wirtinger_fd(ck.apply_Kbar(f), pts, which="z"))))
    rows.append(Row("d_zbar K f = 0 and d_z Kbar f = 0", f"samples={n_fd}x{fd_points}",
                    float(worst_fd), 1e-8))

    # Cauchy data projector and the boundary layer
    P = ck.calderon_matrix(N)
    Pq = ck.calderon_matrix(N, route="cauchy_integral")
    L = ck.boundary_layer_matrix(N)
    Lq = ck.boundary_layer_matrix(N, route="quadrature")
    worst_fix = worst_layer = worst_obj = 0.0
    for _ in range(10):
        tr = SpinorTrace(_random_vector(rng, N), _random_vector(rng, N))
        once = ck.calderon(tr)
        worst_obj = max(worst_obj, np.max(np.abs(once.as_array() - P @ tr.as_array())),
                        np.max(np.abs((ck.calderon(once) - once).as_array())))
        ext = SpinorTrace(ck.trace_K(tr.comp1), ck.trace_Kbar(tr.comp2))
        worst_fix = max(worst_fix, np.max(np.abs((ck.calderon(ext) - ext).as_array())))
        worst_layer = max(worst_layer, np.max(np.abs(ck.boundary_layer(ext).as_array())))
    rows += [
        Row("Cauchy data projector: diagonal vs Cauchy integral", par,
            float(np.max(np.abs(P - Pq))), 1e-12),
        Row("Cauchy data projector idempotent", par, float(np.max(np.abs(P @ P - P))), 0.0),
        Row("Cauchy data projector: idempotent on traces, matches matrix", par, worst_obj, 1e-14),
        Row("traces of S-extensions are fixed points", par, worst_fix, 1e-14),
        Row("boundary layer -2 gS sigma.n: shift vs quadrature", par,
            float(np.max(np.abs(L - Lq))), 1e-12),
        Row("boundary layer squares to zero", par, float(np.max(np.abs(L @ L))), 0.0),
        Row("boundary layer annihilates traces of S-extensions", par, worst_layer, 0.0),
    ]
    return rows


# ---------------------------------------------------------------- commutator

def commutator(cfg, rng, N=128, pairs=None):
    """Half-derivative gain of ``[beta, gamma K]``, both evaluation routes, bootstrap split."""
    pairs = cfg.numerics["samples"] if pairs is None else pairs
    worst = {-0.5: 0.0, 0.0: 0.0}
    worst_route = worst_split = 0.0
    for _ in range(pairs):
        beta = _random_vector(rng, N, decay=2.0)
        f = _random_vector(rng, N, decay=rng.uniform(-0.5, 1.0))
        for s in worst:
            worst[s] = max(worst[s], ck.smoothing_ratio(beta, f, s))
        a = ck.commutator_apply(beta, f, "branch")
        b = ck.commutator_apply(beta, f, "compose").resize(a.N)
        worst_route = max(worst_route, np.max(np.abs(a.coeffs - b.coeffs)) / np.max(np.abs(b.coeffs)))
        split = ck.bootstrap_split(beta, f).reassemble()
        direct = ck.trace_K(FourierVector(np.convolve(beta.coeffs, f.coeffs) / SQRT_2PI))
        worst_split = max(worst_split, np.max(np.abs((split - direct).coeffs))
                          / np.max(np.abs(direct.coeffs)))
    par = f"N={N}, pairs={pairs}"
    e1, em1 = FourierVector.basis(1, 1), FourierVector.basis(-1, 1)
    example = ck.commutator_apply(e1, em1).coeff(0)
    return [
        Row("commutator smoothing ratio, s = -1/2", par, worst[-0.5], 1 + 1e-10),
        Row("commutator smoothing ratio, s = 0", par, worst[0.0], 1 + 1e-10),
        Row("commutator: Hankel branch vs multiply-project", par, worst_route, 1e-12),
        Row("bootstrap split reassembles gK(beta f)", par, worst_split, 1e-12),
        Row("[e_1, gK] e_-1 = -(2 pi)^-1/2 e_0", "closed form",
            abs(example + 1 / SQRT_2PI), 1e-15),
    ]


# ----------------------------------------------------------------- conformal

def _holo(z):
    return np.exp(z) + z ** 3


def _dholo(z):
    return np.exp(z) + 3 * z ** 2


def u_condition_table(cmap, sizes=(64, 128), orders=(-1.0, 0.0, 1.0)):
    """``{s: [condition at each N]}`` for the weighted truncations of ``U``."""
    return {s: [u_norm_matrix(cmap, s, N)[1].condition for N in sizes] for s in orders}


def _derivative_bound(cmap):
    """Closed-form ``min |G'|`` over the closed disc."""
    if cmap.family == "quadratic":
        return 1 - 2 * abs(cmap.params["a"])
    if cmap.family == "moebius":
        c = abs(cmap.params["c"])
        return (1 - c) / (1 + c)
    return 1.0


def _describe(cmap):
    return ", ".join([cmap.family] + [f"{k}={v:g}" if not isinstance(v, complex)
                                      else f"{k}={v.real:g}{v.imag:+g}i"
                                      for k, v in sorted(cmap.params.items())])


def configured_map(cfg):
    """The configured conformal map, or the quadratic map with ``a = 0.3``."""
    if cfg.domain["family"] == "conformal_image":
        return build_map(cfg)
    return make_map("quadratic", a=0.3)


def conformal(cfg, rng, cmap=None):
    """Chain rule under pullback, ``U`` conditioning, boundary transport, inversion."""
    cmap = configured_map(cfg) if cmap is None else cmap
    pts = 0.8 * np.sqrt(rng.uniform(0, 1, 64)) * np.exp(2j * np.pi * rng.uniform(0, 1, 64))
    res = chain_rule_residuals(cmap, _holo, _dholo, pts)
    par = _describe(cmap)
    rows = [
        Row("chain rule, component 2: d_z (f o G) = G' f'(G)", par, res["component2"], 1e-10),
        Row("chain rule, component 1: d_zbar conj(f o G)", par, res["component1"], 1e-10),
        Row("inverse map F o G = id", par, inverse_defect(cmap, pts), 1e-12),
        Row("min |G'| on the closed disc (lower bound)", par, min_derivative(cmap),
            _derivative_bound(cmap) - 1e-12, lower=True),
        Row("injectivity |G(w1) - G(w2)| / |w1 - w2| > 0 (lower bound)", par,
            injectivity_check(cmap, rng=rng), 1e-6, lower=True),
        Row("U adjoint: independent assembly vs conjugate transpose", par + ", N=64",
            adjoint_defect(cmap, 64), 1e-10),
    ]
    table = u_condition_table(cmap)
    for s, (c64, c128) in table.items():
        rows.append(Row(f"U condition stable under N doubling, s = {s:g}",
                        f"{par}, cond64={c64:.6g}, cond128={c128:.6g}",
                        abs(c128 - c64) / c64, 0.10))
    ident = u_norm_matrix(make_map("identity"), 0.0, 32)[1].condition
    rows.append(Row("U for the identity map is unitary", "N=32", abs(ident - 1.0), 1e-10))

    # boundary transport for eta = 0
    disc = transport_beta(unit_circle(ConstantEta(0.0)), N=16)
    theta = 2 * np.pi * np.arange(64) / 64
    expected = analyze(-1j * np.exp(-1j * theta), 16)
    rows.append(Row("beta on the disc for eta = 0 equals -i e^{-i theta}", "N=16",
                    float(np.max(np.abs(disc.beta_circle.coeffs - expected.coeffs))), 1e-14))
    image = transport_beta(conformal_image(cmap, ConstantEta(0.0)), N=64)
    rows.append(Row("transported beta nowhere vanishing, eta = 0 (lower bound)", par,
                    image.min_abs, 1e-6, lower=True))

    # inversion about a point outside the domain
    circle = np.exp(2j * np.pi * np.arange(256) / 256)
    inv = inversion_map(2.0, circle, 1.0)
    rows.append(Row("|I'| <= d_min^-2 on the boundary", "z_j=2, d_min=1",
                    inv.sup_derivative, inv.bound + 1e-12))
    inner = 0.3 * circle
    rows.append(Row("inverted hole boundary becomes the outer boundary", "hole radius 0.3, z_j=0",
                    0.0 if becomes_exterior(inner, [circle], 0.0) else 1.0, 0.0))
    return rows


# ------------------------------------------------------------------ symmetry

def eigen_matrices(pairs, quad):
    """``<u_i, T u_j> - <T u_i, u_j>`` and the boundary pairings, fields evaluated once."""
    V, TV = [], []
    for p in pairs:
        val, dz, dzb = p.field.evaluate(quad)
        V.append(np.concatenate(val))
        TV.append(np.concatenate(t_from(dz, dzb)))
    V, TV = np.array(V), np.array(TV)
    w = np.concatenate([quad.w, quad.w])
    pure = (V.conj() * w) @ TV.T - (TV.conj() * w) @ V.T
    cq = CircleQuadrature.build(8 * (max(p.field.N for p in pairs) + 2))
    bnd = np.array([[boundary_pairing(p.field, q.field, cq) for q in pairs] for p in pairs])
    return pure, bnd


def symmetry(cfg, rng, count=20, n_poly=10, degree=6):
    """Integration by parts on random polynomials and on computed eigenpairs."""
    rows = []
    full = change = 0.0
    for _ in range(n_poly):
        u = PolynomialSpinor.random(degree, rng)
        v = PolynomialSpinor.random(degree, rng)
        d = symmetry_defect(u, v)
        full, change = max(full, d["full"]), max(change, d["grid_change"])
    par = f"degree={degree}, samples={n_poly}"
    rows += [Row("<u,Tv> - <Tu,v> + i int <u, sigma.n v> = 0", par, full, 1e-10),
             Row("integration by parts: quadrature resolution change", par, change, 1e-10)]

    spec = build_disc_spec(cfg)
    num = cfg.numerics
    res = first_eigenpairs(spec, count, N=num.get("bandwidth"), grid_step=num["grid_step"],
                           eps_eta=num["eps_eta"])
    pairs = res.eigenpairs
    N = pairs[0].field.N
    par = f"first {len(pairs)} eigenpairs, N={N}, {spec.eta.describe()}"
    pure, bnd = eigen_matrices(pairs, disc_quadrature(N))
    rows += [
        Row("pure symmetry <u,Tv> - <Tu,v> on eigenpairs", par, float(np.max(np.abs(pure))), 1e-8),
        Row("boundary pairing int <u, sigma.n v> vanishes on eigenpairs", par,
            float(np.max(np.abs(bnd))), 1e-8),
        Row("boundary condition residual (relative)", par,
            max(p.boundary_residual for p in pairs), num["boundary_tol"]),
        Row("interior residual ||Tu - Eu|| / ||u||", par,
            max(p.interior_residual for p in pairs), num["interior_tol"]),
        Row("orthogonality across distinct eigenvalues", par, orthogonality_defect(pairs), 1e-8),
    ]
    ratios = np.array([p.regularity_ratio for p in pairs])
    doubled = first_eigenpairs(spec, count, N=2 * N, k_start=res.diagnostics["k_max"],
                               grid_step=num["grid_step"], eps_eta=num["eps_eta"]).eigenpairs
    e1 = np.array([p.energy for p in pairs])
    e2 = np.array([p.energy for p in doubled[:len(pairs)]])
    r2 = np.array([p.regularity_ratio for p in doubled[:len(pairs)]])
    same = e1.shape == e2.shape and np.allclose(e1, e2, atol=1e-8, rtol=0)
    rows += [
        Row("eigenvalues stable under bandwidth doubling", par,
            float(np.max(np.abs(e1 - e2))) if same else float("inf"), 1e-8),
        Row("regularity ratio finite", par, 0.0 if np.all(np.isfinite(ratios)) else 1.0, 0.0),
        Row("regularity ratio stable under bandwidth doubling (relative)", par,
            float(np.max(np.abs(r2 - ratios) / ratios)) if same else float("inf"), 0.05),
        Row("empirical regularity constant C = max ||u||_H1 / (||u|| + ||Tu||)", par,
            float(np.max(ratios)), float("inf")),
    ]
    increase = max(trace_sobolev_profile(p.field.trace())["last_increase"] for p in pairs)
    rows.append(Row("trace H^1/2 partial sums saturate", par, increase, 0.01))
    return rows


SUITES = {
    "pauli": pauli,
    "cauchy": cauchy,
    "commutator": commutator,
    "conformal": conformal,
    "symmetry": symmetry,
}


def run_suite(name, cfg, rng):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    return SUITES[name](cfg, rng)
