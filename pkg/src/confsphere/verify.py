"""Verification suites: every check pins one mathematical identity of the
library to a numeric tolerance and reports the measured defect.

The suites are consumed by the command-line `verify` driver and mirrored
by the acceptance test module.  Each check carries a stable `identity`
string naming what it validates, so a failing run says which identity
broke, not just where.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from .lorentz import (Dimension, act, compose, conformal_factor,
                      inverse, random_element)
from . import mero, reps, sphgrid, spectral_ops, trilinear
from .special import complex_gamma

SUITE_NAMES = ("geometry", "representation", "bernstein", "residues",
               "intertwining", "trilinear")


@dataclass
class RunConfig:
    n: int = 3
    L: int = 32
    grid_triple: tuple = (24, 48)
    grid_double: tuple = (48, 96)
    ring_radius: float = 0.1
    ring_size: int = 16
    seed: int = 1234
    fault_inject: bool = False
    quick: bool = False
    out_dir: str = "."
    tolerances: dict = field(default_factory=dict)

    def tol(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))

    def count(self, full: int) -> int:
        return max(2, full // 10) if self.quick else full

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        with open(path) as fh:
            blob = json.load(fh)
        cfg = cls()
        for key, val in blob.items():
            if not hasattr(cfg, key):
                raise ValueError(f"unknown config key {key!r}")
            if key in ("grid_triple", "grid_double"):
                val = tuple(int(v) for v in val)
            setattr(cfg, key, val)
        return cfg


@dataclass
class CheckResult:
    id: str
    identity: str
    measured: float
    tolerance: float
    passed: bool


@dataclass
class SuiteResult:
    name: str
    checks: list
    elapsed_s: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _check(results: list, cid: str, identity: str, measured: float,
           tolerance: float) -> None:
    measured = float(measured)
    results.append(CheckResult(id=cid, identity=identity, measured=measured,
                               tolerance=float(tolerance),
                               passed=bool(measured <= tolerance)))


def _random_points(rng, count, n=3):
    pts = rng.normal(size=(count, n))
    return pts / np.linalg.norm(pts, axis=1)[:, None]


# ---------------------------------------------------------------------------
# geometry


def geometry_suite(cfg: RunConfig):
    dim = Dimension(cfg.n)
    rng = np.random.default_rng(cfg.seed)
    out: list = []
    count = cfg.count(100)

    worst_coc = worst_inv = worst_cov = 0.0
    for i in range(count):
        g1 = random_element(dim, cfg.seed + 2 * i, max_boost=1.0)
        g2 = random_element(dim, cfg.seed + 2 * i + 1, max_boost=1.0)
        x = _random_points(rng, 8, dim.n)
        k12 = conformal_factor(compose(g1, g2), x)
        coc = np.abs(k12 - conformal_factor(g1, act(g2, x))
                     * conformal_factor(g2, x)) / np.abs(k12)
        worst_coc = max(worst_coc, float(coc.max()))
        gi = inverse(g1)
        inv = np.abs(conformal_factor(g1, act(gi, x))
                     * conformal_factor(gi, x) - 1.0)
        worst_inv = max(worst_inv, float(inv.max()))
        y = _random_points(rng, 8, dim.n)
        lhs = np.linalg.norm(act(g1, x) - act(g1, y), axis=1)
        rhs = (np.sqrt(conformal_factor(g1, x) * conformal_factor(g1, y))
               * np.linalg.norm(x - y, axis=1))
        worst_cov = max(worst_cov, float(np.abs(lhs - rhs).max()))
    _check(out, "geo-cocycle", "conformal-factor-cocycle", worst_coc,
           cfg.tol("geometry_exact", 1e-10))
    _check(out, "geo-inverse", "conformal-factor-inverse-law", worst_inv,
           cfg.tol("geometry_exact", 1e-10))
    _check(out, "geo-covariance", "chordal-distance-covariance", worst_cov,
           cfg.tol("geometry_exact", 1e-10))

    grid = sphgrid.make_grid(cfg.L)
    worst_var = 0.0
    for i in range(count):
        g = random_element(dim, cfg.seed + 1000 + i, max_boost=0.5)
        coeffs = sphgrid.random_coeffs(10, cfg.seed + 2000 + i)
        f_field = reps.field_from_coeffs(coeffs)
        pulled = sphgrid.GridFunction(grid, f_field(act(inverse(g), grid.points())))
        lhs = sphgrid.quad(pulled)
        kap = conformal_factor(g, grid.points())
        weighted = sphgrid.GridFunction(
            grid, f_field(grid.points()) * kap ** (dim.n - 1))
        rhs = sphgrid.quad(weighted)
        scale = float(np.abs(f_field(grid.points())).max()) * 4.0 * math.pi
        worst_var = max(worst_var, abs(lhs - rhs) / scale)
    _check(out, "geo-varchange", "conformal-jacobian-change-of-variables",
           worst_var, cfg.tol("geometry_quad", 1e-8))
    return out


# ---------------------------------------------------------------------------
# representation


def representation_suite(cfg: RunConfig):
    dim = Dimension(cfg.n)
    out: list = []
    grid = sphgrid.make_grid(max(cfg.L, 32))
    count = cfg.count(20)

    worst_grp = 0.0
    for i in range(cfg.count(5)):
        g1 = random_element(dim, cfg.seed + 31 + i, max_boost=0.5)
        g2 = random_element(dim, cfg.seed + 57 + i, max_boost=0.5)
        lam = complex(0.4, -0.2) if i % 2 else 0.8
        coeffs = sphgrid.random_coeffs(8, cfg.seed + 70 + i)
        f = sphgrid.sht_inverse(coeffs.pad(grid.L), grid)
        lhs = reps.pi_act(dim, lam, compose(g1, g2), f)
        rhs = reps.pi_act(dim, lam, g1, reps.pi_act(dim, lam, g2, f))
        rel = (np.abs(lhs.values - rhs.values).max()
               / np.abs(lhs.values).max())
        worst_grp = max(worst_grp, float(rel))
    _check(out, "rep-group-law", "principal-series-group-law", worst_grp,
           cfg.tol("rep_group", 1e-9))

    worst_dual = 0.0
    for i in range(cfg.count(5)):
        g = random_element(dim, cfg.seed + 91 + i, max_boost=0.5)
        cf = sphgrid.random_coeffs(8, cfg.seed + 101 + i)
        cp = sphgrid.random_coeffs(8, cfg.seed + 111 + i)
        f = sphgrid.sht_inverse(cf.pad(grid.L), grid)
        phi = sphgrid.sht_inverse(cp.pad(grid.L), grid)
        defect = reps.duality_defect(dim, 0.7, g, f, phi)
        scale = sphgrid.norm_l2(f) * sphgrid.norm_l2(phi)
        worst_dual = max(worst_dual, defect / scale)
    _check(out, "rep-duality", "principal-series-duality", worst_dual,
           cfg.tol("rep_duality", 1e-6))

    worst_dirac = 0.0
    dirac_grid = sphgrid.make_grid(48)   # composed boosts decay slowly
    for i in range(count):
        g = random_element(dim, cfg.seed + 131 + i, max_boost=0.6)
        lam = complex(0.3 * (i % 3), 0.1 * (i % 5) - 0.2)
        phi = sphgrid.random_coeffs(10, cfg.seed + 141 + i)
        a = reps.dirac_pair(dim, lam, g, phi)
        b = reps.dirac_pair_dual(dim, lam, g, phi, dirac_grid)
        worst_dirac = max(worst_dirac, abs(a - b) / abs(a))
    _check(out, "rep-dirac", "point-mass-transformation-law", worst_dirac,
           cfg.tol("rep_dirac", 1e-9))

    worst_uni = 0.0
    for i in range(cfg.count(5)):
        g = random_element(dim, cfg.seed + 151 + i, max_boost=0.5)
        coeffs = sphgrid.random_coeffs(8, cfg.seed + 161 + i)
        f = sphgrid.sht_inverse(coeffs.pad(grid.L), grid)
        moved = reps.pi_act(dim, 1j * (0.3 + 0.2 * i), g, f)
        worst_uni = max(worst_uni,
                        abs(sphgrid.norm_l2(moved) - sphgrid.norm_l2(f))
                        / sphgrid.norm_l2(f))
    _check(out, "rep-unitary", "imaginary-axis-isometry", worst_uni,
           cfg.tol("rep_unitary", 1e-6))
    return out


# ---------------------------------------------------------------------------
# bernstein


def area_closed_form(dim: Dimension, s: complex) -> complex:
    """2^{n-1} pi^rho 2^s Gamma(s/2 + rho) / Gamma(s/2 + 2 rho)."""
    rho = dim.rho
    s = complex(s)
    return (2.0 ** (dim.n - 1) * math.pi ** rho * 2.0 ** s
            * complex_gamma(s / 2.0 + rho) / complex_gamma(s / 2.0 + 2.0 * rho))


def bernstein_suite(cfg: RunConfig):
    dim = Dimension(cfg.n)
    out: list = []
    one = sphgrid.coeffs_constant(1.0, 0)

    worst = 0.0
    for s in (2.0, 0.5, complex(-1.5, 0.3), complex(-3.2, 0.4)):
        got = mero.pair_distance_power(dim, s, one)
        want = area_closed_form(dim, s)
        worst = max(worst, abs(got - want) / abs(want))
    _check(out, "bern-area", "distance-power-area-closed-form", worst,
           cfg.tol("area_form", 1e-7))

    worst = 0.0
    # offsets chosen so no continuation step lands on a zero of s(s+n-3)
    for n in (3, 4, 5):
        dn = Dimension(n)
        for re_off in (0.55, 0.8, 1.05, 1.3):
            s = -(n - 1) + re_off
            direct = sphgrid.kernel_eigenvalues(dn, s, 32)
            descended = _descend_once(dn, s, 32)
            rel = np.abs(direct - descended) / np.abs(direct)
            worst = max(worst, float(rel.max()))
        s = -(n - 1) + 0.7 + 0.3j
        direct = sphgrid.kernel_eigenvalues(dn, s, 32)
        descended = _descend_once(dn, s, 32)
        worst = max(worst, float((np.abs(direct - descended)
                                  / np.abs(direct)).max()))
    _check(out, "bern-descent", "descent-vs-direct-kernel-eigenvalues", worst,
           cfg.tol("descent", 1e-8))

    _check(out, "bern-kernel", "kernel-level-step-down-identity",
           _kernel_level_defect(dim, 5.0, cfg), cfg.tol("bern_kernel", 1e-6))
    return out


def _descend_once(dim: Dimension, s: complex, L: int) -> np.ndarray:
    up = sphgrid.kernel_eigenvalues(dim, s + 2.0, L)
    lap = np.array([spectral_ops.laplacian_multiplier(dim, l)
                    for l in range(L + 1)])
    step = complex(s) + 2.0
    num = lap + (step / 2.0) * (step / 2.0 + dim.n - 2.0)
    return num * up / (step * (step + dim.n - 3.0))


def _kernel_level_defect(dim: Dimension, s: float, cfg: RunConfig) -> float:
    """[Delta + (s/2)(s/2+n-2)] r^s = s(s+n-3) r^{s-2} checked pointwise,
    with the Laplacian applied spectrally at high truncation."""
    L = 96
    grid = sphgrid.make_grid(L)
    rng = np.random.default_rng(cfg.seed + 7)
    y = _random_points(rng, 1)[0]
    pts = _random_points(rng, 30)
    pts = pts[np.linalg.norm(pts - y, axis=1) > 0.8]
    r_grid = np.linalg.norm(grid.points() - y, axis=-1)
    W = sphgrid.GridFunction(grid, r_grid ** s)
    cW = sphgrid.sht_forward(W)
    fam = spectral_ops.multiplier_family(dim, L, "laplacian")
    lap_vals = sphgrid.synth_at_points(
        spectral_ops.apply_multiplier(fam, cW), pts)
    r = np.linalg.norm(pts - y, axis=1)
    lhs = lap_vals + (s / 2.0) * (s / 2.0 + dim.n - 2.0) * r ** s
    rhs = s * (s + dim.n - 3.0) * r ** (s - 2.0)
    return float((np.abs(lhs - rhs) / r ** (s - 2.0)).max())


# ---------------------------------------------------------------------------
# residues


def residues_suite(cfg: RunConfig):
    dim = Dimension(cfg.n)
    out: list = []

    fit = mero.residue_ring(lambda z: 1.0 / (z - 0.4) + 3.0, 0.4,
                            cfg.ring_radius, cfg.ring_size)
    synthetic = max(abs(fit.residue - 1.0), abs(fit.regular_value - 3.0))
    _check(out, "res-ring", "contour-ring-laurent-fit", synthetic,
           cfg.tol("ring", 1e-10))
    gfit = mero.residue_ring(complex_gamma, 0.0, cfg.ring_radius, cfg.ring_size)
    _check(out, "res-gamma", "gamma-pole-residue", abs(gfit.residue - 1.0),
           cfg.tol("ring_gamma", 1e-8))

    fault = 1.01 if cfg.fault_inject else 1.0
    worst = 0.0
    for k in (0, 1, 2):
        for i in range(cfg.count(10)):
            f = sphgrid.random_coeffs(8, cfg.seed + 300 + 17 * k + i)
            want = mero.covariant_power_at_pole(dim, k, f)
            if abs(want) < 0.05 * f.l2_norm():
                continue
            if k == 1:
                want = want * fault
            got = mero.residue_pair_distance_power(
                dim, k, f, radius=cfg.ring_radius, ring_size=cfg.ring_size)
            worst = max(worst, abs(got - want) / abs(want))
    _check(out, "res-operator", "kernel-residue-equals-covariant-power",
           worst, cfg.tol("residue_operator", 1e-4))

    one = sphgrid.coeffs_constant(1.0, 0)
    _check(out, "res-const", "first-residue-point-mass",
           abs(mero.residue_pair_distance_power(dim, 0, one) - math.pi),
           cfg.tol("residue_const", 1e-8))

    f1 = sphgrid.random_coeffs(6, cfg.seed + 401)
    f2 = sphgrid.random_coeffs(6, cfg.seed + 402)
    sym = abs(mero.residue_separation_power(dim, 1, f1, f2, side=1)
              - mero.residue_separation_power(dim, 1, f2, f1, side=2))
    ring = mero.residue_separation_power_ring(dim, 1, f1, f2,
                                              radius=cfg.ring_radius,
                                              ring_size=cfg.ring_size)
    pred = mero.residue_separation_power(dim, 1, f1, f2)
    sym = max(sym, abs(ring - pred) / abs(pred))
    _check(out, "res-symmetry", "residue-operator-symmetry", sym,
           cfg.tol("residue_symmetry", 1e-6))

    f = sphgrid.random_coeffs(6, cfg.seed + 403)
    scale = abs(mero.pair_distance_power(dim, -2.0 + cfg.ring_radius, f))
    on = min(abs(mero.residue_ring(
        lambda z: mero.pair_distance_power(dim, z, f), c,
        cfg.ring_radius, cfg.ring_size).residue) for c in (-2.0, -4.0))
    off = max(abs(mero.residue_ring(
        lambda z: mero.pair_distance_power(dim, z, f), c,
        cfg.ring_radius, cfg.ring_size).residue) for c in (-3.0, -5.0))
    loc_ok = 0.0 if (on > 1e-3 * scale and off <= 1e-6 * scale) else 1.0
    _check(out, "res-location", "pole-lattice-localization", loc_ok, 0.5)
    return out


# ---------------------------------------------------------------------------
# intertwining


def intertwining_suite(cfg: RunConfig):
    dim = Dimension(cfg.n)
    out: list = []
    grid = sphgrid.make_grid(64)

    worst = 0.0
    for k in (1, 2):
        for i in range(cfg.count(10)):
            f = sphgrid.random_coeffs(16, cfg.seed + 500 + 29 * k + i)
            g = random_element(dim, cfg.seed + 600 + 31 * k + i, max_boost=0.3)
            defect = _covariant_intertwining_defect(dim, k, g, f, grid)
            worst = max(worst, defect)
    _check(out, "int-covariant", "residue-operator-intertwining", worst,
           cfg.tol("intertwining", 1e-4))

    worst = 0.0
    for i in range(cfg.count(6)):
        lam = 0.3 + 0.1 * i
        f = sphgrid.random_coeffs(16, cfg.seed + 700 + i)
        g = random_element(dim, cfg.seed + 800 + i, max_boost=0.3)
        worst = max(worst, _knapp_stein_intertwining_defect(dim, lam, g, f, grid))
    _check(out, "int-knapp-stein", "kernel-operator-intertwining", worst,
           cfg.tol("intertwining", 1e-4))
    return out


def _covariant_intertwining_defect(dim, k, g, f, grid) -> float:
    """|| R_k pi_{-k}(g) f - pi_k(g) R_k f ||_2 / ||f||_2 at the grid's
    truncation."""
    L = grid.L
    moved = sphgrid.sht_forward(reps.pi_act_coeffs(dim, -float(k), g, f, grid))
    path_a = spectral_ops.residue_operator_apply(dim, k, moved)
    rf = spectral_ops.residue_operator_apply(dim, k, f)
    path_b = sphgrid.sht_forward(reps.pi_act_coeffs(dim, float(k), g, rf, grid))
    diff = path_a.c - path_b.c[: L + 1]
    return float(np.linalg.norm(diff) / f.l2_norm())


def _knapp_stein_intertwining_defect(dim, lam, g, f, grid) -> float:
    """|| K_{-rho+2 lam} pi_lam(g) f - pi_{-lam}(g) K f ||_2 / ||f||_2."""
    alpha = -dim.rho + 2.0 * lam
    fam = spectral_ops.multiplier_family(dim, grid.L, "knapp_stein", alpha)
    moved = sphgrid.sht_forward(reps.pi_act_coeffs(dim, lam, g, f, grid))
    path_a = spectral_ops.apply_multiplier(fam, moved)
    kf = spectral_ops.apply_multiplier(
        spectral_ops.multiplier_family(dim, f.L, "knapp_stein", alpha), f)
    path_b = sphgrid.sht_forward(reps.pi_act_coeffs(dim, -lam, g, kf, grid))
    diff = path_a.c - path_b.c
    return float(np.linalg.norm(diff) / f.l2_norm())


# ---------------------------------------------------------------------------
# trilinear


SMOOTH_PAIRS = [((1, 1, 1), (3, 1, 1)), ((3, 1, 1), (3, 3, 1)),
                ((3, 3, 1), (3, 3, 3)), ((3, 3, 3), (5, 1, 1)),
                ((5, 1, 1), (5, 3, 1)), ((5, 3, 1), (1, 1, 1)),
                ((5, 3, 3), (3, 3, 1))]


def _conditioned_fields(dim, alpha, seed, grid_size, floor: float = 0.08):
    """Random real band-limited triples kept only when the form value is
    not nearly cancelled (|K| above floor times the field norms); a
    relative invariance defect is meaningless on degenerate draws."""
    for attempt in range(16):
        fs = [sphgrid.random_coeffs(4, seed + attempt * 37 + j, real_field=True)
              for j in range(3)]
        val = trilinear.generic_form(dim, alpha, *fs, grid_size=grid_size)
        if abs(val) >= floor * float(np.prod([f.l2_norm() for f in fs])):
            return fs, val
    raise RuntimeError("no well-conditioned field triple found")


def trilinear_suite(cfg: RunConfig):
    dim = Dimension(cfg.n)
    out: list = []
    one = sphgrid.coeffs_constant(1.0, 2)

    worst = 0.0
    for a, b in SMOOTH_PAIRS:
        va = trilinear.generic_form(dim, a, one, one, one, method="direct",
                                    grid_size=cfg.grid_triple)
        vb = trilinear.generic_form(dim, b, one, one, one, method="direct",
                                    grid_size=cfg.grid_triple)
        ra = trilinear.closed_form_constant(dim, a)
        rb = trilinear.closed_form_constant(dim, b)
        worst = max(worst, abs(va / vb - ra / rb) / abs(ra / rb))
    _check(out, "tri-gamma-ratio", "constant-input-gamma-ratio", worst,
           cfg.tol("gamma_ratio", 1e-6))

    worst = 0.0
    for i, a in enumerate([(3, 3, 1), (5, 1, 3), (3, 1, 1)]):
        f1 = sphgrid.random_coeffs(4, cfg.seed + 900 + i)
        f2 = sphgrid.random_coeffs(4, cfg.seed + 910 + i)
        f3 = sphgrid.random_coeffs(4, cfg.seed + 920 + i)
        vd = trilinear.generic_form(dim, a, f1, f2, f3, method="direct",
                                    grid_size=cfg.grid_triple)
        vf = trilinear.generic_form(dim, a, f1, f2, f3, method="fast",
                                    grid_size=cfg.grid_triple)
        worst = max(worst, abs(vd - vf) / abs(vd))
    _check(out, "tri-fast-direct", "fast-vs-direct-agreement", worst,
           cfg.tol("fast_direct", 1e-6))

    worst = 0.0
    for i in range(cfg.count(10)):
        rng_a = np.random.default_rng(cfg.seed + 950 + i)
        # generic non-integer exponents, singular enough to be interesting
        # but integrable enough that the default grids hold 1e-3
        alpha = tuple(1.45 + 0.5 * rng_a.random() for _ in range(3))
        g = random_element(dim, cfg.seed + 960 + i, max_boost=0.3)
        fs, base = _conditioned_fields(dim, alpha, cfg.seed + 970 + 101 * i,
                                       cfg.grid_triple)
        worst = max(worst, trilinear.generic_invariance_defect(
            dim, alpha, g, *fs, grid_size=cfg.grid_triple))
    _check(out, "tri-invariance", "generic-form-invariance", worst,
           cfg.tol("invariance", 1e-3))

    worst = 0.0
    for k, a1, a2 in ((0, 1.45, 2.83), (1, 1.45, 4.62)):
        for i in range(cfg.count(3)):
            g = random_element(dim, cfg.seed + 980 + 7 * k + i, max_boost=0.3)
            fs = [sphgrid.random_coeffs(4, cfg.seed + 990 + 5 * k + 3 * i + j,
                                        real_field=True) for j in range(3)]
            worst = max(worst, trilinear.singular_invariance_defect(
                dim, k, a1, a2, g, *fs, grid_size=cfg.grid_double,
                L_kernel=16))
    _check(out, "tri-singular-invariance", "singular-form-invariance", worst,
           cfg.tol("invariance", 1e-3))

    fs = [sphgrid.random_coeffs(4, cfg.seed + 1100 + j, real_field=True)
          for j in range(3)]
    bridge0 = trilinear.residue_bridge_defect(
        dim, 0, 3.3, 3.7, *fs, ring_radius=0.15, ring_size=cfg.ring_size,
        grid_size=cfg.grid_double, L_kernel=24)
    _check(out, "tri-bridge-k0", "residue-bridge-order-zero", bridge0,
           cfg.tol("bridge", 5e-3))

    worst = 0.0
    for a1, a2 in ((2.3, 5.6), (3.1, 4.8)):
        t_val = trilinear.singular_form(dim, 1, a1, a2, one, one, one,
                                        grid_size=cfg.grid_double, L_kernel=24)
        pred = trilinear.closed_form_constant_residue(dim, 1, a1, a2)
        got = spectral_ops.gjms_constant(dim, 1).c_k * t_val
        worst = max(worst, abs(got - pred) / abs(pred))
    _check(out, "tri-bridge-k1", "residue-bridge-order-one-closed-channel",
           worst, cfg.tol("bridge", 5e-3))

    scan = trilinear.pole_scan(dim, "alpha3", window=(-6.5, 0.5),
                               a1=0.31, a2=0.77)
    found3 = sorted(round(r.position.real) for r in scan if r.family == "alpha3")
    founds = sorted(round(r.position.real * 100) / 100 for r in scan
                    if r.family == "sum")
    plane_ok = (found3 == [-5, -3, -1]
                and founds == [-6.08, -4.08, -2.08]
                and not any(r.family == "unknown" for r in scan))
    _check(out, "tri-pole-planes", "pole-plane-lattice", 0.0 if plane_ok else 1.0, 0.5)
    scan = trilinear.pole_scan(dim, "singular_line", window=(-3.0, 3.0),
                               k=1, delta=0.26)
    lines = sorted(round(r.position.real) for r in scan
                   if r.family == "singular_line")
    line_ok = lines == [0, 2] and not any(r.family == "unknown" for r in scan)
    _check(out, "tri-pole-lines", "singular-line-lattice", 0.0 if line_ok else 1.0, 0.5)

    rng = np.random.default_rng(cfg.seed + 1200)
    f1 = sphgrid.random_coeffs(6, cfg.seed + 1201)
    x3 = _random_points(rng, 1)[0]
    g = random_element(dim, cfg.seed + 1202, max_boost=0.4)
    _check(out, "tri-pullback", "weighted-section-covariance",
           trilinear.kernel_pullback_defect(dim, 1, 4.0, g, f1, x3),
           cfg.tol("pullback", 1e-8))

    phi = sphgrid.random_coeffs(6, cfg.seed + 1203)
    y = _random_points(rng, 1)[0]
    pts = _random_points(rng, 30)
    pts = pts[np.linalg.norm(pts - y, axis=1) > 0.7]
    _check(out, "tri-split", "kernel-product-rule-split",
           trilinear.product_rule_split_defect(dim, 6.0, phi, y, pts),
           cfg.tol("split", 1e-5))
    return out


# ---------------------------------------------------------------------------
# driver


_SUITES = {
    "geometry": geometry_suite,
    "representation": representation_suite,
    "bernstein": bernstein_suite,
    "residues": residues_suite,
    "intertwining": intertwining_suite,
    "trilinear": trilinear_suite,
}


def run_suite(name: str, cfg: RunConfig) -> SuiteResult:
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    start = time.perf_counter()
    checks = _SUITES[name](cfg)
    return SuiteResult(name=name, checks=checks,
                       elapsed_s=time.perf_counter() - start)


def run_all(cfg: RunConfig, suites=None):
    names = SUITE_NAMES if suites is None else tuple(suites)
    return [run_suite(name, cfg) for name in names]


def _fmt(x: float) -> float:
    """Round to 12 significant digits for bit-stable report output."""
    if x == 0.0 or not np.isfinite(x):
        return float(x)
    return float(f"{x:.11e}")


def build_report(cfg: RunConfig, results) -> dict:
    suites = []
    for res in results:
        suites.append({
            "name": res.name,
            "passed": res.passed,
            "elapsed_s": res.elapsed_s,
            "checks": [{
                "id": c.id,
                "identity": c.identity,
                "measured": _fmt(c.measured),
                "tolerance": _fmt(c.tolerance),
                "passed": c.passed,
            } for c in res.checks],
        })
    return {
        "config": asdict(cfg),
        "suites": suites,
        "all_passed": all(r.passed for r in results),
        "timings": {"total_s": sum(r.elapsed_s for r in results)},
    }


REPORT_SCHEMA = {
    "config": dict,
    "suites": list,
    "all_passed": bool,
    "timings": dict,
}

CHECK_SCHEMA = {
    "id": str,
    "identity": str,
    "measured": (int, float),
    "tolerance": (int, float),
    "passed": bool,
}


def validate_report(report: dict):
    """Structural validation of a verification report; returns a list of
    problems (empty when the report conforms)."""
    problems = []
    for key, typ in REPORT_SCHEMA.items():
        if key not in report:
            problems.append(f"missing key {key!r}")
        elif not isinstance(report[key], typ):
            problems.append(f"key {key!r} has type {type(report[key]).__name__}")
    for suite in report.get("suites", []):
        for key in ("name", "passed", "elapsed_s", "checks"):
            if key not in suite:
                problems.append(f"suite missing {key!r}")
        for check in suite.get("checks", []):
            for key, typ in CHECK_SCHEMA.items():
                if key not in check:
                    problems.append(f"check missing {key!r}")
                elif not isinstance(check[key], typ):
                    problems.append(f"check key {key!r} has wrong type")
            if check.get("identity", "") == "":
                problems.append("check with empty identity")
    return problems
