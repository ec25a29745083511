"""Invariant trilinear forms on S^2: the generic three-kernel family, the
singular family built from covariant powers of the Laplacian, the residue
bridge between them, and pole scans of the closed-form channel.

Parameters.  The kernel triple K(x1, x2, x3) couples slot exponents
alpha = (a1, a2, a3) to kernels k_{a1}(x2,x3) k_{a2}(x3,x1) k_{a3}(x1,x2)
with k_a(x, y) = |x - y|^{-rho + a}.  Representation parameters relate by
    a1 = -l1 + l2 + l3,  a2 = l1 - l2 + l3,  a3 = l1 + l2 - l3,
equivalently l1 = (a2+a3)/2, l2 = (a3+a1)/2, l3 = (a1+a2)/2.

Closed form.  For constant inputs the generic form has, at n = 3, the
closed expression

    K(1,1,1) = 8 pi^3 2^{a1+a2+a3}
               Gamma((a1+a2+a3+rho)/2) prod_j Gamma((a_j+rho)/2)
               / prod_{i<j} Gamma(rho + (a_i+a_j)/2).

The 2^{sum alpha} factor is forced by the kernel normalization
|x - y| = 2 sin(theta/2) (each kernel contributes 2^{a_j - rho}); the
prefactor 8 pi^3 and the factor are validated in the test suite against
exactly integrable polynomial kernels.  Residues are reported with
respect to the half parameter, matching the convention in `mero`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lorentz import Dimension, ConformalMap, act, conformal_factor, inverse
from .reps import field_from_coeffs, pi_pointwise
from .sphgrid import (Grid, HarmonicCoeffs, flat_degree_vector, make_grid,
                      sht_forward_columns, sht_synthesize_columns)
from .special import gamma_ratio
from .spectral_ops import gjms_constant, gjms_multiplier, knapp_stein_multipliers
from .mero import residue_ring

CONVERGENCE_MARGIN = 0.25
T_OUTER_MARGIN = 0.25


# ---------------------------------------------------------------------------
# parameter bookkeeping


@dataclass(frozen=True)
class ParameterTriple:
    """Coupled (alpha, lambda) parameter triples; the linear relations
    between them hold exactly by construction."""

    alpha: tuple
    lam: tuple

    def __post_init__(self):
        a = tuple(complex(v) for v in self.alpha)
        l = tuple(complex(v) for v in self.lam)
        expect = (-l[0] + l[1] + l[2], l[0] - l[1] + l[2], l[0] + l[1] - l[2])
        scale = 1.0 + max(abs(v) for v in a + l)
        if max(abs(a[i] - expect[i]) for i in range(3)) > 1e-13 * scale:
            raise ValueError("alpha and lambda are inconsistent")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "lam", l)


def alpha_from_lambda(lam) -> ParameterTriple:
    l1, l2, l3 = (complex(v) for v in lam)
    return ParameterTriple(alpha=(-l1 + l2 + l3, l1 - l2 + l3, l1 + l2 - l3),
                           lam=(l1, l2, l3))


def lambda_from_alpha(alpha) -> ParameterTriple:
    a1, a2, a3 = (complex(v) for v in alpha)
    return ParameterTriple(alpha=(a1, a2, a3),
                           lam=((a2 + a3) / 2, (a3 + a1) / 2, (a1 + a2) / 2))


@dataclass(frozen=True)
class PoleReport:
    """One detected pole of a scanned one-parameter family."""

    family: str          # alpha1 | alpha2 | alpha3 | sum | singular_line | unknown
    k: int               # lattice index within the family (-1 if unknown)
    location: str        # human-readable description of the plane or line
    position: complex    # fitted pole position along the scan variable
    residue: complex     # plain contour residue at the pole


# ---------------------------------------------------------------------------
# closed forms (constant inputs, n = 3)


def gamma_ratio_factor(dim: Dimension, alpha) -> complex:
    """The bare Gamma-quotient of the constant-input closed form (without
    the 2^{sum alpha} kernel-normalization factor)."""
    rho = dim.rho
    a1, a2, a3 = (complex(v) for v in alpha)
    num = [(a1 + a2 + a3 + rho) / 2, (a1 + rho) / 2, (a2 + rho) / 2, (a3 + rho) / 2]
    den = [rho + (a2 + a3) / 2, rho + (a3 + a1) / 2, rho + (a1 + a2) / 2]
    return gamma_ratio(num, den)


def closed_form_constant(dim: Dimension, alpha) -> complex:
    """Closed-form value of the generic form on constant inputs (n = 3)."""
    if dim.n != 3:
        raise ValueError("the closed form is implemented for n = 3")
    a1, a2, a3 = (complex(v) for v in alpha)
    return 8.0 * math.pi ** 3 * 2.0 ** (a1 + a2 + a3) * gamma_ratio_factor(dim, alpha)


def closed_form_constant_residue(dim: Dimension, k: int, a1, a2) -> complex:
    """Half-parameter residue of the closed form in a3 at a3 = -rho - 2k
    for constant inputs; equals c_k times the singular form of constant
    inputs."""
    if dim.n != 3:
        raise ValueError("the closed form is implemented for n = 3")
    rho = dim.rho
    a1, a2 = complex(a1), complex(a2)
    pref = (8.0 * math.pi ** 3 * 2.0 ** (a1 + a2 - rho - 2 * k)
            * (-1.0) ** k / math.gamma(k + 1.0))
    num = [(a1 + a2) / 2 - k, (a1 + rho) / 2, (a2 + rho) / 2]
    den = [(rho + a2) / 2 - k, (rho + a1) / 2 - k, rho + (a1 + a2) / 2]
    return pref * gamma_ratio(num, den)


# ---------------------------------------------------------------------------
# grids, fields, kernels


def _as_field(f):
    return field_from_coeffs(f) if isinstance(f, HarmonicCoeffs) else f


def triple_grids(grid_size=(24, 48)):
    """Three same-size grids with staggered azimuths so that no pair of
    nodes across spheres coincides (the kernels may carry negative
    powers of the separation)."""
    nt, npz = grid_size
    dphi = 2.0 * math.pi / npz
    return tuple(make_grid(n_theta=nt, n_phi=npz, phi_offset=j * dphi / 3.0)
                 for j in range(3))


def double_grids(grid_size=(48, 96)):
    nt, npz = grid_size
    dphi = 2.0 * math.pi / npz
    return (make_grid(n_theta=nt, n_phi=npz, phi_offset=0.0),
            make_grid(n_theta=nt, n_phi=npz, phi_offset=dphi / 2.0))


def chordal_power(P: np.ndarray, Q: np.ndarray, s: complex) -> np.ndarray:
    """|p - q|^s for unit vectors, via 2 - 2 <p, q>."""
    r2 = np.maximum(2.0 - 2.0 * (P @ Q.T), 0.0)
    s = complex(s)
    if s.imag == 0.0:
        return r2 ** (s.real / 2.0)
    return r2 ** (s / 2.0)


def _check_convergence(dim: Dimension, alpha, margin: float) -> None:
    rho = dim.rho
    a = [complex(v) for v in alpha]
    bad = [f"Re a{j + 1} = {a[j].real:g} <= {-rho + margin:g}"
           for j in range(3) if a[j].real <= -rho + margin]
    if sum(v.real for v in a) <= -rho + margin:
        bad.append(f"Re(a1+a2+a3) = {sum(v.real for v in a):g} <= {-rho + margin:g}")
    if bad:
        raise ValueError(
            "parameters outside the safe absolute-convergence region "
            f"(margin {margin}): " + "; ".join(bad)
            + ". Use generic_form_alpha3_family for continued evaluation.")


# ---------------------------------------------------------------------------
# the generic trilinear form


class TripleEngine:
    """Grids, kernel matrices and transform plans for one parameter triple,
    reusable across different input fields (the expensive pieces depend on
    alpha and the grids only)."""

    def __init__(self, dim: Dimension, alpha, method: str = "direct",
                 grid_size=(24, 48), L_kernel: int | None = None,
                 margin: float = CONVERGENCE_MARGIN,
                 default_degree: int = 8):
        if dim.n != 3:
            raise ValueError("trilinear quadrature is implemented for n = 3")
        _check_convergence(dim, alpha, margin)
        self.dim = dim
        self.alpha = tuple(complex(v) for v in alpha)
        self.method = method
        a1, a2, a3 = self.alpha
        rho = dim.rho
        self.grids = triple_grids(grid_size)
        g1, g2, g3 = self.grids
        self.P = tuple(g.flat_points() for g in self.grids)
        self.W = tuple(g.flat_weights() for g in self.grids)
        self.K3 = chordal_power(self.P[0], self.P[1], a3 - rho)
        self.K2 = chordal_power(self.P[2], self.P[0], a2 - rho)
        if method == "direct":
            self.K1 = chordal_power(self.P[1], self.P[2], a1 - rho)
        elif method == "fast":
            L_K = (min(g3.L, 4 * default_degree) if L_kernel is None
                   else L_kernel)
            if L_K > g3.L:
                raise ValueError(f"grid resolves degree {g3.L}, requested {L_K}")
            self.L_K = L_K
            self.eig1 = flat_degree_vector(knapp_stein_multipliers(dim, a1, L_K))
        else:
            raise ValueError("method must be 'direct' or 'fast'")

    def value(self, f1, f2, f3) -> complex:
        g1, g2, g3 = self.grids
        F1 = np.asarray(_as_field(f1)(self.P[0]))
        F2 = np.asarray(_as_field(f2)(self.P[1]))
        F3 = np.asarray(_as_field(f3)(self.P[2]))
        if self.method == "direct":
            M = self.K1 @ (self.K2 * (F3 * self.W[2])[:, None])   # (N2, N1)
        else:
            G = self.K2 * F3[:, None]   # the transform carries the measure
            C = sht_forward_columns(g3, G, self.L_K)
            M = sht_synthesize_columns(g2, self.eig1[:, None] * C, self.L_K)
        inner = np.einsum("ab,ba->a", self.K3, (F2 * self.W[1])[:, None] * M)
        return complex(np.dot(F1 * self.W[0], inner))


def generic_form(dim: Dimension, alpha, f1, f2, f3, method: str = "direct",
                 grid_size=(24, 48), L_kernel: int | None = None,
                 margin: float = CONVERGENCE_MARGIN) -> complex:
    """The generic invariant trilinear form on three fields.

    f1, f2, f3 may be HarmonicCoeffs or callables on point arrays.

    method "direct": full triple quadrature with exact kernel matrices.
    method "fast":   the middle kernel is applied through its zonal
                     eigenvalues at truncation L_kernel (default: 4x the
                     field degree, capped at what the grid resolves);
                     agrees with "direct" to the kernel-truncation error.
    Raises outside the safe absolute-convergence region.
    """
    engine = TripleEngine(dim, alpha, method=method, grid_size=grid_size,
                          L_kernel=L_kernel, margin=margin,
                          default_degree=_field_degree(f1, f2, f3))
    return engine.value(f1, f2, f3)


def _field_degree(*fields) -> int:
    degs = [f.L for f in fields if isinstance(f, HarmonicCoeffs)]
    return max(degs) if degs else 8


def generic_form_alpha3_family(dim: Dimension, a1, a2, f1, f2, f3,
                               grid_size=(48, 96), L_kernel: int = 32):
    """Continued evaluation of the generic form as a function of the third
    parameter, with (a1, a2) fixed inside the direct regime.

    The two outer quadratures and the middle convolution are assembled
    once; the third-slot kernel acts through its zonal eigenvalues, which
    are continued in a3 by the downward Bernstein-Sato relation.  The
    returned callable is therefore meromorphic in a3 off the pole lattice
    and can be sampled on residue rings around -rho - 2k.

    Returns (evaluate, degree_weights): evaluate(a3) -> complex, and the
    per-degree weights A_l with evaluate(a3) = sum_l e_l(a3 - rho) A_l,
    useful for truncation diagnostics.
    """
    if dim.n != 3:
        raise ValueError("trilinear quadrature is implemented for n = 3")
    a1, a2 = complex(a1), complex(a2)
    rho = dim.rho
    g1, g2, g3 = triple_grids(grid_size)
    if L_kernel > min(g2.L, g3.L):
        raise ValueError("kernel truncation exceeds what the grid resolves")
    F1 = np.asarray(_as_field(f1)(g1.flat_points()))
    F2 = np.asarray(_as_field(f2)(g2.flat_points()))
    F3 = np.asarray(_as_field(f3)(g3.flat_points()))
    W1 = g1.flat_weights()
    P1, P2, P3 = g1.flat_points(), g2.flat_points(), g3.flat_points()

    K2 = chordal_power(P3, P1, a2 - rho)
    G = K2 * F3[:, None]          # the transforms carry the measure
    C = sht_forward_columns(g3, G, L_kernel)
    eig1 = flat_degree_vector(knapp_stein_multipliers(dim, a1, L_kernel))
    H = sht_synthesize_columns(g2, eig1[:, None] * C, L_kernel)   # (N2, N1)
    D = sht_forward_columns(g2, F2[:, None] * H, L_kernel)        # (npairs, N1)
    ev1 = _evaluation_matrix(g1, L_kernel)                         # (N1, npairs)
    per_lm = np.einsum("pj,jp->p", D, ev1 * (F1 * W1)[:, None])
    A = np.array([per_lm[l * l: (l + 1) ** 2].sum() for l in range(L_kernel + 1)])

    def evaluate(a3: complex) -> complex:
        eig3 = knapp_stein_multipliers(dim, complex(a3), L_kernel)
        return complex(np.dot(eig3, A))

    return evaluate, A


def _evaluation_matrix(grid: Grid, L: int) -> np.ndarray:
    ones = np.zeros(((L + 1) ** 2, (L + 1) ** 2), dtype=complex)
    np.fill_diagonal(ones, 1.0)
    return sht_synthesize_columns(grid, ones, L)


def generic_invariance_defect(dim: Dimension, alpha, g: ConformalMap,
                              f1, f2, f3, method: str = "direct",
                              grid_size=(24, 48),
                              L_kernel: int | None = None) -> float:
    """Relative change of the generic form when the three inputs move by
    the principal-series actions tied to alpha."""
    lam = lambda_from_alpha(alpha).lam
    engine = TripleEngine(dim, alpha, method=method, grid_size=grid_size,
                          L_kernel=L_kernel,
                          default_degree=_field_degree(f1, f2, f3))
    base = engine.value(f1, f2, f3)
    moved = engine.value(pi_pointwise(dim, lam[0], g, f1),
                         pi_pointwise(dim, lam[1], g, f2),
                         pi_pointwise(dim, lam[2], g, f3))
    return abs(moved - base) / abs(base)


# ---------------------------------------------------------------------------
# the singular trilinear forms


def singular_form(dim: Dimension, k: int, a1, a2, f1, f2, f3,
                  grid_size=(48, 96), L_kernel: int | None = None,
                  outer_margin: float = T_OUTER_MARGIN,
                  return_truncation: bool = False):
    """The k-th singular trilinear form

        int int f3(x3) f2(x) Delta_k[f1(.) |x3 - .|^{-rho+a2}](x)
                |x - x3|^{-rho+a1} dsigma(x) dsigma(x3)

    in the direct-evaluation regime Re(a2 - rho) > 2k + 1 (the inner
    section is then classically 2k+1 times differentiable) and
    Re a1 > -rho + 0.25 (integrable outer kernel).  The covariant power
    acts spectrally at elevated truncation; the relative weight of the
    top quarter of the retained degrees is available as a truncation
    indicator.
    """
    if dim.n != 3:
        raise ValueError("trilinear quadrature is implemented for n = 3")
    a1, a2 = complex(a1), complex(a2)
    rho = dim.rho
    if a2.real - rho <= 2 * k + 1:
        raise ValueError(
            f"Re(a2 - rho) = {a2.real - rho:g} <= {2 * k + 1}: outside the "
            "direct regime; the continued singular form (meromorphic in "
            "(a1, a2)) is not implemented numerically")
    if a1.real <= -rho + outer_margin:
        raise ValueError(f"Re a1 = {a1.real:g} <= {-rho + outer_margin:g}: "
                         "outer kernel not safely integrable")
    gx, g3 = double_grids(grid_size)
    L_K = (min(gx.L, 4 * _field_degree(f1, f2, f3)) if L_kernel is None
           else L_kernel)
    if L_K > gx.L:
        raise ValueError(f"grid resolves degree {gx.L}, requested {L_K}")
    F1 = np.asarray(_as_field(f1)(gx.flat_points()))
    F2 = np.asarray(_as_field(f2)(gx.flat_points()))
    F3 = np.asarray(_as_field(f3)(g3.flat_points()))
    Wx, W3 = gx.flat_weights(), g3.flat_weights()
    Px, P3 = gx.flat_points(), g3.flat_points()
    mult = flat_degree_vector(np.array([gjms_multiplier(dim, k, l)
                                        for l in range(L_K + 1)]))

    total = 0.0 + 0.0j
    tail = 0.0 + 0.0j
    cut = (max(1, (3 * L_K) // 4)) ** 2
    block = max(1, (1 << 22) // Px.shape[0])
    for start in range(0, P3.shape[0], block):
        sl = slice(start, min(start + block, P3.shape[0]))
        K2b = chordal_power(Px, P3[sl], a2 - rho)          # (Nx, b)
        C = sht_forward_columns(gx, F1[:, None] * K2b, L_K)
        Hb = sht_synthesize_columns(gx, mult[:, None] * C, L_K)
        K1b = chordal_power(Px, P3[sl], a1 - rho)
        contrib = (F2 * Wx) @ (Hb * K1b)                   # (b,)
        total += np.dot(contrib, F3[sl] * W3[sl])
        if return_truncation:
            Ct = C.copy()
            Ct[:cut] = 0.0
            Hb_t = sht_synthesize_columns(gx, mult[:, None] * Ct, L_K)
            tail += np.dot((F2 * Wx) @ (Hb_t * K1b), F3[sl] * W3[sl])
    if return_truncation:
        return complex(total), abs(tail) / (abs(total) + 1e-300)
    return complex(total)


def singular_invariance_defect(dim: Dimension, k: int, a1, a2,
                               g: ConformalMap, f1, f2, f3,
                               grid_size=(48, 96),
                               L_kernel: int | None = None) -> float:
    """Relative change of the singular form under the principal-series
    actions tied to (a1, a2, a3 = -rho - 2k)."""
    a3 = -dim.rho - 2.0 * k
    lam = lambda_from_alpha((a1, a2, a3)).lam
    base = singular_form(dim, k, a1, a2, f1, f2, f3, grid_size=grid_size,
                         L_kernel=L_kernel)
    moved = singular_form(dim, k, a1, a2,
                          pi_pointwise(dim, lam[0], g, f1),
                          pi_pointwise(dim, lam[1], g, f2),
                          pi_pointwise(dim, lam[2], g, f3),
                          grid_size=grid_size, L_kernel=L_kernel)
    return abs(moved - base) / abs(base)


# ---------------------------------------------------------------------------
# the residue bridge


def residue_bridge_defect(dim: Dimension, k: int, a1, a2, f1, f2, f3,
                          ring_radius: float = 0.15, ring_size: int = 16,
                          grid_size=(48, 96), L_kernel: int = 32,
                          t_grid_size=(48, 96),
                          t_L_kernel: int | None = None) -> float:
    """Relative mismatch between the contour residue of the generic form
    in its third parameter at -rho - 2k (half-parameter convention,
    evaluated through the continued spectral family) and c_k times the
    singular form."""
    evaluate, _ = generic_form_alpha3_family(dim, a1, a2, f1, f2, f3,
                                             grid_size=grid_size,
                                             L_kernel=L_kernel)
    center = -dim.rho - 2.0 * k
    fit = residue_ring(evaluate, center, radius=ring_radius, m=ring_size)
    lhs = fit.residue / 2.0
    t_val = singular_form(dim, k, a1, a2, f1, f2, f3, grid_size=t_grid_size,
                          L_kernel=t_L_kernel)
    rhs = gjms_constant(dim, k).c_k * t_val
    return abs(lhs - rhs) / abs(rhs)


# ---------------------------------------------------------------------------
# pointwise identity checks


def kernel_pullback_defect(dim: Dimension, k: int, alpha2, g: ConformalMap,
                           f1: HarmonicCoeffs, x3: np.ndarray,
                           grid: Grid | None = None) -> float:
    """Covariance of the weighted section F_{x3}[f](x) = f(x)|x3 - x|^{-rho+a2}.

    With l1 = -k - rho/2 + a2/2, transporting f by pi_{l1}(g) inside the
    section equals the pi_{-k} transport of the section based at
    y3 = g^{-1}(x3), times kappa(g, y3)^{(-rho+a2)/2}.  Returns the
    sup-norm defect over the grid, relative to the section's sup-norm.
    """
    a2 = complex(alpha2)
    rho = dim.rho
    lam1 = -k - rho / 2.0 + a2 / 2.0
    grid = make_grid(32) if grid is None else grid
    pts = grid.flat_points()
    x3 = np.asarray(x3, dtype=float)

    lhs = (pi_pointwise(dim, lam1, g, f1)(pts)
           * chordal_power(pts, x3[None, :], a2 - rho)[:, 0])

    ginv = inverse(g)
    y3 = act(ginv, x3)
    kappa_y3 = conformal_factor(g, y3)
    mapped = act(ginv, pts)
    kappa_pts = conformal_factor(ginv, pts)
    section = (field_from_coeffs(f1)(mapped)
               * chordal_power(mapped, y3[None, :], a2 - rho)[:, 0])
    rhs = kappa_y3 ** ((-rho + a2) / 2.0) * kappa_pts ** (rho - k) * section
    return float(np.abs(lhs - rhs).max() / (np.abs(lhs).max() + 1e-300))


def product_rule_split_defect(dim: Dimension, s: complex, phi: HarmonicCoeffs,
                              y: np.ndarray, test_points: np.ndarray,
                              L_work: int = 48, fd_step: float = 5e-3) -> float:
    """Check that the Laplacian of |x - y|^s phi(x) splits off the kernel
    power exactly: Delta_x[r^s phi] = r^{s-2} psi with

        psi = [-(s/2)(s/2 + n - 2) r^2 + s(s + n - 3)] phi
              + s (grad_x r^2) . grad phi + r^2 Delta phi,

    r = |x - y|.  The left side is evaluated spectrally on a degree-L_work
    expansion; the right side from synthesized values, a spectral
    Laplacian, and great-circle finite differences for the gradient term.
    Returns max |LHS - RHS| / max |RHS| over the test points.
    """
    if dim.n != 3:
        raise ValueError("implemented for n = 3")
    s = complex(s)
    y = np.asarray(y, dtype=float)
    pts = np.asarray(test_points, dtype=float).reshape(-1, 3)
    grid = make_grid(L_work)

    from .sphgrid import GridFunction, sht_forward, synth_at_points
    from .spectral_ops import multiplier_family, apply_multiplier

    gp = grid.points()
    r_grid = np.linalg.norm(gp - y, axis=-1)
    W = GridFunction(grid, r_grid ** s * synth_at_points(phi, gp))
    cW = sht_forward(W)
    lap = multiplier_family(dim, L_work, "laplacian")
    lhs = synth_at_points(apply_multiplier(lap, cW), pts)

    r2 = np.maximum(2.0 - 2.0 * pts @ y, 0.0)
    phi_vals = synth_at_points(phi, pts)
    lap_phi_fam = multiplier_family(dim, phi.L, "laplacian")
    lap_phi = synth_at_points(apply_multiplier(lap_phi_fam, phi), pts)
    # tangential gradient of r^2 = 2 - 2 <x, y>: project -2y onto T_x
    v = -2.0 * (y[None, :] - (pts @ y)[:, None] * pts)
    vnorm = np.linalg.norm(v, axis=1)
    grad_term = np.zeros(pts.shape[0], dtype=complex)
    good = vnorm > 1e-12
    vhat = np.zeros_like(v)
    vhat[good] = v[good] / vnorm[good][:, None]
    # five-point great-circle derivative of phi along vhat
    taus = np.array([-2.0, -1.0, 1.0, 2.0]) * fd_step
    wts = np.array([1.0, -8.0, 8.0, -1.0]) / (12.0 * fd_step)
    for tau, wt in zip(taus, wts):
        moved = np.cos(tau) * pts + np.sin(tau) * vhat
        grad_term += wt * synth_at_points(phi, moved)
    grad_term *= vnorm
    n = dim.n
    psi = ((-(s / 2.0) * (s / 2.0 + n - 2.0) * r2 + s * (s + n - 3.0)) * phi_vals
           + s * grad_term + r2 * lap_phi)
    rhs = r2 ** ((s - 2.0) / 2.0) * psi
    return float(np.abs(lhs - rhs).max() / (np.abs(rhs).max() + 1e-300))


# ---------------------------------------------------------------------------
# pole scans


def _classify(dim: Dimension, family: str, position: complex, fixed: dict,
              k_line: int | None, tol: float = 1e-3):
    rho = dim.rho
    p = complex(position)
    if family == "alpha3":
        k = round((-rho - p.real) / 2.0)
        if k >= 0 and abs(p - (-rho - 2.0 * k)) < tol:
            return ("alpha3", int(k), f"alpha3 = -rho - 2k, k = {int(k)}")
        total = fixed["a1"] + fixed["a2"] + p
        k = round((-rho - total.real) / 2.0)
        if k >= 0 and abs(total - (-rho - 2.0 * k)) < tol:
            return ("sum", int(k), f"alpha1+alpha2+alpha3 = -rho - 2k, k = {int(k)}")
    else:
        l = round((2.0 * k_line - p.real) / 2.0)
        if l >= 0 and abs(p - (2.0 * k_line - 2.0 * l)) < tol:
            return ("singular_line", int(l),
                    f"alpha1+alpha2 = 2k - 2l, k = {k_line}, l = {int(l)}")
        for slot, aj in (("alpha1", (p + fixed["delta"]) / 2.0),
                         ("alpha2", (p - fixed["delta"]) / 2.0)):
            kj = round((-rho - aj.real) / 2.0)
            if kj >= 0 and abs(aj - (-rho - 2.0 * kj)) < tol:
                return (slot, int(kj), f"{slot} = -rho - 2k, k = {int(kj)}")
    return ("unknown", -1, "unclassified pole")


def pole_scan(dim: Dimension, family: str, window, step: float = 0.2,
              ring_radius: float = 0.15, ring_size: int = 16,
              residue_threshold: float = 1e-6, a1: complex = 0.31,
              a2: complex = 0.77, k: int = 1, delta: float = 0.26):
    """Scan the closed-form constant-input channel for poles.

    family "alpha3":        scan the third slot parameter with (a1, a2)
                            fixed; detects the third-slot planes and the
                            sum planes.
    family "singular_line": scan tau = a1 + a2 (at fixed difference
                            `delta`) of the k-th residue expression;
                            detects the singular lines tau = 2k - 2l and
                            any first/second-slot planes in the window.

    Rings of the given radius are centered on a lattice of the given step;
    a pole is reported when the fitted |residue| exceeds the threshold
    relative to the sampled magnitude.  Duplicate detections of one pole
    are merged using the fitted position.
    """
    lo, hi = window
    if family == "alpha3":
        func = lambda z: closed_form_constant(dim, (a1, a2, z))
        fixed = {"a1": complex(a1), "a2": complex(a2)}
        k_line = None
    elif family == "singular_line":
        func = lambda z: closed_form_constant_residue(
            dim, k, (z + delta) / 2.0, (z - delta) / 2.0)
        fixed = {"delta": complex(delta)}
        k_line = k
    else:
        raise ValueError("family must be 'alpha3' or 'singular_line'")

    hits = []
    for center in np.arange(lo, hi + step / 2.0, step):
        theta = 2.0 * math.pi * np.arange(ring_size) / ring_size
        z = center + ring_radius * np.exp(1j * theta)
        vals = np.array([func(zj) for zj in z])
        phase = np.exp(1j * theta)
        mu1 = np.mean(vals * phase)
        mu2 = np.mean(vals * phase**2)
        residue = ring_radius * mu1
        scale = ring_radius * np.abs(vals).max() + 1e-300
        if abs(residue) > residue_threshold * scale:
            position = center + ring_radius * mu2 / mu1
            if abs(position - center) < ring_radius:
                hits.append((complex(position), complex(residue)))
    merged: list[tuple[complex, complex]] = []
    for pos, res in sorted(hits, key=lambda h: h[0].real):
        if merged and abs(pos - merged[-1][0]) < step:
            continue
        merged.append((pos, res))
    reports = []
    for pos, res in merged:
        fam, kk, loc = _classify(dim, family, pos, fixed, k_line)
        reports.append(PoleReport(family=fam, k=kk, location=loc,
                                  position=pos, residue=res))
    return reports
