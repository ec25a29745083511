"""Regularized pairings of chordal-distance kernels and numerical residue
extraction by contour sampling.

Residue convention.  The pairing s -> (|e - x|^s, f) is built from the
area family 2^{n-1} pi^rho 2^s Gamma(s/2 + rho) / Gamma(s/2 + 2 rho),
whose poles come from Gamma(s/2 + rho); all residues reported by this
module are taken with respect to the HALF parameter s/2 (that is, half
the plain contour residue in s).  With this normalization the residue at
the k-th pole is exactly c_k times the k-th covariant power applied to
the test function and evaluated at the base point, with
c_k = pi^rho / (4^k Gamma(rho+k) Gamma(k+1)), and the analogous statement
holds for the two-sphere kernel pairings in the alpha parameter.

The contour tool residue_ring itself is convention-free: it returns the
plain residue of the function it is given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lorentz import Dimension
from .sphgrid import Grid, HarmonicCoeffs, legendre_table, plm_index
from .spectral_ops import (DENOM_GUARD, DIRECT_MARGIN, bernstein_apply,
                           bernstein_rhs_factor, gjms_constant,
                           gjms_multiplier, knapp_stein_multipliers)

POLE_GUARD = 1e-6


@dataclass(frozen=True)
class LaurentFit:
    """Result of a contour ring fit around a (presumed simple) pole."""

    center: complex
    radius: float
    residue: complex
    regular_value: complex
    ring_size: int
    condition: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.ring_size < 8:
            raise ValueError("ring must have at least 8 samples")
        if not np.isfinite(self.condition):
            raise ValueError("condition must be finite")


def residue_ring(F, center: complex, radius: float = 0.1, m: int = 16) -> LaurentFit:
    """Fit the Laurent data of F around `center` from m equispaced samples
    on the circle of the given radius.

    residue       ~ (radius/m) sum_j F(z_j) e^{i theta_j}   (plain, in z)
    regular_value ~ mean of the samples (the zeroth Fourier mode)
    condition     ~ |second inverse Fourier mode| / |residue mode|; small
                    for a clean simple pole, O(1) when the ring sees a
                    higher-order pole or is badly placed.
    """
    if m < 8:
        raise ValueError("need at least 8 ring samples")
    theta = 2.0 * math.pi * np.arange(m) / m
    z = center + radius * np.exp(1j * theta)
    vals = np.array([complex(F(zj)) for zj in z])
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite samples on the residue ring")
    phase = np.exp(1j * theta)
    mu_m1 = np.mean(vals * phase)            # ~ a_{-1} / radius
    mu_0 = np.mean(vals)                     # ~ a_0
    mu_m2 = np.mean(vals * phase**2)         # ~ a_{-2} / radius^2
    residue = radius * mu_m1
    cond = abs(mu_m2) / (abs(mu_m1) + 1e-300)
    return LaurentFit(center=complex(center), radius=float(radius),
                      residue=complex(residue), regular_value=complex(mu_0),
                      ring_size=int(m), condition=float(cond))


# ---------------------------------------------------------------------------
# one-variable pairings (h_s, f)


def _pole_distance(dim: Dimension, s: complex) -> float:
    """Distance from s to the nearest pole -(n-1) - 2k, k >= 0."""
    base = -(dim.n - 1.0)
    k = max(0.0, round((base - complex(s).real) / 2.0))
    cands = [base - 2.0 * kk for kk in {int(k), int(k) + 1, max(int(k) - 1, 0)}]
    return min(abs(complex(s) - c) for c in cands)


def pair_distance_power(dim: Dimension, s: complex, f: HarmonicCoeffs) -> complex:
    """Regularized pairing (|e - x|^s, f) for a band-limited f on S^2.

    Directly: only the m = 0 coefficients pair with the zonal kernel, each
    weighted by the degree-l kernel eigenvalue.  Below the integrability
    threshold the value is continued by stepping the exponent up by 2 and
    applying the Bernstein-Sato operator to f:
        (h_s, f) = (h_{s+2}, [Delta + ((s+2)/2)((s+2)/2 + n - 2)] f)
                   / ((s+2)(s+2+n-3)).
    """
    if dim.n != 3:
        raise ValueError("coefficient pairings are implemented for n = 3")
    s = complex(s)
    if _pole_distance(dim, s) < POLE_GUARD:
        raise ValueError(f"s={s} is within {POLE_GUARD} of a pole; "
                         "sample on a ring instead")
    work = f.copy()
    scale = 1.0 + 0.0j
    while s.real <= -(dim.n - 1.0) + DIRECT_MARGIN:
        step = s + 2.0
        denom = bernstein_rhs_factor(dim, step)
        if abs(step) < DENOM_GUARD or abs(step + dim.n - 3.0) < DENOM_GUARD:
            raise ZeroDivisionError(
                f"descent denominator vanishes at s={step}; "
                "perturb s off the real axis")
        work = bernstein_apply(dim, step, work)
        scale /= denom
        s = step
    eig = knapp_stein_multipliers(dim, s + dim.rho, work.L)
    l = np.arange(work.L + 1)
    zonal = work.c[:, work.L] * np.sqrt((2 * l + 1) / (4.0 * math.pi))
    return complex(scale * np.dot(eig, zonal))


def residue_pair_distance_power(dim: Dimension, k: int, f: HarmonicCoeffs,
                                radius: float = 0.1, ring_size: int = 16) -> complex:
    """Operator-normalized residue of s -> (h_s, f) at s = -(n-1) - 2k,
    extracted from a contour ring (see the module docstring for the
    half-parameter convention).  Equals c_k times the k-th covariant power
    of f evaluated at the base point."""
    center = -(dim.n - 1.0) - 2.0 * k
    fit = residue_ring(lambda z: pair_distance_power(dim, z, f),
                       center, radius=radius, m=ring_size)
    return fit.residue / 2.0


def covariant_power_at_pole(dim: Dimension, k: int, f: HarmonicCoeffs) -> complex:
    """c_k (Delta_k f)(e): the predicted value of the k-th residue."""
    l = np.arange(f.L + 1)
    mult = np.array([gjms_multiplier(dim, k, int(ll)) for ll in l])
    zonal = f.c[:, f.L] * np.sqrt((2 * l + 1) / (4.0 * math.pi))
    return complex(gjms_constant(dim, k).c_k * np.dot(mult, zonal))


# ---------------------------------------------------------------------------
# two-variable pairings (k_alpha, f) on S^2 x S^2


def pair_separation_power(dim: Dimension, alpha: complex,
                          f1: HarmonicCoeffs, f2: HarmonicCoeffs) -> complex:
    """(k_alpha, f1 (x) f2) = int |x-y|^{-rho+alpha} f1(x) f2(y), evaluated
    through the kernel eigenvalues (continued in alpha where needed)."""
    s = complex(alpha) - dim.rho
    if _pole_distance(dim, s) < POLE_GUARD:
        raise ValueError(f"alpha={alpha} is within {POLE_GUARD} of a pole")
    L = min(f1.L, f2.L)
    eig = knapp_stein_multipliers(dim, complex(alpha), L)
    return complex(np.dot(eig, _degree_pairings(f1, f2, L)))


def _degree_pairings(f1: HarmonicCoeffs, f2: HarmonicCoeffs, L: int) -> np.ndarray:
    """Degree-by-degree bilinear pairings sum_m (-1)^m f1[l,m] f2[l,-m]."""
    out = np.zeros(L + 1, dtype=complex)
    for l in range(L + 1):
        for m in range(-l, l + 1):
            out[l] += (-1) ** m * f1.get(l, m) * f2.get(l, -m)
    return out


def residue_separation_power(dim: Dimension, k: int, f1: HarmonicCoeffs,
                             f2: HarmonicCoeffs, side: int = 1) -> complex:
    """Residue (half-parameter convention) of alpha -> (k_alpha, f1 (x) f2)
    at alpha = -rho - 2k via the residue operator acting on the chosen
    side; the operator is symmetric so both sides agree."""
    L = min(f1.L, f2.L)
    mult = np.array([gjms_multiplier(dim, k, l) for l in range(L + 1)])
    pairs = _degree_pairings(f1, f2, L)
    del side  # the diagonal action is identical on either slot
    return complex(gjms_constant(dim, k).c_k * np.dot(mult, pairs))


def residue_separation_power_ring(dim: Dimension, k: int, f1: HarmonicCoeffs,
                                  f2: HarmonicCoeffs, radius: float = 0.1,
                                  ring_size: int = 16) -> complex:
    center = -dim.rho - 2.0 * k
    fit = residue_ring(lambda a: pair_separation_power(dim, a, f1, f2),
                       center, radius=radius, m=ring_size)
    return fit.residue / 2.0


# ---------------------------------------------------------------------------
# general (non-product) two-sphere data


def sht_matrices(grid: Grid, L: int):
    """Analysis and evaluation matrices for a grid, in the flat (l, m)
    layout idx = l^2 + l + m.  analysis[idx, node] integrates against
    conj(Y_lm); evaluation[node, idx] holds Y_lm(node)."""
    npairs = (L + 1) ** 2
    pts = grid.flat_points()
    u = pts[:, 0]
    phi = np.arctan2(pts[:, 2], pts[:, 1])
    tab = legendre_table(L, u)
    ev = np.empty((pts.shape[0], npairs), dtype=complex)
    for l in range(L + 1):
        for m in range(0, l + 1):
            base = tab[plm_index(l, m)]
            ev[:, l * l + l + m] = base * np.exp(1j * m * phi)
            if m > 0:
                ev[:, l * l + l - m] = (-1) ** m * base * np.exp(-1j * m * phi)
    analysis = ev.conj().T * grid.flat_weights()[None, :]
    return analysis, ev


def pair_separation_power_grid(dim: Dimension, alpha: complex, values,
                               grid1: Grid, grid2: Grid, L: int) -> complex:
    """(k_alpha, f) for f sampled on grid1 x grid2 (shape N1 x N2, flat),
    through the zonal expansion of the kernel at truncation L."""
    values = np.asarray(values, dtype=complex)
    an1, _ = sht_matrices(grid1, L)
    an2, _ = sht_matrices(grid2, L)
    A = an1 @ values                       # (npairs, N2): analysis in x
    C = an2 @ A.T                          # (npairs2, npairs1)
    eig = knapp_stein_multipliers(dim, complex(alpha), L)
    total = 0.0 + 0.0j
    for l in range(L + 1):
        acc = 0.0 + 0.0j
        for m in range(-l, l + 1):
            acc += (-1) ** m * C[l * l + l + m, l * l + l - m]
        total += eig[l] * acc
    return complex(total)


def residue_separation_power_grid(dim: Dimension, k: int, values,
                                  grid1: Grid, grid2: Grid, L: int,
                                  side: int = 1) -> complex:
    """Predicted residue (half-parameter convention) for general two-sphere
    data: integrate the residue operator applied in one slot along the
    diagonal, int (R_k^{(side)} f)(x, x) dsigma(x)."""
    values = np.asarray(values, dtype=complex)
    c_k = gjms_constant(dim, k).c_k
    mult = np.concatenate([np.full(2 * l + 1, gjms_multiplier(dim, k, l))
                           for l in range(L + 1)])
    if side == 1:
        an1, _ = sht_matrices(grid1, L)
        coef = an1 @ values                    # (npairs, N2): R_k acts in x
        _, ev2 = sht_matrices(grid2, L)
        # value of the filtered section at (y, y), y running over grid2
        diag = np.einsum("jp,pj->j", ev2, mult[:, None] * coef)
        return complex(c_k * np.dot(diag, grid2.flat_weights()))
    an2, _ = sht_matrices(grid2, L)
    coef = an2 @ values.T                      # (npairs, N1): R_k acts in y
    _, ev1 = sht_matrices(grid1, L)
    diag = np.einsum("jp,pj->j", ev1, mult[:, None] * coef)
    return complex(c_k * np.dot(diag, grid1.flat_weights()))
