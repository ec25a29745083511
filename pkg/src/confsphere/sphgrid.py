"""Quadrature grids and spherical-harmonic analysis on S^2, plus 1-D zonal
integration for S^{n-1} with n >= 3.

Conventions (fixed throughout the package):
  * the polar axis is the FIRST coordinate axis, so a point is
    x = (cos theta, sin theta cos phi, sin theta sin phi);
  * harmonics are complex, orthonormal, with the Condon-Shortley phase;
  * the measure is the plain surface measure, total mass 4 pi.

Grids are Gauss-Legendre in cos theta times a uniform azimuth, which makes
quadrature exact for band-limited integrands and behaves well against the
integrable endpoint singularities of the two-point kernels used elsewhere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .lorentz import Dimension
from .special import tanhsinh_unit, ultraspherical_table

MAX_DEGREE = 512


# ---------------------------------------------------------------------------
# normalized associated Legendre tables


def plm_index(l: int, m: int) -> int:
    """Index of (l, m), m >= 0, in the packed table."""
    return l * (l + 1) // 2 + m


def legendre_table(L: int, u: np.ndarray) -> np.ndarray:
    """Packed table of fully normalized associated Legendre values
    p_lm(u) for 0 <= m <= l <= L, including the 1/sqrt(4 pi) factor and
    the Condon-Shortley sign, so that Y_lm = p_lm(cos theta) e^{i m phi}.

    Shape (npairs, len(u)).  The normalized recurrence is stable for the
    degrees used here (L <= 512).
    """
    u = np.asarray(u, dtype=float)
    s = np.sqrt(np.maximum(1.0 - u * u, 0.0))
    tab = np.empty(((L + 1) * (L + 2) // 2,) + u.shape)
    tab[0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, L + 1):
        tab[plm_index(m, m)] = (-math.sqrt((2.0 * m + 1.0) / (2.0 * m))
                                * s * tab[plm_index(m - 1, m - 1)])
    for m in range(0, L):
        tab[plm_index(m + 1, m)] = math.sqrt(2.0 * m + 3.0) * u * tab[plm_index(m, m)]
    for m in range(0, L + 1):
        for l in range(m + 2, L + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            tab[plm_index(l, m)] = a * (u * tab[plm_index(l - 1, m)]
                                        - b * tab[plm_index(l - 2, m)])
    return tab


# ---------------------------------------------------------------------------
# grids and sampled functions


@dataclass(frozen=True, eq=False)
class Grid:
    """Product quadrature grid on S^2 supporting degree L exactly."""

    L: int
    u: np.ndarray          # Gauss-Legendre nodes for cos theta, ascending
    w: np.ndarray          # matching weights (sum to 2)
    phi: np.ndarray        # uniform azimuth nodes, possibly offset
    phi_offset: float

    @property
    def n_theta(self) -> int:
        return self.u.size

    @property
    def n_phi(self) -> int:
        return self.phi.size

    @property
    def shape(self):
        return (self.n_theta, self.n_phi)

    @property
    def dphi(self) -> float:
        return 2.0 * math.pi / self.n_phi

    def weights_2d(self) -> np.ndarray:
        return self.w[:, None] * np.full(self.n_phi, self.dphi)[None, :]

    def points(self) -> np.ndarray:
        """Cartesian nodes, shape (n_theta, n_phi, 3)."""
        s = np.sqrt(np.maximum(1.0 - self.u**2, 0.0))
        x1 = np.broadcast_to(self.u[:, None], self.shape)
        x2 = s[:, None] * np.cos(self.phi)[None, :]
        x3 = s[:, None] * np.sin(self.phi)[None, :]
        return np.stack([x1, x2, x3], axis=-1)

    def flat_points(self) -> np.ndarray:
        return self.points().reshape(-1, 3)

    def flat_weights(self) -> np.ndarray:
        return self.weights_2d().reshape(-1)


def make_grid(L: int | None = None, n_theta: int | None = None,
              n_phi: int | None = None, phi_offset: float = 0.0) -> Grid:
    """Build a grid.  Either give the target degree L (minimal exact sizes
    n_theta = L+1, n_phi = 2L+1 are used) or explicit sizes (then L is the
    largest degree the sizes support)."""
    if L is None:
        if n_theta is None or n_phi is None:
            raise ValueError("give either L or both grid sizes")
        L = min(n_theta - 1, (n_phi - 1) // 2)
    if L < 1:
        raise ValueError("need L >= 1")
    if L > MAX_DEGREE:
        raise ValueError(f"L={L} exceeds the memory budget (max {MAX_DEGREE})")
    n_theta = n_theta if n_theta is not None else L + 1
    n_phi = n_phi if n_phi is not None else 2 * L + 1
    if n_theta < L + 1 or n_phi < 2 * L + 1:
        raise ValueError("grid sizes too small for the requested degree")
    u, w = np.polynomial.legendre.leggauss(n_theta)
    phi = phi_offset + 2.0 * math.pi * np.arange(n_phi) / n_phi
    return Grid(L=L, u=u, w=w, phi=phi, phi_offset=phi_offset)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples on a grid, shape (n_theta, n_phi)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != self.grid.shape:
            raise ValueError(f"values must have shape {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function contains non-finite values")
        object.__setattr__(self, "values", v.astype(complex))


def grid_map(grid: Grid, fn) -> GridFunction:
    """Sample fn(points) -> values on the grid; fn gets an (..., 3) array."""
    return GridFunction(grid, np.asarray(fn(grid.points()), dtype=complex))


def quad(f: GridFunction) -> complex:
    """Surface integral of f.  Uses exact (fsum) accumulation so that the
    result does not depend on evaluation order."""
    terms = (f.values * f.grid.weights_2d()).reshape(-1)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def norm_l2(f: GridFunction) -> float:
    return math.sqrt(abs(quad(GridFunction(f.grid, np.abs(f.values) ** 2))))


# ---------------------------------------------------------------------------
# harmonic coefficients


@dataclass(eq=False)
class HarmonicCoeffs:
    """Coefficients c[l, m] for 0 <= l <= L, |m| <= l, stored in an
    (L+1, 2L+1) array with column index m + L.

    Treat instances as frozen once built (set() is for construction);
    every operation in the package returns a fresh instance, so shared
    coefficient vectors are safe to read concurrently."""

    L: int
    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex)
        if c.shape != (self.L + 1, 2 * self.L + 1):
            raise ValueError(f"coefficient array must be {(self.L + 1, 2 * self.L + 1)}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients contain non-finite values")
        self.c = c

    def get(self, l: int, m: int) -> complex:
        return complex(self.c[l, m + self.L])

    def set(self, l: int, m: int, val: complex) -> None:
        if abs(m) > l or l > self.L:
            raise IndexError(f"(l, m) = ({l}, {m}) out of range")
        self.c[l, m + self.L] = val

    def copy(self) -> "HarmonicCoeffs":
        return HarmonicCoeffs(self.L, self.c.copy())

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.c))

    def pad(self, L_new: int) -> "HarmonicCoeffs":
        if L_new < self.L:
            raise ValueError("pad target must not truncate")
        out = coeffs_zero(L_new)
        out.c[: self.L + 1, L_new - self.L: L_new + self.L + 1] = self.c
        return out


def coeffs_zero(L: int) -> HarmonicCoeffs:
    return HarmonicCoeffs(L, np.zeros((L + 1, 2 * L + 1), dtype=complex))


def coeffs_constant(value: complex, L: int = 0) -> HarmonicCoeffs:
    """Coefficients of the constant function f = value."""
    out = coeffs_zero(L)
    out.set(0, 0, value * math.sqrt(4.0 * math.pi))
    return out


def random_coeffs(L: int, seed: int, scale=None, real_field: bool = False) -> HarmonicCoeffs:
    """Reproducible random band-limited coefficients.  scale(l) damps the
    degrees (default 1); real_field enforces the conjugation symmetry that
    makes the synthesized function real-valued."""
    rng = np.random.default_rng(seed)
    out = coeffs_zero(L)
    for l in range(L + 1):
        amp = 1.0 if scale is None else float(scale(l))
        for m in range(-l, l + 1):
            out.set(l, m, amp * complex(rng.normal(), rng.normal()))
    if real_field:
        for l in range(L + 1):
            out.set(l, 0, complex(out.get(l, 0).real, 0.0))
            for m in range(1, l + 1):
                out.set(l, -m, (-1) ** m * np.conj(out.get(l, m)))
    return out


# ---------------------------------------------------------------------------
# transforms


def _phase_matrix(grid: Grid, L: int) -> np.ndarray:
    """exp(-i m phi_j) for m = -L..L, shape (2L+1, n_phi)."""
    m = np.arange(-L, L + 1)
    return np.exp(-1j * np.outer(m, grid.phi))


def sht_forward(f: GridFunction, L: int | None = None) -> HarmonicCoeffs:
    """Analysis; exact for band-limited inputs the grid resolves."""
    grid = f.grid
    L = grid.L if L is None else L
    if L > grid.L:
        raise ValueError(f"grid supports degree {grid.L}, requested {L}")
    E = _phase_matrix(grid, L)
    G = f.values @ E.T * grid.dphi          # (n_theta, 2L+1), column m+L
    Gw = G * grid.w[:, None]
    tab = legendre_table(L, grid.u)         # (npairs, n_theta)
    out = coeffs_zero(L)
    for m in range(0, L + 1):
        rows = [plm_index(l, m) for l in range(m, L + 1)]
        block = tab[rows]                   # (L+1-m, n_theta)
        out.c[m:, L + m] = block @ Gw[:, L + m]
        if m > 0:
            out.c[m:, L - m] = (-1) ** m * (block @ Gw[:, L - m])
    return out


def sht_inverse(coeffs: HarmonicCoeffs, grid: Grid) -> GridFunction:
    """Synthesis on a grid (the grid need not resolve coeffs.L exactly for
    this direction, but round-trips require it)."""
    L = coeffs.L
    tab = legendre_table(L, grid.u)
    H = np.zeros((grid.n_theta, 2 * L + 1), dtype=complex)
    for m in range(0, L + 1):
        rows = [plm_index(l, m) for l in range(m, L + 1)]
        block = tab[rows]
        H[:, L + m] = coeffs.c[m:, L + m] @ block
        if m > 0:
            H[:, L - m] = (-1) ** m * (coeffs.c[m:, L - m] @ block)
    E = _phase_matrix(grid, L)              # e^{-i m phi}
    values = H @ np.conj(E)
    return GridFunction(grid, values)


def synth_at_points(coeffs: HarmonicCoeffs, points: np.ndarray) -> np.ndarray:
    """Evaluate the band-limited function at arbitrary points (..., 3).

    Streams the Legendre recurrence so memory stays O(points) even for
    large L.
    """
    pts = np.asarray(points, dtype=float)
    shape = pts.shape[:-1]
    pts = pts.reshape(-1, 3)
    u = np.clip(pts[:, 0], -1.0, 1.0)
    s = np.sqrt(np.maximum(1.0 - u * u, 0.0))
    phi = np.arctan2(pts[:, 2], pts[:, 1])
    L = coeffs.L
    out = np.zeros(pts.shape[0], dtype=complex)
    pmm = np.full(pts.shape[0], 1.0 / math.sqrt(4.0 * math.pi))
    for m in range(0, L + 1):
        if m > 0:
            pmm = -math.sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * pmm
        acc_pos = np.zeros(pts.shape[0], dtype=complex)
        acc_neg = np.zeros(pts.shape[0], dtype=complex)
        p_prev2 = None
        p_prev1 = pmm
        for l in range(m, L + 1):
            if l == m:
                p = pmm
            elif l == m + 1:
                p = math.sqrt(2.0 * m + 3.0) * u * pmm
            else:
                a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
                b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
                p = a * (u * p_prev1 - b * p_prev2)
            cp = coeffs.get(l, m)
            if cp != 0:
                acc_pos += cp * p
            if m > 0:
                cn = coeffs.get(l, -m)
                if cn != 0:
                    acc_neg += cn * p
            p_prev2, p_prev1 = p_prev1, p
        if m == 0:
            out += acc_pos
        else:
            out += acc_pos * np.exp(1j * m * phi)
            out += (-1) ** m * acc_neg * np.exp(-1j * m * phi)
    return out.reshape(shape)


def flat_lm_index(l: int, m: int) -> int:
    """Row of (l, m) in the flat layout used by the batched transforms."""
    return l * l + l + m


def flat_degree_vector(values_per_l: np.ndarray) -> np.ndarray:
    """Expand one value per degree into the flat (l, m) layout."""
    parts = [np.full(2 * l + 1, values_per_l[l]) for l in range(len(values_per_l))]
    return np.concatenate(parts)


def sht_forward_columns(grid: Grid, V: np.ndarray, L: int) -> np.ndarray:
    """Analyze a batch of functions given as flat columns.

    V has shape (n_nodes, B); returns coefficients ((L+1)^2, B) in the
    flat (l, m) layout.  This is the same transform as sht_forward, just
    factored for throughput (one azimuthal matmul for the whole batch).
    """
    if L > grid.L:
        raise ValueError(f"grid supports degree {grid.L}, requested {L}")
    nt, npz = grid.n_theta, grid.n_phi
    B = V.shape[1]
    v3 = V.reshape(nt, npz, B).transpose(0, 2, 1)          # (nt, B, nphi)
    E = _phase_matrix(grid, L)                              # (2L+1, nphi)
    G = (v3 @ E.T) * grid.dphi                              # (nt, B, 2L+1)
    Gw = G * grid.w[:, None, None]
    tab = legendre_table(L, grid.u)
    out = np.empty(((L + 1) ** 2, B), dtype=complex)
    for m in range(0, L + 1):
        rows = [plm_index(l, m) for l in range(m, L + 1)]
        block = tab[rows]                                   # (L+1-m, nt)
        pos = block @ Gw[:, :, L + m]                       # (L+1-m, B)
        idx_pos = [flat_lm_index(l, m) for l in range(m, L + 1)]
        out[idx_pos] = pos
        if m > 0:
            neg = (-1) ** m * (block @ Gw[:, :, L - m])
            idx_neg = [flat_lm_index(l, -m) for l in range(m, L + 1)]
            out[idx_neg] = neg
    return out


def sht_synthesize_columns(grid: Grid, C: np.ndarray, L: int) -> np.ndarray:
    """Inverse of sht_forward_columns onto (possibly another) grid:
    C has shape ((L+1)^2, B); returns flat values (n_nodes, B)."""
    nt = grid.n_theta
    B = C.shape[1]
    tab = legendre_table(L, grid.u)
    H = np.zeros((nt, B, 2 * L + 1), dtype=complex)
    for m in range(0, L + 1):
        rows = [plm_index(l, m) for l in range(m, L + 1)]
        block = tab[rows]
        idx_pos = [flat_lm_index(l, m) for l in range(m, L + 1)]
        H[:, :, L + m] = block.T @ C[idx_pos]
        if m > 0:
            idx_neg = [flat_lm_index(l, -m) for l in range(m, L + 1)]
            H[:, :, L - m] = (-1) ** m * (block.T @ C[idx_neg])
    E = _phase_matrix(grid, L)
    out = H @ np.conj(E)                                    # (nt, B, nphi)
    return out.transpose(0, 2, 1).reshape(-1, B)


def value_at_pole(coeffs: HarmonicCoeffs) -> complex:
    """Value at the base point (1, 0, 0): only m = 0 contributes."""
    l = np.arange(coeffs.L + 1)
    scale = np.sqrt((2 * l + 1) / (4.0 * math.pi))
    return complex(np.dot(coeffs.c[:, coeffs.L], scale))


def pair_bilinear(a: HarmonicCoeffs, b: HarmonicCoeffs) -> complex:
    """The bilinear pairing int f g dsigma in coefficient form:
    sum_lm (-1)^m a[l, m] b[l, -m]."""
    L = min(a.L, b.L)
    total = 0.0 + 0.0j
    for l in range(L + 1):
        for m in range(-l, l + 1):
            total += (-1) ** m * a.get(l, m) * b.get(l, -m)
    return complex(total)


def inner(a: HarmonicCoeffs, b: HarmonicCoeffs) -> complex:
    """Hermitian inner product int f conj(g) dsigma = sum a conj(b)."""
    L = min(a.L, b.L)
    return complex(np.vdot(b.c[: L + 1, b.L - L: b.L + L + 1],
                           a.c[: L + 1, a.L - L: a.L + L + 1]))


# ---------------------------------------------------------------------------
# zonal integration for general n


def sphere_area(dim: Dimension) -> float:
    """|S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)."""
    n = dim.n
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def zonal_integral(dim: Dimension, F, singular_power: complex = 0.0,
                   rtol: float = 1e-12) -> complex:
    """int_{S^{n-1}} |e - x|^{singular_power} F(<e, x>) dsigma(x) for a
    profile F on [-1, 1].

    Substituting t = 1 - 2u^2 moves the near-pole endpoint to u = 0 and
    the integral is done by tanh-sinh doubling.  A chordal power that is
    singular (or merely non-smooth) at t = 1 should be declared through
    `singular_power`: it is then evaluated through log u, exactly down to
    the endpoint.  A singular factor hidden inside the black-box F still
    converges, but rounding of 1 - t caps its relative accuracy near 1e-7.
    """
    return _zonal_quadrature(dim, F, singular_power, L=None, rtol=rtol)


def funk_hecke(dim: Dimension, F, l: int, singular_power: complex = 0.0,
               rtol: float = 1e-12) -> complex:
    """Eigenvalue of the zonal convolution f -> int F(<x, y>) f(y) dsigma(y)
    on degree-l spherical harmonics: the profile integrated against the
    ultraspherical polynomial normalized at 1, with the (1-t^2)^{(n-3)/2}
    weight and the |S^{n-2}| area factor.  Reduces to 2 pi int F P_l dt
    for n = 3 and to the plain area integral for l = 0.  See
    zonal_integral for the role of singular_power."""
    return funk_hecke_table(dim, F, l, singular_power=singular_power,
                            rtol=rtol)[l]


def funk_hecke_table(dim: Dimension, F, L: int, singular_power: complex = 0.0,
                     rtol: float = 1e-12) -> np.ndarray:
    return np.asarray(_zonal_quadrature(dim, F, singular_power, L=L,
                                        rtol=rtol))


def kernel_eigenvalues(dim: Dimension, s: complex, L: int) -> np.ndarray:
    """Funk-Hecke eigenvalues e_l, l = 0..L, of the chordal kernel
    |x - y|^s, computed by direct quadrature.  Valid for Re s > -(n-1)."""
    if complex(s).real <= -(dim.n - 1):
        raise ValueError(f"direct quadrature needs Re s > -(n-1) = {-(dim.n - 1)}")
    return np.asarray(_zonal_quadrature(dim, None, s, L=L, rtol=1e-15))


def _zonal_quadrature(dim: Dimension, F, singular_power: complex, L,
                      rtol: float):
    """Shared tanh-sinh core: the chordal power |e - x|^{singular_power}
    goes through log u so complex exponents stay exact at the endpoint;
    the smooth profile and the ultraspherical factor ride along."""
    n = dim.n
    nu = 0.5 * (n - 2.0)
    pref = 2.0 * math.pi ** ((n - 1) / 2.0) / math.gamma((n - 1) / 2.0)
    exp_w = 0.5 * (n - 3.0)
    s = complex(singular_power)

    def integrand(u, log_u, one_minus_u):
        t = 1.0 - 2.0 * u * u
        if s == 0.0:
            core = u ** (n - 2) + 0.0j
        else:
            # |e-x|^s = (2u)^s with u = half-chord parameter
            core = np.exp(s * (math.log(2.0) + log_u) + (n - 2) * log_u)
        core = core * ((one_minus_u * (1.0 + u)) ** exp_w)
        if F is not None:
            # a profile singular at t = 1 may produce non-finite values in
            # the underflow corner; those nodes carry zero weight anyway
            with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
                prof = np.asarray(F(t))
            core = core * np.where(np.isfinite(prof), prof, 0.0)
        if L is None:
            return core
        return ultraspherical_table(nu, L, t) * core[None, :]

    vals = tanhsinh_unit(integrand, rtol=rtol)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("zonal integrand produced non-finite values")
    scaled = pref * 2.0 ** (n - 1) * vals
    return complex(scaled) if L is None else scaled


# ---------------------------------------------------------------------------
# file formats


def save_coeffs(path, coeffs: HarmonicCoeffs, n: int = 3) -> None:
    """JSON coefficient file: {"n": 3, "L": L, "coeffs": [[l, m, re, im], ...]}."""
    rows = []
    for l in range(coeffs.L + 1):
        for m in range(-l, l + 1):
            v = coeffs.get(l, m)
            rows.append([l, m, v.real, v.imag])
    with open(path, "w") as fh:
        json.dump({"n": n, "L": coeffs.L, "coeffs": rows}, fh)


def load_coeffs(path) -> HarmonicCoeffs:
    with open(path) as fh:
        blob = json.load(fh)
    if blob.get("n", 3) != 3:
        raise ValueError("coefficient files are supported for n = 3 only")
    out = coeffs_zero(int(blob["L"]))
    for l, m, re, im in blob["coeffs"]:
        out.set(int(l), int(m), complex(re, im))
    return out


def save_grid_csv(path, f: GridFunction) -> None:
    """CSV export with columns theta, phi, re, im."""
    grid = f.grid
    theta = np.arccos(np.clip(grid.u, -1.0, 1.0))
    with open(path, "w") as fh:
        fh.write("theta,phi,re,im\n")
        for i in range(grid.n_theta):
            for j in range(grid.n_phi):
                v = f.values[i, j]
                fh.write(f"{theta[i]:.17g},{grid.phi[j]:.17g},{v.real:.17g},{v.imag:.17g}\n")
