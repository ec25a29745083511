"""Scalar special functions and 1-D quadrature primitives.

The complex gamma function lives here so that closed-form reference values
never depend on the quadrature machinery they are checked against.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

# Lanczos approximation, g = 7, 9 coefficients.  Relative error is below
# 1e-13 on the right half plane; the left half plane goes through the
# reflection formula.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def complex_gamma(z):
    """Gamma function for complex (or real) scalar argument."""
    z = complex(z)
    if z.real < 0.5:
        s = np.sin(np.pi * z)
        if s == 0:
            raise ZeroDivisionError(f"gamma pole at z={z}")
        return np.pi / (s * complex_gamma(1.0 - z))
    z -= 1.0
    x = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * np.exp(-t) * x


def gamma_ratio(num, den):
    """prod Gamma(num_i) / prod Gamma(den_j) for scalar sequences."""
    val = 1.0 + 0.0j
    for a in num:
        val *= complex_gamma(a)
    for b in den:
        val /= complex_gamma(b)
    return val


@lru_cache(maxsize=32)
def _tanhsinh_nodes(level: int, t_max: float = 5.0):
    """Abscissas for tanh-sinh quadrature on (0, 1).

    Returns (u, log_u, one_minus_u, w) with u = (1+tanh(pi/2 sinh t))/2
    evaluated stably, so that u stays positive and log u is exact far into
    the corner.  Integrable endpoint singularities (including complex
    powers of u) are handled by construction.
    """
    h = t_max / 2**level
    k = np.arange(-(2**level) * 5, (2**level) * 5 + 1)
    t = k * h
    q = 0.5 * np.pi * np.sinh(t)
    # u = sigmoid(2q); 1-u = sigmoid(-2q)
    u = np.empty_like(q)
    pos = q >= 0
    u[pos] = 1.0 / (1.0 + np.exp(-2.0 * q[pos]))
    u[~pos] = np.exp(2.0 * q[~pos]) / (1.0 + np.exp(2.0 * q[~pos]))
    log_u = np.where(pos, -np.log1p(np.exp(-2.0 * np.maximum(q, 0))),
                     2.0 * q - np.log1p(np.exp(2.0 * np.minimum(q, 0))))
    one_minus_u = np.empty_like(q)
    one_minus_u[pos] = np.exp(-2.0 * q[pos]) / (1.0 + np.exp(-2.0 * q[pos]))
    one_minus_u[~pos] = 1.0 / (1.0 + np.exp(2.0 * q[~pos]))
    # 1/cosh(q)^2 in log form so the far tail underflows to 0 quietly
    log_sech2 = 2.0 * (math.log(2.0) - np.abs(q) - np.log1p(np.exp(-2.0 * np.abs(q))))
    w = h * 0.5 * np.pi * np.cosh(t) * np.exp(log_sech2) * 0.5
    keep = (w > 1e-290) & (u > 1e-280) & (one_minus_u > 1e-280)
    return u[keep], log_u[keep], one_minus_u[keep], w[keep]


def tanhsinh_unit(f, rtol: float = 1e-12, max_level: int = 11):
    """Integrate f over (0, 1) by tanh-sinh level doubling.

    f(u, log_u, one_minus_u) may return a vector (one integrand per entry);
    integration is performed per component.  Convergence is declared when
    successive levels agree to rtol relative to the largest component.
    """
    prev = None
    for level in range(4, max_level + 1):
        u, log_u, omu, w = _tanhsinh_nodes(level)
        vals = np.asarray(f(u, log_u, omu))
        est = vals @ w if vals.ndim > 1 else np.dot(vals, w)
        if prev is not None:
            scale = np.max(np.abs(est)) + 1e-300
            if np.max(np.abs(est - prev)) <= rtol * scale:
                return est
        prev = est
    return prev


def ultraspherical_table(nu: float, L: int, t: np.ndarray) -> np.ndarray:
    """Values R_l(t), l = 0..L, of the degree-l ultraspherical polynomial
    with parameter nu, normalized so that R_l(1) = 1.

    Recurrence: R_l = [2(l+nu-1) t R_{l-1} - (l-1) R_{l-2}] / (2nu + l - 1).
    For nu = 1/2 these are the Legendre polynomials.  |R_l| <= 1 on [-1, 1],
    so the recurrence is stable.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty((L + 1,) + t.shape)
    out[0] = 1.0
    if L >= 1:
        out[1] = t
    for l in range(2, L + 1):
        out[l] = (2.0 * (l + nu - 1.0) * t * out[l - 1]
                  - (l - 1.0) * out[l - 2]) / (2.0 * nu + l - 1.0)
    return out
