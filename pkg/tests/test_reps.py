import numpy as np

from confsphere.lorentz import (boost, compose, identity, inverse,
                                random_element, rotation)
from confsphere import reps, sphgrid as sg
from conftest import random_unit


def _rotation(rng, dim):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return rotation(q, dim), q


def test_pi_identity(dim3, grid32):
    f = sg.sht_inverse(sg.random_coeffs(8, 1).pad(32), grid32)
    out = reps.pi_act(dim3, 0.7, identity(dim3), f)
    assert np.abs(out.values - f.values).max() < 1e-12


def test_pi_rotation_is_pullback(dim3, grid32, rng):
    g, q = _rotation(rng, dim3)
    c = sg.random_coeffs(8, 2)
    f = sg.sht_inverse(c.pad(32), grid32)
    out = reps.pi_act(dim3, complex(0.3, -0.8), g, f)
    want = sg.synth_at_points(c, grid32.points() @ q)  # k^{-1} x = q^T... rows
    # act(inverse(g), x) = q^{-1} x; points() @ q gives (q^T x)^T rows
    want = sg.synth_at_points(c, np.einsum("ij,...j->...i", q.T, grid32.points()))
    assert np.abs(out.values - want).max() < 1e-11


def test_group_law(dim3, grid32):
    # words may compose two boosts, so cap the parameter at half the
    # stated single-boost regime
    g1 = random_element(dim3, 11, max_boost=0.25)
    g2 = random_element(dim3, 12, max_boost=0.25)
    f = sg.sht_inverse(sg.random_coeffs(8, 5).pad(32), grid32)
    lam = complex(0.4, -0.1)
    lhs = reps.pi_act(dim3, lam, compose(g1, g2), f)
    rhs = reps.pi_act(dim3, lam, g1, reps.pi_act(dim3, lam, g2, f))
    rel = np.abs(lhs.values - rhs.values).max() / np.abs(lhs.values).max()
    assert rel < 1e-9


def test_duality(dim3, grid32, rng):
    f = sg.sht_inverse(sg.random_coeffs(6, 7).pad(32), grid32)
    phi = sg.sht_inverse(sg.random_coeffs(6, 8).pad(32), grid32)
    assert reps.duality_defect(dim3, 0.7, identity(dim3), f, phi) < 1e-13
    grot, _ = _rotation(rng, dim3)
    assert reps.duality_defect(dim3, 0.0, grot, f, phi) < 1e-12
    g = boost(0.3, dim3)
    scale = sg.norm_l2(f) * sg.norm_l2(phi)
    assert reps.duality_defect(dim3, 0.7, g, f, phi) < 1e-6 * scale


def test_dirac_identity_and_boost(dim3):
    phi = sg.random_coeffs(8, 9)
    base = sg.value_at_pole(phi)
    assert abs(reps.dirac_pair(dim3, 0.4, identity(dim3), phi) - base) < 1e-12
    t, lam = 0.6, 0.25
    got = reps.dirac_pair(dim3, lam, boost(t, dim3), phi)
    assert abs(got - np.exp(-t * (1 - lam)) * base) < 1e-12


def test_dirac_distributional_consistency(dim3):
    grid = sg.make_grid(48)
    for i in range(20):
        g = random_element(dim3, 100 + i, max_boost=0.5)
        lam = complex(0.37 * ((i % 5) - 2), 0.21 * ((i % 3) - 1))
        phi = sg.random_coeffs(8, 200 + i)
        a = reps.dirac_pair(dim3, lam, g, phi)
        b = reps.dirac_pair_dual(dim3, lam, g, phi, grid)
        assert abs(a - b) <= 1e-9 * max(abs(a), phi.l2_norm())


def test_unitarity_imaginary_axis(dim3, grid32):
    f = sg.sht_inverse(sg.random_coeffs(8, 13).pad(32), grid32)
    g = random_element(dim3, 17, max_boost=0.5)
    moved = reps.pi_act(dim3, 0.9j, g, f)
    assert abs(sg.norm_l2(moved) - sg.norm_l2(f)) < 1e-6 * sg.norm_l2(f)


def test_pi_pointwise_matches_grid_action(dim3, grid32, rng):
    c = sg.random_coeffs(6, 21)
    g = random_element(dim3, 23, max_boost=0.4)
    lam = complex(-0.3, 0.5)
    field = reps.pi_pointwise(dim3, lam, g, c)
    f = sg.sht_inverse(c.pad(32), grid32)
    grid_out = reps.pi_act(dim3, lam, g, f)
    assert np.abs(field(grid32.points()) - grid_out.values).max() < 1e-11
    pts = random_unit(rng, 7)
    vals = field(pts)
    assert vals.shape == (7,)
