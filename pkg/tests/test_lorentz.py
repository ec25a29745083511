import numpy as np
import pytest

from confsphere import lorentz as lz
from conftest import random_unit


def test_boost_identity(dim3):
    assert np.allclose(lz.boost(0.0, dim3).m, np.eye(4))


def test_boost_fixes_base_point(dim3):
    one = lz.base_point(dim3)
    for t in (-1.3, 0.2, 0.9):
        assert np.allclose(lz.act(lz.boost(t, dim3), one), one, atol=1e-14)


def test_boost_action_formula(dim3):
    # (sinh t + x1 cosh t)/(cosh t + x1 sinh t) at x = (0, 1, 0)
    t = 0.5
    got = lz.act(lz.boost(t, dim3), np.array([0.0, 1.0, 0.0]))
    want = np.array([np.tanh(t), 1.0 / np.cosh(t), 0.0])
    assert np.allclose(got, want, atol=1e-15)


def test_translation_identity_and_membership(dim3):
    assert np.allclose(lz.translation(np.zeros(2), dim3).m, np.eye(4))
    g = lz.translation(np.array([0.7, -1.2]), dim3)  # validated on build
    j = np.diag([1.0, -1.0, -1.0, -1.0])
    assert np.abs(g.m.T @ j @ g.m - j).max() < 1e-12


def test_translation_fixes_base_point(dim3):
    one = lz.base_point(dim3)
    g = lz.translation(np.array([1.5, 0.3]), dim3)
    assert np.allclose(lz.act(g, one), one, atol=1e-14)
    assert abs(lz.conformal_factor(g, one) - 1.0) < 1e-14


def test_rotation_embedding(dim3, rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    g = lz.rotation(q, dim3)
    assert np.allclose(g.m[1:, 1:], q)
    pts = random_unit(rng, 20)
    assert np.allclose(lz.act(g, pts), pts @ q.T, atol=1e-14)
    assert np.allclose(lz.conformal_factor(g, pts), 1.0, atol=1e-14)


def test_rotation_rejects_non_orthogonal(dim3):
    with pytest.raises(ValueError):
        lz.rotation(np.ones((3, 3)), dim3)


def test_act_identity_and_normalization(dim3, rng):
    e = lz.identity(dim3)
    pts = random_unit(rng, 50)
    assert np.allclose(lz.act(e, pts), pts)
    g = lz.random_element(dim3, 5, max_boost=1.5)
    assert np.abs(np.linalg.norm(lz.act(g, pts), axis=1) - 1.0).max() < 1e-12


def test_action_associativity(dim3, rng):
    g1 = lz.random_element(dim3, 11)
    g2 = lz.random_element(dim3, 12)
    pts = random_unit(rng, 30)
    lhs = lz.act(lz.compose(g1, g2), pts)
    rhs = lz.act(g1, lz.act(g2, pts))
    assert np.abs(lhs - rhs).max() < 1e-12


def test_conformal_factor_boost_at_base(dim3):
    one = lz.base_point(dim3)
    for t in (-0.8, 0.3, 1.1):
        assert abs(lz.conformal_factor(lz.boost(t, dim3), one) - np.exp(-t)) < 1e-14


def test_cocycle(dim3, rng):
    for seed in range(8):
        g1 = lz.random_element(dim3, 100 + seed)
        g2 = lz.random_element(dim3, 200 + seed)
        x = random_unit(rng, 20)
        k12 = lz.conformal_factor(lz.compose(g1, g2), x)
        kk = lz.conformal_factor(g1, lz.act(g2, x)) * lz.conformal_factor(g2, x)
        assert (np.abs(k12 - kk) / np.abs(k12)).max() < 1e-10


def test_inverse_law(dim3, rng):
    g = lz.random_element(dim3, 9)
    gi = lz.inverse(g)
    x = random_unit(rng, 25)
    val = lz.conformal_factor(g, lz.act(gi, x)) * lz.conformal_factor(gi, x)
    assert np.abs(val - 1.0).max() < 1e-10


def test_distance_covariance(dim3, rng):
    g = lz.random_element(dim3, 13, max_boost=1.2)
    x = random_unit(rng, 40)
    y = random_unit(rng, 40)
    lhs = np.linalg.norm(lz.act(g, x) - lz.act(g, y), axis=1)
    rhs = (np.sqrt(lz.conformal_factor(g, x) * lz.conformal_factor(g, y))
           * np.linalg.norm(x - y, axis=1))
    assert np.abs(lhs - rhs).max() < 1e-10


def test_compose_inverse_group_laws(dim3):
    g = lz.random_element(dim3, 21)
    assert np.abs(lz.compose(g, lz.inverse(g)).m - np.eye(4)).max() < 1e-10
    assert np.allclose(lz.inverse(lz.identity(dim3)).m, np.eye(4))


def test_random_element_reproducible(dim3):
    a = lz.random_element(dim3, 7)
    b = lz.random_element(dim3, 7)
    assert np.array_equal(a.m, b.m)
    c = lz.random_element(dim3, 8)
    assert not np.allclose(a.m, c.m)


def test_higher_dims():
    d5 = lz.Dimension(5)
    g = lz.random_element(d5, 3, max_boost=0.8)
    x = np.zeros(5)
    x[2] = 1.0
    y = lz.act(g, x)
    assert abs(np.linalg.norm(y) - 1.0) < 1e-12
    assert abs(lz.conformal_factor(g, lz.act(lz.inverse(g), x))
               * lz.conformal_factor(lz.inverse(g), x) - 1.0) < 1e-10


def test_dimension_validation():
    with pytest.raises(ValueError):
        lz.Dimension(2)
    assert lz.Dimension(4).rho == 1.5
