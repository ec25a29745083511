import numpy as np
import pytest
import scipy.special as sp

from confsphere.lorentz import Dimension
from confsphere import sphgrid as sg
from confsphere import spectral_ops as so


def radial_laplacian_fd(profile, theta, n, h=1e-4):
    """The rotation-invariant Laplacian as a radial operator,
    phi'' + (n-2) cot(theta) phi', by central differences."""
    d1 = (profile(theta + h) - profile(theta - h)) / (2 * h)
    d2 = (profile(theta + h) - 2 * profile(theta) + profile(theta - h)) / h**2
    return d2 + (n - 2) / np.tan(theta) * d1


def test_laplacian_eigenvalue_oracle_n3():
    # degree-1 zonal profile cos(theta) on S^2
    got = so.laplacian_multiplier(Dimension(3), 1)
    assert got == -2.0
    theta = 1.1
    fd = radial_laplacian_fd(np.cos, theta, 3)
    assert abs(fd - got * np.cos(theta)) < 1e-6


def test_laplacian_eigenvalue_oracle_n5():
    dim = Dimension(5)
    got = so.laplacian_multiplier(dim, 2)
    assert got == -10.0
    nu = (dim.n - 2) / 2.0
    prof = lambda th: (sp.eval_gegenbauer(2, nu, np.cos(th))
                       / sp.eval_gegenbauer(2, nu, 1.0))
    theta = 0.9
    fd = radial_laplacian_fd(prof, theta, 5)
    assert abs(fd - got * prof(theta)) < 1e-5


def test_laplacian_l0():
    assert so.laplacian_multiplier(Dimension(3), 0) == 0.0


def test_gjms_empty_product():
    dim = Dimension(4)
    assert all(so.gjms_multiplier(dim, 0, l) == 1.0 for l in range(10))


def test_gjms_k1_is_yamabe():
    for n in (3, 4, 5):
        dim = Dimension(n)
        for l in range(12):
            want = so.laplacian_multiplier(dim, l) + so.yamabe_shift(dim)
            assert abs(so.gjms_multiplier(dim, 1, l) - want) < 1e-12
    # the shift vanishes for n = 3
    assert so.yamabe_shift(Dimension(3)) == 0.0


def test_gjms_alternative_factorization():
    # prod_j (Delta - (rho+j-1)(rho-j)) == prod_j (Delta_1 + j(j-1))
    for n in (3, 4, 5):
        dim = Dimension(n)
        for k in range(5):
            for l in range(33):
                alt = 1.0
                d1 = so.laplacian_multiplier(dim, l) + so.yamabe_shift(dim)
                for j in range(1, k + 1):
                    alt *= d1 + j * (j - 1)
                assert abs(so.gjms_multiplier(dim, k, l) - alt) <= 1e-10 * max(1.0, abs(alt))


def test_gjms_exact_zeros_n3():
    dim = Dimension(3)
    for k in range(1, 5):
        for l in range(k):
            assert so.gjms_multiplier(dim, k, l) == 0.0
        assert so.gjms_multiplier(dim, k, k) != 0.0


def test_gjms_constant_values():
    dim = Dimension(3)
    assert abs(so.gjms_constant(dim, 0).c_k - np.pi) < 1e-14
    assert abs(so.gjms_constant(dim, 1).c_k - np.pi / 4) < 1e-14
    assert abs(so.gjms_constant(dim, 2).c_k - np.pi / 64) < 1e-15


def test_gjms_constant_recursion():
    # c_{k+1} = c_k / (4 (rho+k)(k+1))
    for n in (3, 4, 5):
        dim = Dimension(n)
        for k in range(4):
            want = so.gjms_constant(dim, k).c_k / (4 * (dim.rho + k) * (k + 1))
            assert abs(so.gjms_constant(dim, k + 1).c_k - want) < 1e-14 * want


def test_bernstein_multiplier_values():
    dim = Dimension(3)
    assert so.bernstein_multiplier(dim, 0.0, 0) == 0.0
    assert so.bernstein_multiplier(dim, 2.0, 0) == 2.0
    assert so.bernstein_multiplier(dim, 2.0, 1) == 0.0


def test_apply_multiplier_identity_and_laplacian(grid16):
    dim = Dimension(3)
    c = sg.random_coeffs(8, 3)
    fam = so.MultiplierFamily(dim=dim, L=8, values=np.ones(9), param=0.0,
                              kind="custom")
    assert np.array_equal(so.apply_multiplier(fam, c).c, c.c)
    lap = so.multiplier_family(dim, 8, "laplacian")
    out = so.apply_multiplier(lap, c)
    for l in range(9):
        for m in range(-l, l + 1):
            assert out.get(l, m) == -l * (l + 1) * c.get(l, m)


def test_multiplier_family_cache_and_validation():
    dim = Dimension(3)
    a = so.multiplier_family(dim, 16, "gjms_2")
    b = so.multiplier_family(dim, 16, "gjms_2")
    assert a is b
    with pytest.raises(ValueError):
        so.MultiplierFamily(dim=dim, L=4, values=np.ones(5), param=0.0,
                            kind="laplacian")  # positive values rejected


def test_selfadjointness_quadrature(grid32):
    # <Delta_k f, g> = <f, Delta_k g> through the grid pairing
    dim = Dimension(3)
    f = sg.random_coeffs(10, 5).pad(grid32.L)
    g = sg.random_coeffs(10, 6).pad(grid32.L)
    for k in (1, 2):
        fam = so.multiplier_family(dim, grid32.L, f"gjms_{k}")
        df = sg.sht_inverse(so.apply_multiplier(fam, f), grid32)
        dg = sg.sht_inverse(so.apply_multiplier(fam, g), grid32)
        fv = sg.sht_inverse(f, grid32)
        gv = sg.sht_inverse(g, grid32)
        lhs = sg.quad(sg.GridFunction(grid32, df.values * np.conj(gv.values)))
        rhs = sg.quad(sg.GridFunction(grid32, fv.values * np.conj(dg.values)))
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_residue_operator_apply(grid16):
    dim = Dimension(3)
    c = sg.coeffs_zero(4)
    c.set(1, 0, 1.0)
    out = so.residue_operator_apply(dim, 1, c)
    # c_1 Delta_1 on degree 1: (pi/4) * (-2)
    assert abs(out.get(1, 0) - (np.pi / 4) * (-2.0)) < 1e-14
    const = sg.coeffs_constant(2.0, 0)
    out0 = so.residue_operator_apply(dim, 0, const)
    assert abs(out0.get(0, 0) - np.pi * const.get(0, 0)) < 1e-14


@pytest.mark.parametrize("n", [3, 4, 5])
def test_knapp_stein_descent_consistency(n):
    dim = Dimension(n)
    for off in (0.55, 1.05):
        alpha = dim.rho + (-(n - 1) + off)   # s = -(n-1) + off, direct side
        direct = sg.kernel_eigenvalues(dim, alpha - dim.rho, 32)
        via = so.knapp_stein_multipliers(dim, alpha, 32)
        assert np.max(np.abs(direct - via) / np.abs(direct)) < 1e-12
        # force one extra descent step by shifting down by 2
        down = so.knapp_stein_multipliers(dim, alpha - 2.0, 32)
        lap = np.array([so.laplacian_multiplier(dim, l) for l in range(33)])
        s = alpha - dim.rho
        expect = ((lap + (s / 2) * (s / 2 + n - 2)) * direct
                  / (s * (s + n - 3)))
        assert np.max(np.abs(down - expect) / np.abs(expect)) < 1e-10


def test_knapp_stein_pole_structure():
    # the residue of e_l at the k-th lattice point is 2 c_k times the
    # degree-l covariant-power eigenvalue (plain ring residue, whole
    # parameter); off-lattice rings see nothing
    dim = Dimension(3)
    from confsphere.mero import residue_ring
    for l in (0, 2):
        for k in (0, 1):
            center = -dim.rho - 2.0 * k
            fit = residue_ring(lambda a: so.knapp_stein_multiplier(dim, a, l),
                               center, 0.1, 16)
            want = 2.0 * so.gjms_constant(dim, k).c_k * so.gjms_multiplier(dim, k, l)
            assert abs(fit.residue - want) <= 1e-8 * max(1.0, abs(want))
            off = residue_ring(lambda a: so.knapp_stein_multiplier(dim, a, l),
                               center + 1.0, 0.1, 16)
            scale = abs(so.knapp_stein_multiplier(dim, center + 1.1, l))
            assert abs(off.residue) < 1e-8 * max(1.0, scale)


def test_descent_denominator_guard():
    # n = 3: continuing past s = -2 steps through s(s) = 0 exactly
    dim = Dimension(3)
    with pytest.raises(ZeroDivisionError, match="perturb alpha"):
        so.knapp_stein_multipliers(dim, -1.0, 8)
    # the suggested nudge works
    vals = so.knapp_stein_multipliers(dim, -1.0 + 1e-3j, 8)
    assert np.all(np.isfinite(vals))
    # n = 4: continuing to s = -3 steps through s + n - 3 = 0
    dim4 = Dimension(4)
    with pytest.raises(ZeroDivisionError, match="perturb alpha"):
        so.knapp_stein_multipliers(dim4, dim4.rho - 3.0, 8)
