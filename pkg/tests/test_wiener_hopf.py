import numpy as np
import pytest

from gsio.errors import NotInvertibleOnCircle
from gsio.sections import extension_blocks, gsio_section
from gsio.spectral import fredholm_index
from gsio.symbols import (
    LaurentSymbol,
    MatrixSymbol,
    RationalSymbol,
    as_rational,
    constant,
    gsio_symbol,
    monomial,
    winding_number,
    z,
    zbar,
)
from gsio.wiener_hopf import (
    fredholm_verdict,
    kernel_dims,
    wh_matrix2,
    wh_scalar,
)


def unit_grid(m):
    return np.exp(2j * np.pi * np.arange(m) / m)


class TestScalar:
    def test_monomial(self):
        fac = wh_scalar(monomial(3))
        assert fac.kappa == (3,)
        assert as_rational(fac.f_minus).allclose(1)
        assert as_rational(fac.f_plus).allclose(1)

    def test_outside_root(self):
        fac = wh_scalar(2 - z)
        assert fac.kappa == (0,)
        assert as_rational(fac.f_minus).allclose(1)
        assert as_rational(fac.f_plus).allclose(2 - z)

    def test_inside_root(self):
        fac = wh_scalar(z - 0.5)
        assert fac.kappa == (1,)
        assert as_rational(fac.f_minus).allclose(1 - 0.5 * zbar)
        assert as_rational(fac.f_plus).allclose(1)

    def test_zero_on_circle_rejected(self):
        with pytest.raises(NotInvertibleOnCircle):
            wh_scalar(z - 1)

    def test_factor_types_certified(self):
        s = RationalSymbol((z - 0.4) * (z + 2.5) * (z - 1.25j), (z + 3) * (z - 0.2))
        fac = wh_scalar(s)
        assert sum(fac.kappa) == winding_number(s)
        assert fac.reconstruction_residual <= 1e-8
        minus = as_rational(fac.f_minus)
        plus = as_rational(fac.f_plus)
        # minus factor: only non-positive modes in num and den
        assert minus.num.d_plus == 0 and minus.den.d_plus == 0
        # plus factor: only non-negative modes
        assert plus.num.d_minus == 0 and plus.den.d_minus == 0


class TestMatrix:
    def test_diagonal_monomials(self):
        fac = wh_matrix2(MatrixSymbol([[monomial(2), 0.0], [0.0, zbar]]))
        assert fac.kappa == (2, -1)
        for i in range(2):
            for j in range(2):
                entry = as_rational(fac.f_minus[i][j])
                assert entry.allclose(1 if i == j else 0)
                entry = as_rational(fac.f_plus[i][j])
                assert entry.allclose(1 if i == j else 0)

    def test_diagonal_needing_permutation(self):
        fac = wh_matrix2(MatrixSymbol([[zbar, 0.0], [0.0, monomial(2)]]))
        assert fac.kappa == (2, -1)
        assert fac.reconstruction_residual <= 1e-10

    def test_constant(self):
        f = MatrixSymbol([[0.0, -1.0], [-1.0, 0.0]])
        fac = wh_matrix2(f)
        assert fac.kappa == (0, 0)
        for i in range(2):
            for j in range(2):
                assert as_rational(fac.f_minus[i][j]).allclose(1 if i == j else 0)
                assert as_rational(fac.f_plus[i][j]).allclose(
                    -1 if i != j else 0)

    def test_triangular(self):
        f = MatrixSymbol([[2 - z, 0.0], [constant(1.0), 2 - zbar]])
        fac = wh_matrix2(f)
        assert fac.kappa == (0, 0)
        assert fac.reconstruction_residual <= 1e-8

    def test_extension_quotient_of_shift(self):
        f = MatrixSymbol([[0.0, -1.0], [-1.0 * z, 0.0]])
        fac = wh_matrix2(f)
        assert fac.kappa == (1, 0)
        assert fac.reconstruction_residual <= 1e-8

    def test_scalar_matrix_coherence(self):
        s1 = RationalSymbol((z - 0.5) * (z - 2.0), 1.0)
        s2 = RationalSymbol(z + 4.0, z - 0.25)
        fac = wh_matrix2(MatrixSymbol([[s1, 0.0], [0.0, s2]]))
        w1, w2 = winding_number(s1), winding_number(s2)
        assert fac.kappa == tuple(sorted((w1, w2), reverse=True))

    def test_mixed_full_matrix(self):
        f = MatrixSymbol([[2 - z, constant(0.5)], [zbar, 2 - zbar]])
        fac = wh_matrix2(f)
        assert sum(fac.kappa) == winding_number(f.det())
        assert fac.reconstruction_residual <= 1e-8
        # plus factor stays analytic and invertible inside: sample check
        grid = unit_grid(64)
        from gsio.wiener_hopf import _eval_matrix

        inside = 0.5 * grid
        vals = _eval_matrix(fac.f_plus, inside)
        dets = vals[:, 0, 0] * vals[:, 1, 1] - vals[:, 0, 1] * vals[:, 1, 0]
        assert np.min(np.abs(dets)) > 1e-8

    def test_normalization_convention(self):
        f = MatrixSymbol([[2 - z, constant(0.5)], [zbar, 2 - zbar]])
        fac = wh_matrix2(f)
        from gsio.wiener_hopf import _eval_matrix

        at_zero = _eval_matrix(fac.f_plus, np.zeros(1, dtype=complex))[0]
        assert abs(at_zero[1, 0]) < 1e-9
        assert at_zero[0, 0].real > 0 and abs(at_zero[0, 0].imag) < 1e-9
        assert at_zero[1, 1].real > 0 and abs(at_zero[1, 1].imag) < 1e-9


class TestKernelDims:
    def test_paper_arithmetic(self):
        assert kernel_dims((2, -1)) == (1, 2)
        assert kernel_dims((0, 0)) == (0, 0)
        assert kernel_dims((-1, -2)) == (3, 0)


class TestVerdict:
    def test_identity_invertible(self):
        v = fredholm_verdict(gsio_symbol(1, 0, 0, 1))
        assert v.status == "invertible"
        assert (v.dim_ker, v.dim_coker, v.index) == (0, 0, 0)

    def test_shift_fredholm(self):
        v = fredholm_verdict(gsio_symbol(z, 0, 0, 1))
        assert v.status == "fredholm"
        assert (v.index, v.dim_ker, v.dim_coker) == (-1, 0, 1)

    def test_vanishing_f_not_fredholm(self):
        v = fredholm_verdict(gsio_symbol(z - 1, 0, 0, 1))
        assert v.status == "not_fredholm"
        assert v.witness == "f_vanishes_on_circle"

    def test_vanishing_psi_not_fredholm(self):
        v = fredholm_verdict(gsio_symbol(1, 0, 0, z + 1))
        assert v.status == "not_fredholm"
        assert v.witness == "psi_vanishes_on_circle"

    def test_zero_index_but_not_invertible(self):
        # f = z, psi = z: index 0, yet partial indices (1, -1) give
        # one-dimensional kernel and cokernel
        v = fredholm_verdict(gsio_symbol(z, 0, 0, z))
        assert v.status == "fredholm"
        assert (v.index, v.dim_ker, v.dim_coker) == (0, 1, 1)

    def test_index_matches_formula_battery(self):
        for a, b in ((1, 2), (-2, 1), (0, 3), (2, -2)):
            h = gsio_symbol(monomial(a) if a else 1, 0, 0,
                            monomial(b) if b else 1)
            v = fredholm_verdict(h)
            assert v.index == fredholm_index(h) == b - a

    def test_condition_number_heuristic(self):
        # documented heuristic: invertible symbols keep the section
        # condition number bounded as the order doubles; nonzero index
        # blows past 1e6
        good = gsio_symbol(z + 2, 0, 0, 1)
        conds = [np.linalg.cond(gsio_section(good, n).data)
                 for n in (128, 256, 512)]
        assert all(c < 100 for c in conds)
        assert fredholm_verdict(good).status == "invertible"
        bad = gsio_symbol(z, 0, 0, 1)
        conds = [np.linalg.cond(gsio_section(bad, n).data)
                 for n in (128, 256, 512)]
        assert all(c > 1e6 for c in conds)

    def test_rational_entries(self):
        f = RationalSymbol(z - 0.5, z - 3.0)   # winding 1
        v = fredholm_verdict(gsio_symbol(f, 0, 0, 1))
        assert v.status == "fredholm"
        assert v.index == -1
