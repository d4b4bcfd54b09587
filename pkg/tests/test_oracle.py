import numpy as np
import pytest

from gsio.errors import AliasRisk
from gsio.oracle import (
    compare_action,
    grid_apply,
    grid_function_from_coeffs,
    random_symbol,
)
from gsio.sections import gsio_section
from gsio.symbols import LaurentSymbol, MatrixSymbol, gsio_symbol, monomial, z, zbar


def coeffs_of(gf, band):
    d = gf.coeff_dict()
    return {k: d[k] for k in range(-band, band + 1) if abs(d[k]) > 1e-12}


class TestGridApply:
    def test_multiplication_operator(self):
        f = z + 2 * zbar + 1
        h = gsio_symbol(f, f, f, f)
        x = grid_function_from_coeffs({0: 1.0, 3: 2.0, -2: 1j}, 64)
        out = grid_apply(h, x)
        expect = f.eval_many(np.exp(2j * np.pi * np.arange(64) / 64)) * x.samples
        assert np.max(np.abs(out.samples - expect)) < 1e-12

    def test_constant_input_picks_analytic_column(self):
        h = random_symbol(3, 13)
        x = grid_function_from_coeffs({0: 1.0}, 64)
        out = coeffs_of(grid_apply(h, x), 6)
        f, g = h.entries[0][0], h.entries[1][0]
        for k in range(-6, 7):
            expect = f.coeff(k) if k >= 0 else g.coeff(k)
            assert out.get(k, 0j) == pytest.approx(expect, abs=1e-12)

    def test_projection_difference_flips_sign(self):
        h = gsio_symbol(1, -1, 1, -1)
        x = grid_function_from_coeffs({1: 1.0, -1: 1.0}, 32)
        out = coeffs_of(grid_apply(h, x), 2)
        assert out[1] == pytest.approx(1.0)
        assert out[-1] == pytest.approx(-1.0)

    def test_alias_guard(self):
        h = random_symbol(3, 1)
        with pytest.raises(AliasRisk):
            grid_apply(h, grid_function_from_coeffs({0: 1.0}, 8))

    def test_linearity(self):
        rng = np.random.default_rng(19)
        h = random_symbol(2, 3)
        for _ in range(5):
            cx = {int(k): complex(*rng.standard_normal(2)) for k in range(-4, 5)}
            cy = {int(k): complex(*rng.standard_normal(2)) for k in range(-4, 5)}
            a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
            m = 64
            x = grid_function_from_coeffs(cx, m)
            y = grid_function_from_coeffs(cy, m)
            mix = grid_function_from_coeffs(
                {k: a * cx.get(k, 0) + b * cy.get(k, 0) for k in range(-4, 5)}, m)
            lhs = grid_apply(h, mix).samples
            rhs = a * grid_apply(h, x).samples + b * grid_apply(h, y).samples
            assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_adjoint_bilinear_form(self):
        rng = np.random.default_rng(29)
        h = random_symbol(2, 8)
        f, phi = h.entries[0]
        g, psi = h.entries[1]
        h_star = MatrixSymbol([[f.conj(), g.conj()], [phi.conj(), psi.conj()]])
        m = 64
        for _ in range(5):
            cx = {int(k): complex(*rng.standard_normal(2)) for k in range(-4, 5)}
            cy = {int(k): complex(*rng.standard_normal(2)) for k in range(-4, 5)}
            x = grid_function_from_coeffs(cx, m)
            y = grid_function_from_coeffs(cy, m)
            # <R_H x, y> and <x, R_H* y> as L2 inner products on samples
            lhs = np.vdot(y.samples, grid_apply(h, x).samples) / m
            rhs = np.vdot(grid_apply(h_star, y).samples, x.samples) / m
            assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_composition_matches_product_section(self):
        h1 = random_symbol(2, 31)
        h2 = random_symbol(2, 37)
        n, m = 24, 256
        sec = gsio_section(h1, n).data @ gsio_section(h2, n).data
        grading = [mode for _, mode in gsio_section(h1, n).grading]
        rng = np.random.default_rng(0)
        cx = {int(k): complex(*rng.standard_normal(2)) for k in range(-8, 9)}
        x = grid_function_from_coeffs(cx, m)
        twice = grid_apply(h1, grid_apply(h2, x)).coeff_dict()
        vec = np.array([cx.get(mode, 0j) for mode in grading])
        out = sec @ vec
        interior = [i for i, mode in enumerate(grading)
                    if -n + 8 <= mode <= n - 1 - 8]
        diff = max(abs(out[i] - twice.get(grading[i], 0j)) for i in interior)
        assert diff < 1e-10


class TestRandomSymbol:
    def test_deterministic_in_seed(self):
        a, b = random_symbol(3, 7), random_symbol(3, 7)
        for i in range(2):
            for j in range(2):
                assert a.entries[i][j] == b.entries[i][j]

    def test_degree_bound(self):
        h = random_symbol(3, 7)
        assert h.max_bandwidth() <= 3

    def test_constant_for_degree_zero(self):
        h = random_symbol(0, 5)
        assert h.max_bandwidth() == 0


class TestCompareAction:
    def test_identity_symbol(self):
        assert compare_action(gsio_symbol(1, 1, 1, 1), 16, 3) <= 1e-14

    def test_random_battery(self):
        h = random_symbol(3, 2)
        assert compare_action(h, 32, 20, seed=1) <= 1e-10
