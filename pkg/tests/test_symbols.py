import numpy as np
import pytest

from gsio.errors import (
    NonUnimodularPoint,
    NotInvertibleOnCircle,
    ParseError,
)
from gsio.symbols import (
    LaurentSymbol,
    RationalSymbol,
    as_rational,
    constant,
    fourier_coeffs,
    invert,
    matrix_symbol_from_json,
    matrix_symbol_to_json,
    monomial,
    riesz_split,
    symbol_from_json,
    symbol_to_json,
    winding_number,
    z,
    zbar,
)


def unit_grid(m):
    return np.exp(2j * np.pi * np.arange(m) / m)


class TestEval:
    def test_polynomial_at_one(self):
        assert (z + 2).eval(1) == pytest.approx(3)

    def test_conjugate_monomial(self):
        assert zbar.eval(1j) == pytest.approx(-1j)

    def test_rational_quotient(self):
        s = invert(2 - z)
        assert s.eval(1) == pytest.approx(1.0)

    def test_off_circle_point_rejected(self):
        with pytest.raises(NonUnimodularPoint):
            (z + 2).eval(1.001)
        with pytest.raises(NonUnimodularPoint):
            as_rational(z).eval(0.5 + 0.5j)


class TestFourier:
    def test_geometric_series(self):
        # oracle: 1/(2-z) = sum_k z^k / 2^(k+1)
        s = invert(2 - z)
        window = fourier_coeffs(s, 0, 6)
        for k in range(7):
            assert window.coeff(k) == pytest.approx(0.5 ** (k + 1), abs=1e-12)

    def test_laurent_readoff_exact(self):
        s = monomial(2) + 3 * zbar
        window = fourier_coeffs(s, -2, 2)
        assert window.coeff(2) == 1
        assert window.coeff(-1) == 3
        assert window.coeff(0) == 0

    def test_partial_fraction_oracle(self):
        # (z - 1/2)/(z - 3) = 1 + (5/2)/(z - 3) = 1 - (5/6) sum_k (z/3)^k
        s = RationalSymbol(z - 0.5, z - 3)
        window = fourier_coeffs(s, -3, 4)
        assert window.coeff(0) == pytest.approx(1 - 5 / 6, abs=1e-12)
        for k in range(1, 5):
            assert window.coeff(k) == pytest.approx(-(5 / 6) / 3 ** k, abs=1e-12)
        for k in (-1, -2, -3):
            assert abs(window.coeff(k)) < 1e-12


class TestArithmetic:
    def test_conj_of_z(self):
        assert z.conj() == zbar

    def test_flip(self):
        assert (monomial(2) + 2 * zbar).flip() == monomial(-2) + 2 * z

    def test_mul_is_convolution(self):
        assert (z + 1) * (zbar + 1) == z + zbar + 2

    def test_random_mul_matches_convolution_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = LaurentSymbol({int(k): complex(*rng.standard_normal(2))
                               for k in rng.integers(-4, 5, size=4)})
            b = LaurentSymbol({int(k): complex(*rng.standard_normal(2))
                               for k in rng.integers(-4, 5, size=4)})
            prod = a * b
            for k in range(-10, 11):
                oracle = sum(a.coeff(j) * b.coeff(k - j) for j in range(-8, 9))
                assert prod.coeff(k) == pytest.approx(oracle, abs=1e-12)

    def test_trim_keeps_bandwidth_tight(self):
        s = LaurentSymbol({3: 1e-16, 1: 1.0, -2: 1e-15})
        assert s.support == (1,)


class TestRiesz:
    def test_mode_partition(self):
        plus, minus = riesz_split(monomial(2) + 3 + zbar)
        assert plus == monomial(2) + 3
        assert minus == zbar

    def test_pure_coanalytic(self):
        plus, minus = riesz_split(monomial(-3))
        assert plus.is_zero and minus == monomial(-3)

    def test_zero(self):
        plus, minus = riesz_split(LaurentSymbol(0))
        assert plus.is_zero and minus.is_zero

    def test_idempotent_and_complementary(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            s = LaurentSymbol({int(k): complex(*rng.standard_normal(2))
                               for k in range(-5, 6)})
            plus, minus = riesz_split(s)
            again_plus, again_minus = riesz_split(plus)
            assert again_minus.is_zero and again_plus == plus
            assert plus + minus == s


class TestInvert:
    def test_constant(self):
        assert invert(constant(2)).eval(1) == pytest.approx(0.5)

    def test_unimodular_monomial(self):
        assert invert(z).as_laurent() == zbar

    def test_zero_on_circle_rejected(self):
        with pytest.raises(NotInvertibleOnCircle):
            invert(z - 1)

    def test_pointwise_inverse_on_grid(self):
        rng = np.random.default_rng(3)
        grid = unit_grid(256)
        for _ in range(5):
            s = as_rational(LaurentSymbol(
                {k: complex(*rng.standard_normal(2)) for k in range(-3, 4)}
            ) + 8.0)  # offset keeps zeros off the circle
            vals = invert(s).eval_many(grid) * s.eval_many(grid)
            assert np.max(np.abs(vals - 1.0)) < 1e-10


class TestWinding:
    def test_monomial(self):
        assert winding_number(monomial(3)) == 3

    def test_root_outside(self):
        # oracle: single root at 2, outside the disk
        assert winding_number(z - 2) == 0

    def test_rational(self):
        # one zero inside, pole outside
        assert winding_number(RationalSymbol(z - 0.5, z - 3)) == 1

    def test_rejects_circle_zero(self):
        with pytest.raises(NotInvertibleOnCircle):
            winding_number(z - 1)

    def test_additive_under_products(self):
        rng = np.random.default_rng(17)
        produced = 0
        while produced < 10:
            a = LaurentSymbol({k: complex(*rng.standard_normal(2))
                               for k in range(-2, 3)})
            b = LaurentSymbol({k: complex(*rng.standard_normal(2))
                               for k in range(-2, 3)})
            try:
                wa, wb = winding_number(a), winding_number(b)
            except NotInvertibleOnCircle:
                continue
            produced += 1
            assert winding_number(as_rational(a) * as_rational(b)) == wa + wb

    def test_conj_negates(self):
        rng = np.random.default_rng(23)
        produced = 0
        while produced < 10:
            s = as_rational(LaurentSymbol(
                {k: complex(*rng.standard_normal(2)) for k in range(-2, 3)}
            ))
            try:
                w = winding_number(s)
            except NotInvertibleOnCircle:
                continue
            produced += 1
            assert winding_number(s.conj()) == -w


class TestRational:
    def test_denominator_on_circle_rejected(self):
        with pytest.raises(NotInvertibleOnCircle):
            RationalSymbol(constant(1), z - 1)

    def test_certified_min_modulus_is_lower_bound(self):
        s = RationalSymbol(constant(1), (z - 0.5) * (z + 2))
        grid_min = float(np.min(np.abs(s.den.eval_many(unit_grid(4096)))))
        assert 0 < s.certified_min_modulus <= grid_min + 1e-12

    def test_common_roots_cancelled(self):
        num = (z - 0.5) * (z - 2)
        den = (z - 0.5) * (z + 3)
        s = RationalSymbol(num, den)
        grid = unit_grid(128)
        direct = (grid - 2) / (grid + 3)
        assert np.max(np.abs(s.eval_many(grid) - direct)) < 1e-10

    def test_monomial_denominator_reduces_to_laurent(self):
        s = RationalSymbol(z + 1, monomial(2))
        assert s.is_laurent
        assert s.as_laurent() == zbar + monomial(-2)


class TestJson:
    def test_symbol_roundtrip(self):
        s = as_rational(z + 2 * zbar)
        assert symbol_from_json(symbol_to_json(s)).allclose(s)

    def test_rational_roundtrip(self):
        s = RationalSymbol(z - 0.5, z - 3)
        back = symbol_from_json(symbol_to_json(s))
        grid = unit_grid(64)
        assert np.max(np.abs(back.eval_many(grid) - s.eval_many(grid))) < 1e-14

    def test_decimal_strings_accepted(self):
        s = symbol_from_json({"type": "laurent", "coeffs": [[1, "1.5", "0"]]})
        assert s == 1.5 * z

    def test_shorthand_form(self):
        s = symbol_from_json({"laurent": [[1, 1, 0]]})
        assert s == z

    def test_matrix_roundtrip(self):
        from gsio.symbols import gsio_symbol

        h = gsio_symbol(z, zbar, 2, monomial(-2))
        back = matrix_symbol_from_json(matrix_symbol_to_json(h))
        for i in range(2):
            for j in range(2):
                assert as_rational(back.entries[i][j]).allclose(
                    as_rational(h.entries[i][j]))

    def test_bad_mode_raises(self):
        with pytest.raises(ParseError):
            symbol_from_json({"type": "laurent", "coeffs": [["a", 1, 0]]})

    def test_unknown_type_raises(self):
        with pytest.raises(ParseError):
            symbol_from_json({"type": "fourier"})
