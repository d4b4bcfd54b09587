import numpy as np
import pytest

from gsio.errors import OrderTooSmall, TailNotConverged
from gsio.oracle import random_symbol
from gsio.sections import (
    FiniteSection,
    compose,
    foguel_hankel_section,
    gsio_section,
    l2_grading,
    toeplitz_section,
)
from gsio.spectral import (
    berezin_pair,
    berezin_pair_section,
    classify,
    dense_spectrum,
    doubling_berezin_first,
    doubling_commutator,
    essential_norm_lower,
    essential_spectrum_curve,
    fredholm_index,
    hankel_distance,
    inclusion_region,
    kernel_order,
    smallest_singular,
    special_case_spectrum,
    symbol_map_rho,
)
from gsio.symbols import (
    LaurentSymbol,
    RationalSymbol,
    as_rational,
    constant,
    gsio_symbol,
    monomial,
    z,
    zbar,
)


def unit_grid(m):
    return np.exp(2j * np.pi * np.arange(m) / m)


class TestDenseSpectrum:
    def test_identity(self):
        sec = toeplitz_section(constant(1), 4)
        assert np.allclose(sorted(dense_spectrum(sec).real), np.ones(4))

    def test_shift_section_is_nilpotent(self):
        sec = toeplitz_section(z, 8)
        assert np.max(np.abs(dense_spectrum(sec))) < 1e-8

    def test_tridiagonal_formula(self):
        n = 16
        sec = toeplitz_section(z + zbar, n)
        got = np.sort(dense_spectrum(sec).real)
        oracle = np.sort(2 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1)))
        assert np.max(np.abs(got - oracle)) < 1e-10


class TestSmallestSingular:
    def test_identity_at_one(self):
        sec = toeplitz_section(constant(1), 6)
        assert smallest_singular(sec, 1.0) == pytest.approx(0.0, abs=1e-14)

    def test_shift_decay_inside_disk(self):
        # trial-vector bound: sigma_min <= r^N sqrt((1-r^2)/(1-r^(2N)))
        sec = toeplitz_section(z, 64)
        r = 0.9
        bound = r ** 64 * np.sqrt((1 - r * r) / (1 - r ** 128))
        assert smallest_singular(sec, r) <= bound

    def test_resolvent_bound_outside(self):
        sec = toeplitz_section(z, 64)
        assert smallest_singular(sec, 2.0) >= 1.0


class TestBerezin:
    def test_constant_diagonal(self):
        h = gsio_symbol(3, monomial(2), zbar, -1)
        for r, xi in ((0.9, 1.0), (0.99, 1j)):
            first, second = berezin_pair(h, r, xi)
            assert first == pytest.approx(3.0, abs=1e-10)
            assert second == pytest.approx(-1.0, abs=1e-10)

    def test_poisson_sum(self):
        h = gsio_symbol(z + zbar, 0, 0, 1)
        first, _ = berezin_pair(h, 0.99, 1.0)
        assert first == pytest.approx(1.98, abs=1e-10)

    def test_psi_side_uses_mirror_kernel(self):
        h = gsio_symbol(0, 0, 0, z + zbar)
        _, second = berezin_pair(h, 0.9, 1.0)
        assert second == pytest.approx(1.8, abs=1e-10)

    def test_rational_symbol_quadrature(self):
        s = RationalSymbol(constant(1), 2 - z)
        h = gsio_symbol(s, 0, 0, s)
        r, xi = 0.9, np.exp(0.3j)
        first, second = berezin_pair(h, r, xi)
        # oracle: Poisson sum of the geometric coefficients 2^-(k+1)
        oracle = sum(0.5 ** (k + 1) * r ** k * xi ** k for k in range(200))
        assert first == pytest.approx(oracle, abs=1e-9)
        assert second == pytest.approx(oracle, abs=1e-9)

    def test_tail_rule_enforced(self):
        h = gsio_symbol(1, 0, 0, 1)
        with pytest.raises(OrderTooSmall):
            berezin_pair(h, 0.99, 1.0, n=10)

    def test_kernel_order_rule(self):
        for r in (0.9, 0.99, 0.999):
            assert r ** (2 * kernel_order(r)) <= 1e-12


class TestSymbolMapRho:
    def test_exact_on_constants(self):
        h = gsio_symbol(2 + 1j, z, zbar, -4)
        pair = symbol_map_rho(h, 16)
        assert pair.sup_deviation <= 1e-12

    def test_recovers_laurent_diagonal(self):
        h = gsio_symbol(z, monomial(-3), monomial(2), zbar)
        pair = symbol_map_rho(h, 64, (0.9, 0.99))
        assert pair.sup_deviation <= 0.1  # l1 norm of each diagonal entry is 1

    def test_product_sections_multiplicative(self):
        h1 = gsio_symbol(z + 2, zbar, z, zbar + 1j)
        h2 = gsio_symbol(1 - z, z, monomial(-2), 2 * z + 3)
        n = 220  # tail rule for r = 0.9 needs 132 analytic modes
        secs = [gsio_section(h1, n), gsio_section(h2, n)]
        ref = (as_rational(h1.f) * as_rational(h2.f),
               as_rational(h1.psi) * as_rational(h2.psi))
        pair = symbol_map_rho(secs, 32, (0.8, 0.9), reference=ref)
        l1 = 12.0  # coefficient mass bound for the products
        assert pair.sup_deviation <= 0.1 * l1

    def test_semicommutator_maps_to_zero(self):
        h1 = gsio_symbol(z + 2, zbar, z, zbar + 1j)
        h2 = gsio_symbol(1 - z, z, monomial(-2), 2 * z + 3)
        n = 220
        prod = compose(gsio_section(h1, n), gsio_section(h2, n))
        matched = gsio_symbol(as_rational(h1.f) * as_rational(h2.f), z, z,
                              as_rational(h1.psi) * as_rational(h2.psi))
        diff = prod - gsio_section(matched, n)
        pair = symbol_map_rho(diff, 32, (0.8, 0.9), reference=(0.0, 0.0))
        assert pair.sup_deviation <= 0.5

    def test_self_commutator_maps_to_zero(self):
        h = gsio_symbol(z + 2, zbar, z, zbar + 1j)
        n = 220
        sec = gsio_section(h, n)
        comm = compose(sec, sec.adjoint()) - compose(sec.adjoint(), sec)
        pair = symbol_map_rho(comm, 16, (0.8, 0.9), reference=(0.0, 0.0))
        assert pair.sup_deviation <= 0.5


class TestEssentialSpectrum:
    def test_circle_symbol(self):
        h = gsio_symbol(z, 0, 0, z)
        pts = essential_spectrum_curve(h, 64)
        assert np.max(np.abs(np.abs(pts) - 1.0)) < 1e-12

    def test_two_constants(self):
        h = gsio_symbol(2, z, z, -2)
        pts = set(np.round(essential_spectrum_curve(h, 16), 9))
        assert pts == {2.0 + 0j, -2.0 + 0j}

    def test_disjoint_circles(self):
        h = gsio_symbol(z + 2, 0, 0, z - 2)
        pts = essential_spectrum_curve(h, 128)
        near_two = np.abs(pts - 2) < 1.0 + 1e-9
        assert np.all(np.abs(np.abs(pts[near_two] - 2) - 1.0) < 1e-12)
        assert np.all(np.abs(np.abs(pts[~near_two] + 2) - 1.0) < 1e-12)


class TestHankelDistance:
    def test_values(self):
        assert hankel_distance(zbar) == 1.0
        assert hankel_distance(monomial(3)) == 0.0
        assert hankel_distance(zbar + z) == 1.0

    def test_rational(self):
        # coefficients of 1/(2 - z) at negative modes vanish: analytic
        assert hankel_distance(RationalSymbol(constant(1), 2 - z)) <= 1e-10
        # 1/(1 - zbar/2) has the exact geometric tail c(-t) = 2^-t; oracle:
        # top singular value of the explicitly constructed Hankel matrix
        s = RationalSymbol(constant(1), 1 - 0.5 * zbar)
        d = hankel_distance(s)
        m, k = np.meshgrid(np.arange(1, 61), np.arange(60), indexing="ij")
        oracle = np.linalg.svd(0.5 ** (m + k), compute_uv=False)[0]
        assert d == pytest.approx(oracle, abs=1e-8)


class TestFredholmIndex:
    def test_monomials(self):
        h = gsio_symbol(monomial(2), z, z, monomial(3))
        assert fredholm_index(h) == 1

    def test_equal_windings(self):
        h = gsio_symbol(z + 2, z, z, z + 3)
        assert fredholm_index(h) == 0

    def test_shift_against_identity(self):
        assert fredholm_index(gsio_symbol(z, 0, 0, 1)) == -1

    def test_brute_force_kernels_block_diagonal(self):
        # g = phi = 0: kernel of T_(z^a) (+) dual-T_(z^b) is monomial-spanned
        for a, b in ((2, 3), (-1, 2), (0, -2)):
            h = gsio_symbol(monomial(a) if a else 1, 0, 0,
                            monomial(b) if b else 1)
            sec = gsio_section(h, 24).data
            sv = np.linalg.svd(sec, compute_uv=False)
            null_count = int(np.sum(sv < 1e-10))
            # section null space sees kernel and reflected cokernel
            expect = max(0, -a) + max(0, b) + max(0, a) + max(0, -b)
            assert null_count == expect
            assert fredholm_index(h) == b - a

    def test_index_under_v_and_adjoint(self):
        # V-conjugation swaps the diagonal and conjugates, so the two
        # winding negations cancel: the index is preserved.  The adjoint
        # symbol negates it.
        from gsio.sections import apply_V_conjugation
        from gsio.symbols import MatrixSymbol

        rng = np.random.default_rng(3)
        done = 0
        while done < 6:
            h = random_symbol(2, int(rng.integers(1 << 20)))
            try:
                idx = fredholm_index(h)
            except Exception:
                continue
            done += 1
            assert fredholm_index(apply_V_conjugation(h)) == idx
            f, phi = h.entries[0]
            g, psi = h.entries[1]
            adj = MatrixSymbol([[f.conj(), g.conj()], [phi.conj(), psi.conj()]])
            assert fredholm_index(adj) == -idx


class TestInclusionRegion:
    def test_zero_offdiagonal_reduces_to_hulls(self):
        h = gsio_symbol(z + 2, 0, 0, z - 2)
        region = inclusion_region(h, (16, 16))
        assert region.delta == 0.0
        assert region.contains(2.0)        # center of the f hull
        assert region.contains(-2.0)
        assert not region.contains(5.0)
        assert not region.contains(0.0)    # between the two disks

    def test_constant_diagonal_disk(self):
        # f = psi = c, phi = s z, g = zbar: delta = min(s, 1) and the
        # criterion reads |lambda - c| <= delta
        c, s = 1.0 + 1.0j, 0.5
        h = gsio_symbol(c, s * z, zbar, c)
        region = inclusion_region(h, (8, 8))
        assert region.delta == pytest.approx(s, abs=1e-12)
        assert region.contains(c + 0.45)
        assert region.contains(c + 0.45j)
        assert not region.contains(c + 0.55)

    def test_random_eigenvalues_contained(self):
        rng = np.random.default_rng(6)
        h = random_symbol(2, 77)
        region = inclusion_region(h, (8, 8))
        eigs = dense_spectrum(gsio_section(h, 128))
        assert all(region.contains(lam, dilation=0.05) for lam in eigs)


class TestClassify:
    def test_identity_flags(self):
        flags = classify(gsio_symbol(1, 0, 0, 1))
        assert flags.self_adjoint and flags.complex_symmetric and not flags.zero

    def test_compact_flags(self):
        flags = classify(gsio_symbol(0, zbar, zbar, 0))
        assert flags.compact and not flags.zero
        assert flags.finite_rank == 1  # rank(H_zbar) + rank of the flipped corner

    def test_self_adjoint_case(self):
        sym = z + zbar
        flags = classify(gsio_symbol(sym, zbar, z, sym))
        assert flags.self_adjoint and flags.complex_symmetric
        n = 10
        sec = gsio_section(gsio_symbol(sym, zbar, z, sym), n).data
        assert np.array_equal(sec, sec.conj().T)

    def test_rational_real_diagonal(self):
        s = RationalSymbol(constant(1), 5.0 - 2 * z - 2 * zbar)
        flags = classify(gsio_symbol(s, 0, 0, s))
        assert flags.self_adjoint and flags.positive_necessary
        assert flags.complex_symmetric


class TestSpecialCaseSpectrum:
    def test_hankel_free_case(self):
        h = gsio_symbol(z + zbar, z, 0, 1)
        n = 12
        got = np.sort_complex(special_case_spectrum(h, n))
        eig = np.linalg.eigvals(toeplitz_section(z + zbar, n).data)
        expect = np.sort_complex(np.append(eig, 1.0))
        assert np.max(np.abs(got - expect)) < 1e-10

    def test_rank_one_product(self):
        # phi = z makes the conj(phi) Hankel rank one; the product block is
        # then the projector-like matrix -E00 with spectrum {0, -1}
        h = gsio_symbol(0, z, zbar, 1)
        got = special_case_spectrum(h, 8)
        vals = {complex(np.round(v, 9)) for v in got}
        assert vals == {0j, (-1 + 0j), (1 + 0j)}

    def test_dual_case(self):
        from gsio.sections import dual_toeplitz_section

        h = gsio_symbol(1, zbar, z, z + zbar)
        n = 10
        got = np.sort_complex(special_case_spectrum(h, n))
        assert np.min(np.abs(got - 1.0)) < 1e-12

    def test_requires_unit_diagonal(self):
        with pytest.raises(ValueError):
            special_case_spectrum(gsio_symbol(z, 0, 0, z), 8)


class TestDoubling:
    def test_interior_diagonal(self):
        sec = doubling_commutator(4)
        modes = [m for _, m in sec.grading]
        diag = np.diag(sec.data).real
        for mode, value in zip(modes, diag):
            if -2 <= mode <= 1:  # interior of the order-4 section
                assert value == (1.0 if mode % 2 == 0 else 0.0)

    def test_radial_form_values(self):
        for r in (0.9, 0.99):
            assert doubling_berezin_first(r) == pytest.approx(
                1 / (1 + r * r), abs=1e-10)

    def test_section_path_agrees(self):
        sec = doubling_commutator(300)
        first, _ = berezin_pair_section(sec, 0.9, np.exp(0.8j))
        assert first.real == pytest.approx(1 / 1.81, abs=1e-10)
        assert abs(first.imag) < 1e-12

    def test_rho_detects_non_membership(self):
        # the commutator is a projector-like operator whose radial limits sit
        # at 1/2, far from the zero pair a calculus element would give
        sec = doubling_commutator(300)
        pair = symbol_map_rho(sec, 8, (0.8, 0.9), reference=(0.0, 0.0))
        assert pair.sup_deviation > 0.1
        assert pair.sup_deviation == pytest.approx(0.5, abs=0.05)


class TestEssentialNorm:
    def test_constants(self):
        assert essential_norm_lower(gsio_symbol(3, z, z, -1)) == pytest.approx(3.0)

    def test_cosine(self):
        h = gsio_symbol(z + zbar, 0, 0, 0)
        assert essential_norm_lower(h) == pytest.approx(2.0, abs=1e-6)

    def test_compact_operator_vanishes(self):
        assert essential_norm_lower(gsio_symbol(0, 0, zbar, 0)) == 0.0
