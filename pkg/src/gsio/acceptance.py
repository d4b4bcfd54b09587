"""Acceptance battery: the twelve desk-scale checks that gate a release.

Each criterion runs at its stated tolerance and returns a CriterionResult;
``run_all`` executes the battery in order and is what both the test suite
and ``gsio verify`` drive.  Expected values come from independent oracles
computed inline (coefficient sums, root counting, brute-force kernels),
never from the code path under test.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import oracle, sections, spectral, wiener_hopf
from .symbols import (
    LaurentSymbol,
    MatrixSymbol,
    RationalSymbol,
    as_rational,
    constant,
    monomial,
    winding_number,
    z,
    zbar,
)
from .sections import gsio_section
from .symbols import gsio_symbol
from .errors import NotInvertibleOnCircle


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name}: {self.detail} ({self.elapsed:.1f}s)"


def _random_laurent(rng, degree):
    vals = rng.random((2 * degree + 1, 2))
    return LaurentSymbol({
        k: complex(a, b) for k, (a, b) in zip(range(-degree, degree + 1), vals)
    })


def _random_gsio(rng, degree):
    return MatrixSymbol([[_random_laurent(rng, degree) for _ in range(2)]
                         for _ in range(2)])


def _invertible_laurent(rng, degree):
    """Rejection-sample a Laurent symbol with no zeros on the circle."""
    while True:
        s = _random_laurent(rng, degree)
        try:
            winding_number(as_rational(s))
            return s
        except NotInvertibleOnCircle:
            continue


def _conditioned_laurent(rng, degree, margin=0.25):
    """Laurent symbol whose zeros keep a modulus margin from the circle.

    Kernel probing resolves partial indices only when the kernel tails
    decay visibly within the section order; zeros at distance >= margin
    give decay below 1e-12 by order 128."""
    from .symbols import laurent_roots

    while True:
        s = _random_laurent(rng, degree)
        roots = laurent_roots(s)
        if np.all(np.abs(np.abs(roots) - 1.0) >= margin):
            return s


# ---------------------------------------------------------------------------

def criterion_01_assembly(seed=0):
    """compare_action over 100 random symbols, degree <= 4, N = 64."""
    worst = 0.0
    for i in range(100):
        degree = i % 5
        h = oracle.random_symbol(degree, seed * 1000 + i)
        worst = max(worst, oracle.compare_action(h, 64, 20, seed=seed + i))
    return worst <= 1e-10, f"max residual {worst:.3e} (bound 1e-10)"


def criterion_02_berezin(seed=0):
    """Kernel forms match the radial coefficient sums; the recovery map
    reproduces the diagonal pair within a tenth of the l1 mass."""
    rng = np.random.default_rng(seed + 2)
    r = 0.99
    grid = np.exp(2j * np.pi * np.arange(64) / 64)
    worst_pair = 0.0
    worst_rho = -np.inf
    for _ in range(20):
        h = _random_gsio(rng, int(rng.integers(0, 6)))
        f, psi = h.f, h.psi
        for xi in grid:
            first, second = spectral.berezin_pair(h, r, xi)
            oracle_f = sum(c * r ** abs(k) * xi ** k for k, c in f.items())
            oracle_psi = sum(c * r ** abs(k) * xi ** k for k, c in psi.items())
            worst_pair = max(worst_pair, abs(first - oracle_f),
                             abs(second - oracle_psi))
        pair = spectral.symbol_map_rho(h, 64, (0.9, 0.99))
        l1 = max(sum(abs(c) for _, c in f.items()),
                 sum(abs(c) for _, c in psi.items()))
        worst_rho = max(worst_rho, pair.sup_deviation - 0.1 * l1)
    ok = worst_pair <= 1e-8 and worst_rho <= 0.0
    return ok, (f"pair residual {worst_pair:.3e} (bound 1e-8); "
                f"rho margin {worst_rho:+.3e} (must be <= 0)")


def criterion_03_doubling(seed=0):
    """Radial form of the mode-doubling commutator against 1/(1+r^2)."""
    worst = 0.0
    for r in (0.9, 0.99, 0.999):
        got = spectral.doubling_berezin_first(r)
        worst = max(worst, abs(got - 1.0 / (1.0 + r * r)))
    return worst <= 1e-8, f"max |form - 1/(1+r^2)| = {worst:.3e} (bound 1e-8)"


def criterion_04_semicommutator(seed=0):
    """Interior rank of R_H1 R_H2 - R_(diagonal product) stays <= 2d for
    diagonal symbol pairs of degree d."""
    rng = np.random.default_rng(seed + 4)
    worst_sigma = 0.0
    n = 48
    for d in (1, 2, 3, 4):
        for _ in range(3):
            f1, psi1 = _random_laurent(rng, d), _random_laurent(rng, d)
            f2, psi2 = _random_laurent(rng, d), _random_laurent(rng, d)
            h1 = gsio_symbol(f1, 0, 0, psi1)
            h2 = gsio_symbol(f2, 0, 0, psi2)
            h12 = gsio_symbol(f1 * f2, 0, 0, psi1 * psi2)
            s1 = gsio_section(h1, n)
            s2 = gsio_section(h2, n)
            diff = sections.compose(s1, s2) - gsio_section(h12, n)
            interior = diff.interior(2 * d)
            sv = np.linalg.svd(interior, compute_uv=False)
            if len(sv) > 2 * d:
                worst_sigma = max(worst_sigma, float(sv[2 * d]))
    return worst_sigma <= 1e-10, (
        f"max sigma_(2d+1) = {worst_sigma:.3e} (bound 1e-10)"
    )


def criterion_05_nehari(seed=0):
    """Hankel-norm distances: conj(z) and z + conj(z) give exactly 1,
    analytic symbols give exactly 0."""
    d1 = spectral.hankel_distance(zbar)
    d2 = spectral.hankel_distance(z + zbar)
    d3 = spectral.hankel_distance(monomial(3))
    ok = d1 == 1.0 and d2 == 1.0 and d3 == 0.0
    return ok, f"dist(zbar)={d1}, dist(z+zbar)={d2}, dist(z^3)={d3}"


def criterion_06_index(seed=0):
    """Index formula b - a over the monomial grid, and verdict kernel
    dimensions against brute-force monomial kernels for g = phi = 0."""
    rng = np.random.default_rng(seed + 6)
    for a in range(-3, 4):
        for b in range(-3, 4):
            f = monomial(a) if a else constant(1.0)
            psi = monomial(b) if b else constant(1.0)
            g = _random_laurent(rng, 2)
            phi = _random_laurent(rng, 2)
            got = spectral.fredholm_index(gsio_symbol(f, phi, g, psi))
            if got != b - a:
                return False, f"index({a},{b}) = {got}, expected {b - a}"
            verdict = wiener_hopf.fredholm_verdict(gsio_symbol(f, 0, 0, psi))
            brute_ker = max(0, -a) + max(0, b)
            brute_coker = max(0, a) + max(0, -b)
            if (verdict.dim_ker, verdict.dim_coker) != (brute_ker, brute_coker):
                return False, (
                    f"dims({a},{b}) = ({verdict.dim_ker},{verdict.dim_coker}), "
                    f"brute force ({brute_ker},{brute_coker})"
                )
    return True, "49 index values and 49 kernel-dimension pairs exact"


def criterion_07_extension(seed=0):
    """Extension identity and determinant relation on random symbols."""
    rng = np.random.default_rng(seed + 7)
    worst_id, worst_det = 0.0, 0.0
    for _ in range(20):
        entries = [[_random_laurent(rng, 2) for _ in range(2)] for _ in range(2)]
        entries[1][1] = _invertible_laurent(rng, 2)
        h = MatrixSymbol(entries)
        worst_id = max(worst_id, sections.extension_identity_residual(h, 32))
        worst_det = max(worst_det, sections.extension_blocks(h).det_residual)
    ok = worst_id <= 1e-10 and worst_det <= 1e-10
    return ok, (f"identity residual {worst_id:.3e}, det residual "
                f"{worst_det:.3e} (bounds 1e-10)")


def _scalar_battery():
    half = constant(0.5)
    return [
        RationalSymbol(z - 0.5, 1.0),
        RationalSymbol(2.0 - z, 1.0),
        RationalSymbol((z - 0.5) * (z - 2.0), 1.0),
        RationalSymbol((z - 0.3) * (z + 1.7) * (z - 0.9j), 1.0),
        RationalSymbol(z - 0.5, z - 3.0),
        RationalSymbol((z - 1.5) * (z + 0.4), (z - 0.25) * (z + 5.0)),
        RationalSymbol(monomial(2) + 4.0, 1.0),
        RationalSymbol(monomial(-1) * (z - 2.0) * (z - 0.1), 1.0),
        RationalSymbol((z + 0.5j) * (z - 1.8j), z + 4.0),
        RationalSymbol(constant(1.0), (z - 0.6) * (z + 2.5)),
    ]


def _matrix_battery():
    zero = LaurentSymbol(0.0)
    return [
        MatrixSymbol([[monomial(2), zero], [zero, zbar]]),
        MatrixSymbol([[2.0 - z, zero], [zero, z - 0.5]]),
        MatrixSymbol([[constant(0.0) - 1.0, zero], [zero, constant(2.0)]]),
        MatrixSymbol([[zero, constant(-1.0)], [constant(-1.0), zero]]),
        MatrixSymbol([[2.0 - z, zero], [constant(1.0), 2.0 - zbar]]),
        MatrixSymbol([[zero, constant(-1.0)], [-1.0 * z, zero]]),
    ]


def criterion_08_wiener_hopf(seed=0):
    """Reconstruction residuals, index sums and verdict consistency."""
    worst = 0.0
    for s in _scalar_battery():
        fac = wiener_hopf.wh_scalar(s)
        worst = max(worst, fac.reconstruction_residual)
        if sum(fac.kappa) != winding_number(s):
            return False, f"scalar kappa sum mismatch for {s!r}"
    for f in _matrix_battery():
        fac = wiener_hopf.wh_matrix2(f)
        worst = max(worst, fac.reconstruction_residual)
        if sum(fac.kappa) != winding_number(f.det()):
            return False, f"matrix kappa sum mismatch for {f!r}"
    rng = np.random.default_rng(seed + 8)
    inconsistencies = 0
    for _ in range(8):
        h = gsio_symbol(_conditioned_laurent(rng, 2), _random_laurent(rng, 1),
                        _random_laurent(rng, 1), _conditioned_laurent(rng, 2))
        try:
            wiener_hopf.fredholm_verdict(h)
        except wiener_hopf.InternalInconsistency:
            inconsistencies += 1
    ok = worst <= 1e-8 and inconsistencies == 0
    return ok, (f"max reconstruction residual {worst:.3e} (bound 1e-8); "
                f"{inconsistencies} verdict inconsistencies")


def criterion_09_inclusion(seed=0):
    """Eigenvalues of order-256 sections stay in the inclusion region
    dilated by 0.05."""
    rng = np.random.default_rng(seed + 9)
    checked = 0
    for _ in range(20):
        h = _random_gsio(rng, int(rng.integers(1, 4)))
        region = spectral.inclusion_region(h, (8, 8))
        eigs = spectral.dense_spectrum(gsio_section(h, 256))
        for lam in eigs:
            checked += 1
            if not region.contains(lam, dilation=0.05):
                return False, f"eigenvalue {lam:.6g} escaped the dilated region"
    return True, f"{checked} eigenvalues contained (dilation 0.05)"


def criterion_10_essential_probe(seed=0):
    """Pseudospectral probe of the pure-shift symbol: small on the unit
    circle, bounded below away from it (a convergence check on the
    essential spectrum, not an eigenvalue test)."""
    h = gsio_symbol(z, 0, 0, z)
    sec = gsio_section(h, 512)
    worst_on = 0.0
    for xi in np.exp(2j * np.pi * np.arange(32) / 32):
        worst_on = max(worst_on, spectral.smallest_singular(sec, xi))
    far = spectral.smallest_singular(sec, 2.0 + 0j)
    ok = worst_on <= 0.1 and far >= 0.5
    return ok, f"max sigma_min on circle {worst_on:.3e} (<= 0.1), at 2: {far:.3f} (>= 0.5)"


def criterion_11_foguel(seed=0):
    """Spectral radius of Foguel-Hankel sections stays inside the closed
    unit disk."""
    rng = np.random.default_rng(seed + 11)
    worst = 0.0
    for _ in range(10):
        phi = _random_laurent(rng, 4)
        sec = sections.foguel_hankel_section(phi, 256)
        worst = max(worst, float(np.max(np.abs(spectral.dense_spectrum(sec)))))
    return worst <= 1.0 + 1e-6, f"max spectral radius {worst:.8f} (bound 1 + 1e-6)"


def _classification_battery():
    """30 hand-built symbols with hand-derived flag tuples
    (zero, compact, self_adjoint, positive_necessary, complex_symmetric).

    Derivations follow the coefficient criteria directly: zero needs a
    vanishing diagonal with analytic g and conj(phi); self-adjointness
    needs real diagonal entries and analytic g - conj(phi); positivity is
    the necessary condition (self-adjoint plus non-negative diagonal);
    complex symmetry is f = psi.
    """
    sym = z + zbar                       # real-valued on the circle, min -2
    pos = z + zbar + 3.0                 # real-valued, min 1
    T, F = True, False
    return [
        (gsio_symbol(0, 0, 0, 0), (T, T, T, T, T)),
        (gsio_symbol(0, monomial(-2), monomial(3), 0), (T, T, T, T, T)),
        (gsio_symbol(0, zbar, 0, 0), (T, T, T, T, T)),
        (gsio_symbol(0, 0, z, 0), (T, T, T, T, T)),
        (gsio_symbol(0, z, zbar, 0), (F, T, T, T, T)),
        (gsio_symbol(0, z, monomial(2), 0), (F, T, F, F, T)),
        (gsio_symbol(0, 0, zbar, 0), (F, T, F, F, T)),
        (gsio_symbol(0, zbar, zbar, 0), (F, T, F, F, T)),
        (gsio_symbol(1, 0, 0, 1), (F, F, T, T, T)),
        (gsio_symbol(sym * sym + 1.0, 0, 0, sym * sym + 1.0), (F, F, T, T, T)),
        (gsio_symbol(2, 0, 0, -2), (F, F, T, F, F)),
        (gsio_symbol(sym, zbar, z, sym), (F, F, T, F, T)),
        (gsio_symbol(pos, zbar, z, pos), (F, F, T, T, T)),
        (gsio_symbol(sym, z, z, sym), (F, F, F, F, T)),
        (gsio_symbol(z, 0, 0, z), (F, F, F, F, T)),
        (gsio_symbol(z, 0, 0, zbar), (F, F, F, F, F)),
        (gsio_symbol(1j * sym, 0, 0, 1j * sym), (F, F, F, F, T)),
        (gsio_symbol(pos, 0, z, pos), (F, F, T, T, T)),
        (gsio_symbol(sym, monomial(-2), monomial(2), pos), (F, F, T, F, F)),
        (gsio_symbol(z + 2.0, 0, 0, z + 2.0), (F, F, F, F, T)),
        (gsio_symbol(z + 2.0, 0, 0, zbar + 2.0), (F, F, F, F, F)),
        (gsio_symbol(1, z, zbar, 1), (F, F, T, T, T)),
        (gsio_symbol(1, zbar, zbar + z, 1), (F, F, F, F, T)),
        (gsio_symbol(sym, 0, 0, sym), (F, F, T, F, T)),
        (gsio_symbol(pos, 0, 0, pos), (F, F, T, T, T)),
        (gsio_symbol(pos, 0, 0, sym), (F, F, T, F, F)),
        (gsio_symbol(2, monomial(-3), monomial(3) + z, 2), (F, F, T, T, T)),
        (gsio_symbol(sym * sym, 0, 0, sym * sym), (F, F, T, T, T)),
        (gsio_symbol(0.5 * sym, monomial(2), monomial(-2), 1), (F, F, T, F, F)),
        (gsio_symbol(z, z, z, z), (F, F, F, F, T)),
    ]


def criterion_12_classification(seed=0):
    """Flag truth table against hand-derived values and direct matrix
    checks (Hermitian, zero, V-conjugation identity), all exact."""
    n = 12
    for idx, (h, expect) in enumerate(_classification_battery()):
        flags = spectral.classify(h)
        got = (flags.zero, flags.compact, flags.self_adjoint,
               flags.positive_necessary, flags.complex_symmetric)
        if got != expect:
            return False, f"case {idx}: classify gave {got}, expected {expect}"
        mat = gsio_section(h, n).data
        if flags.zero != bool(np.all(mat == 0)):
            return False, f"case {idx}: zero flag disagrees with the matrix"
        if flags.self_adjoint != bool(np.array_equal(mat, mat.conj().T)):
            return False, f"case {idx}: self-adjoint flag disagrees with the matrix"
        v_mat = gsio_section(sections.apply_V_conjugation(h), n).data
        if flags.complex_symmetric != bool(np.array_equal(v_mat, mat.conj().T)):
            return False, f"case {idx}: V-conjugation identity disagrees"
    count = len(_classification_battery())
    return True, f"{count} cases match hand flags and exact matrix checks"


CRITERIA = [
    (1, "assembly vs grid oracle", criterion_01_assembly),
    (2, "radial forms and symbol recovery", criterion_02_berezin),
    (3, "mode-doubling commutator form", criterion_03_doubling),
    (4, "semicommutator interior rank", criterion_04_semicommutator),
    (5, "Hankel-norm distances", criterion_05_nehari),
    (6, "index formula and kernel dims", criterion_06_index),
    (7, "extension identity", criterion_07_extension),
    (8, "Wiener-Hopf batteries", criterion_08_wiener_hopf),
    (9, "spectral inclusion containment", criterion_09_inclusion),
    (10, "essential-spectrum probe", criterion_10_essential_probe),
    (11, "Foguel-Hankel disk bound", criterion_11_foguel),
    (12, "classification truth table", criterion_12_classification),
]


def run_criterion(number, seed=0) -> CriterionResult:
    num, name, fn = CRITERIA[number - 1]
    start = time.monotonic()
    try:
        passed, detail = fn(seed)
    except Exception as exc:  # a crash is a failing criterion, not a crash of the runner
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(num, name, passed, detail, time.monotonic() - start)


def run_all(seed=0):
    return [run_criterion(num, seed) for num, _, _ in CRITERIA]
