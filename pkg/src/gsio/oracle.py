"""Brute-force grid oracle for the operator action.

Applies R_H x = P+ f P+ x + P- g P+ x + P+ phi P- x + P- psi P- x by
transforming to uniform samples on the circle, multiplying pointwise and
splitting modes with the FFT.  This path never touches the matrix
assembly code, so it serves as the independent reference the section
builders are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AliasRisk
from .symbols import LaurentSymbol, MatrixSymbol, as_rational

__all__ = ["GridFunction", "grid_function_from_coeffs", "grid_apply",
           "random_symbol", "compare_action"]


@dataclass(frozen=True)
class GridFunction:
    """Function on the circle held as samples at M uniform points,
    M a power of two."""

    samples: np.ndarray

    def __post_init__(self):
        m = len(self.samples)
        if m & (m - 1):
            raise ValueError("sample count must be a power of two")

    @property
    def m(self):
        return len(self.samples)

    def coeffs(self):
        """Aliased Fourier coefficients, index k mod M."""
        return np.fft.fft(self.samples) / self.m

    def coeff_dict(self):
        c = self.coeffs()
        half = self.m // 2
        return {((k + half) % self.m) - half: c[k] for k in range(self.m)}


def grid_function_from_coeffs(coeffs, m) -> GridFunction:
    """Synthesize samples from a finite coefficient set (dict or Laurent)."""
    if isinstance(coeffs, LaurentSymbol):
        coeffs = dict(coeffs.items())
    band = max((abs(k) for k in coeffs), default=0)
    if m < 2 * band + 2:
        raise AliasRisk(f"m = {m} cannot carry bandwidth {band}")
    embed = np.zeros(m, dtype=complex)
    for k, c in coeffs.items():
        embed[k % m] += c
    return GridFunction(m * np.fft.ifft(embed))


def _split_samples(samples):
    """Riesz-split sampled data: (analytic part, co-analytic part) samples."""
    m = len(samples)
    c = np.fft.fft(samples) / m
    plus = c.copy()
    plus[m // 2:] = 0.0  # modes m//2 .. m-1 alias to negative modes
    minus = c - plus
    return m * np.fft.ifft(plus), m * np.fft.ifft(minus)


def grid_apply(h: MatrixSymbol, x: GridFunction) -> GridFunction:
    """Apply the operator with symbol h to x on the grid.

    Exact (up to rounding) for Laurent symbols whenever the grid is
    alias-free: M must be at least 4 times the largest bandwidth involved
    and strictly exceed twice the bandwidth sum.
    """
    m = x.m
    band_h = h.max_bandwidth()
    cx = x.coeff_dict()
    floor = 1e-13 * max((abs(c) for c in cx.values()), default=0.0)
    band_x = max((abs(k) for k, c in cx.items() if abs(c) > floor), default=0)
    if m < 4 * max(band_h, 1) or m <= 2 * (band_h + band_x):
        raise AliasRisk(
            f"m = {m} too small for bandwidths h = {band_h}, x = {band_x}"
        )
    xp, xm = _split_samples(x.samples)
    grid = np.exp(2j * np.pi * np.arange(m) / m)
    out = np.zeros(m, dtype=complex)
    f, phi = h.entries[0]
    g, psi = h.entries[1]
    for sym, part, keep_plus in (
        (f, xp, True), (g, xp, False), (phi, xm, True), (psi, xm, False)
    ):
        sym = as_rational(sym)
        if sym.is_zero:
            continue
        prod = sym.eval_many(grid) * part
        plus, minus = _split_samples(prod)
        out += plus if keep_plus else minus
    return GridFunction(out)


def random_symbol(degree, seed) -> MatrixSymbol:
    """Random Laurent matrix symbol: every entry carries modes
    -degree..degree with coefficients uniform in the unit square of C.
    Deterministic in the seed."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    rng = np.random.default_rng(seed)
    entries = []
    for _ in range(2):
        row = []
        for _ in range(2):
            modes = range(-degree, degree + 1)
            vals = rng.random((2 * degree + 1, 2))
            row.append(LaurentSymbol(
                {k: complex(v[0], v[1]) for k, v in zip(modes, vals)}
            ))
        entries.append(row)
    return MatrixSymbol(entries)


def compare_action(h: MatrixSymbol, n, trials, seed=0) -> float:
    """Max relative residual between the assembled section action and the
    grid oracle over random interior-supported test vectors.

    Test vectors are supported on modes at distance >= bandwidth(h) from
    the truncation boundary, so the two computation paths agree exactly on
    every section mode; the contract is a residual <= 1e-10.
    """
    from .sections import gsio_section  # deferred: oracle must not need assembly

    if trials < 1:
        raise ValueError("trials must be >= 1")
    d = h.max_bandwidth()
    if n - 1 - d < -n + d:
        raise ValueError(f"order {n} leaves no interior for bandwidth {d}")
    section = gsio_section(h, n)
    modes = np.array([m for _, m in section.grading])
    lo, hi = -n + d, n - 1 - d
    m_grid = 1 << int(np.ceil(np.log2(max(4 * (d + n), 16))))
    worst = 0.0
    for t in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([seed, t]))
        support = [m for m in modes if lo <= m <= hi]
        vals = rng.standard_normal((len(support), 2))
        coeffs = {m: complex(a, b) for m, (a, b) in zip(support, vals)}
        vec = np.array([coeffs.get(m, 0j) for m in modes])
        via_section = section.data @ vec
        gf = grid_apply(h, grid_function_from_coeffs(coeffs, m_grid))
        oracle = gf.coeff_dict()
        via_oracle = np.array([oracle.get(m, 0j) for m in modes])
        denom = max(float(np.max(np.abs(via_oracle))), 1e-30)
        worst = max(worst, float(np.max(np.abs(via_section - via_oracle))) / denom)
    return worst
