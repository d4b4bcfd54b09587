"""Scalar and 2x2 symbol algebra on the unit circle.

Symbols are Laurent polynomials (finitely many Fourier modes) and rational
functions (quotients of Laurent polynomials whose denominator never
vanishes on the circle).  All classification and factorization criteria in
the package are decided on coefficients and polynomial roots, so this
restricted class keeps every downstream question decidable.

Conventions
-----------
* ``conj`` of a symbol is the pointwise complex conjugate on the circle:
  c(k) -> conj(c(-k)).
* ``flip`` substitutes z -> 1/z: c(k) -> c(-k).
* Winding numbers are computed algebraically (inside zeros minus inside
  poles) and cross-checked by phase unwinding; a disagreement raises
  instead of guessing.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import (
    NonUnimodularPoint,
    NotInvertibleOnCircle,
    ParseError,
    TailNotConverged,
    WindingMismatch,
)

# Package-wide tolerances: roots this close to |z| = 1 are treated as "on
# the circle"; Fourier tails are certified to COEFF_TOL; coefficients below
# TRIM_TOL are trimmed to keep bandwidths tight across long pipelines.
ROOT_TOL = 1e-9
COEFF_TOL = 1e-12
TRIM_TOL = 1e-14

_FFT_CAP = 1 << 20


def _trim(coeffs):
    return {int(k): complex(c) for k, c in coeffs.items() if abs(c) > TRIM_TOL}


class LaurentSymbol:
    """Finitely supported Fourier series sum_k c(k) z^k.

    Coefficients are stored sparsely with tight bandwidth: the extreme
    stored modes always carry nonzero coefficients (canonical form).
    Instances are immutable by convention; every operation returns a new
    symbol.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, LaurentSymbol):
            self._coeffs = dict(coeffs._coeffs)
            return
        if isinstance(coeffs, (int, float, complex)):
            coeffs = {0: complex(coeffs)}
        elif not isinstance(coeffs, dict):
            coeffs = dict(coeffs)
        self._coeffs = _trim(coeffs)

    # -- basic views ----------------------------------------------------
    @property
    def support(self):
        return tuple(sorted(self._coeffs))

    @property
    def is_zero(self):
        return not self._coeffs

    @property
    def d_minus(self):
        """Co-analytic bandwidth: largest m with c(-m) != 0 (0 if none)."""
        return max((-k for k in self._coeffs if k < 0), default=0)

    @property
    def d_plus(self):
        return max((k for k in self._coeffs if k > 0), default=0)

    @property
    def bandwidth(self):
        return max(self.d_minus, self.d_plus)

    def coeff(self, k):
        return self._coeffs.get(int(k), 0j)

    def items(self):
        return sorted(self._coeffs.items())

    def coeff_array(self, kmin, kmax):
        """Dense coefficient window c(kmin..kmax) as a complex vector."""
        out = np.zeros(kmax - kmin + 1, dtype=complex)
        for k, c in self._coeffs.items():
            if kmin <= k <= kmax:
                out[k - kmin] = c
        return out

    # -- algebra ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RationalSymbol):
            return as_rational(self) + other
        other = _coerce_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0j) + c
        return LaurentSymbol(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSymbol({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, RationalSymbol):
            return as_rational(self) - other
        other = _coerce_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce_laurent(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, RationalSymbol):
            return as_rational(self) * other
        if isinstance(other, (int, float, complex)):
            return LaurentSymbol({k: c * other for k, c in self._coeffs.items()})
        if not isinstance(other, LaurentSymbol):
            return NotImplemented
        out = {}
        for k1, c1 in self._coeffs.items():
            for k2, c2 in other._coeffs.items():
                k = k1 + k2
                out[k] = out.get(k, 0j) + c1 * c2
        return LaurentSymbol(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return as_rational(self) / other

    def conj(self):
        """Pointwise conjugate on the circle: c(k) -> conj(c(-k))."""
        return LaurentSymbol({-k: np.conj(c) for k, c in self._coeffs.items()})

    def flip(self):
        """Substitution z -> 1/z: c(k) -> c(-k)."""
        return LaurentSymbol({-k: c for k, c in self._coeffs.items()})

    # -- evaluation -------------------------------------------------------
    def eval_many(self, points):
        points = np.asarray(points, dtype=complex)
        out = np.zeros(points.shape, dtype=complex)
        for k, c in self._coeffs.items():
            out += c * points**k
        return out

    def eval(self, xi):
        if abs(abs(xi) - 1.0) > 1e-12:
            raise NonUnimodularPoint(f"|xi| = {abs(xi)!r} is not 1 within 1e-12")
        return complex(self.eval_many(np.array([xi]))[0])

    def sample(self, m):
        """Values at the m-th roots of unity exp(2*pi*i*j/m), alias-free
        only when m exceeds the total mode span."""
        embed = np.zeros(m, dtype=complex)
        for k, c in self._coeffs.items():
            embed[k % m] += c
        return m * np.fft.ifft(embed)

    def __eq__(self, other):
        other = _coerce_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return self._coeffs == other._coeffs

    def allclose(self, other, tol=1e-12):
        diff = self - _coerce_laurent(other)
        return max((abs(c) for c in diff._coeffs.values()), default=0.0) <= tol

    def __repr__(self):
        if self.is_zero:
            return "LaurentSymbol(0)"
        parts = [f"({c:.6g})z^{k}" if k else f"({c:.6g})" for k, c in self.items()]
        return "LaurentSymbol(" + " + ".join(parts) + ")"


def _coerce_laurent(x):
    if isinstance(x, LaurentSymbol):
        return x
    if isinstance(x, (int, float, complex)):
        return LaurentSymbol({0: complex(x)})
    if isinstance(x, RationalSymbol) and x.is_laurent:
        return x.as_laurent()
    return NotImplemented


def constant(c):
    return LaurentSymbol({0: complex(c)})


def monomial(k, c=1.0):
    return LaurentSymbol({int(k): complex(c)})


#: Convenience generators z and conj(z).
z = monomial(1)
zbar = monomial(-1)


# ---------------------------------------------------------------------------
# Root machinery shared by certification, inversion and winding numbers.
# ---------------------------------------------------------------------------

def _poly_form(s: LaurentSymbol):
    """Return (ascending coeffs of p, m) with s(z) = z^-m p(z), p(0) != 0."""
    if s.is_zero:
        raise ValueError("zero symbol has no polynomial form")
    kmin, kmax = s.support[0], s.support[-1]
    out = np.zeros(kmax - kmin + 1, dtype=complex)
    for k, c in s.items():
        out[k - kmin] = c
    return out, -kmin


def laurent_roots(s: LaurentSymbol):
    """Roots of the polynomial part of s (never zero thanks to tightness)."""
    p, _ = _poly_form(s)
    if len(p) == 1:
        return np.array([], dtype=complex)
    return np.roots(p[::-1])


def _min_modulus_on_circle(s: LaurentSymbol):
    """Certified lower bound of |s| on the circle from its root moduli."""
    p, _ = _poly_form(s)
    roots = laurent_roots(s)
    lead = abs(p[-1])
    bound = lead * float(np.prod(np.abs(1.0 - np.abs(roots)))) if roots.size else lead
    grid_min = float(np.min(np.abs(s.sample(max(256, 4 * (s.bandwidth + 1))))))
    return min(bound, grid_min)


def _check_roots_off_circle(roots, what):
    bad = np.abs(np.abs(roots) - 1.0) <= ROOT_TOL
    if np.any(bad):
        where = roots[bad][0]
        raise NotInvertibleOnCircle(
            f"{what} has a root at {where:.12g} within {ROOT_TOL:g} of the circle"
        )


class RationalSymbol:
    """Quotient of Laurent polynomials, denominator nonvanishing on the circle.

    The constructor certifies the denominator by root finding (no root with
    modulus within ROOT_TOL of 1) and stores a verified lower bound of
    |denominator| on the circle.  Exactly shared numerator/denominator
    roots are cancelled so fractions stay in lowest terms up to tolerance.
    """

    __slots__ = ("num", "den", "certified_min_modulus")

    def __init__(self, num, den=1.0, *, reduce=True):
        num = LaurentSymbol(num) if not isinstance(num, LaurentSymbol) else num
        den = LaurentSymbol(den) if not isinstance(den, LaurentSymbol) else den
        if den.is_zero:
            raise ZeroDivisionError("zero denominator symbol")
        if reduce and not num.is_zero and den.bandwidth > 0:
            num, den = _cancel_common_roots(num, den)
        if len(den.support) == 1 and den.support != (0,):
            # monomial denominators reduce exactly into the numerator
            k = den.support[0]
            num = num * LaurentSymbol({-k: 1.0 / den.coeff(k)})
            den = LaurentSymbol({0: 1.0})
        # normalize the denominator's top coefficient to 1 (canonical scale)
        top = den.coeff(den.support[-1])
        if top != 1:
            num = num * (1.0 / top)
            den = den * (1.0 / top)
        droots = laurent_roots(den)
        _check_roots_off_circle(droots, "denominator")
        self.num = num
        self.den = den
        self.certified_min_modulus = _min_modulus_on_circle(den)

    # -- structure --------------------------------------------------------
    @property
    def is_laurent(self):
        return self.den.support == (0,)

    def as_laurent(self):
        if not self.is_laurent:
            raise ValueError("denominator is not constant")
        return self.num * (1.0 / self.den.coeff(0))

    @property
    def is_zero(self):
        return self.num.is_zero

    def zeros(self):
        return laurent_roots(self.num) if not self.num.is_zero else np.array([])

    def poles(self):
        return laurent_roots(self.den)

    def decay_rate(self):
        """Geometric decay rate of the Fourier tail (0 for Laurent input)."""
        poles = self.poles()
        if poles.size == 0:
            return 0.0
        mods = np.abs(poles)
        rates = np.where(mods < 1.0, mods, 1.0 / mods)
        return float(np.max(rates))

    def effective_bandwidth(self, tol=COEFF_TOL):
        """Mode beyond which all Fourier coefficients are certified < tol."""
        base = max(self.num.bandwidth, self.den.bandwidth)
        rho = self.decay_rate()
        if rho == 0.0:
            return self.as_laurent().bandwidth if self.is_laurent else base
        scale = float(np.max(np.abs(self.sample(1024)))) + 1.0
        # |c(k)| <= scale * rho^(|k| - base) / (1 - rho) for |k| > base
        k = base + int(np.ceil(np.log(tol * (1 - rho) / scale) / np.log(rho))) + 1
        return max(base, k)

    # -- evaluation ---------------------------------------------------------
    def eval_many(self, points):
        return self.num.eval_many(points) / self.den.eval_many(points)

    def eval(self, xi):
        if abs(abs(xi) - 1.0) > 1e-12:
            raise NonUnimodularPoint(f"|xi| = {abs(xi)!r} is not 1 within 1e-12")
        return complex(self.eval_many(np.array([xi]))[0])

    def sample(self, m):
        return self.num.sample(m) / self.den.sample(m)

    # -- algebra --------------------------------------------------------------
    def __add__(self, other):
        other = as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            # shared denominator: add numerators exactly, no degree blowup
            return RationalSymbol(self.num + other.num, self.den)
        return RationalSymbol(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalSymbol(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return as_rational(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return RationalSymbol(self.num * other, self.den, reduce=False)
        other = as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalSymbol(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return self * invert(other)

    def conj(self):
        return RationalSymbol(self.num.conj(), self.den.conj(), reduce=False)

    def flip(self):
        return RationalSymbol(self.num.flip(), self.den.flip(), reduce=False)

    def allclose(self, other, tol=1e-10):
        """Symbol equality via cross-multiplied coefficients (scale-aware)."""
        other = as_rational(other)
        lhs = self.num * other.den
        rhs = other.num * self.den
        scale = max(
            (abs(c) for _, c in lhs.items()), default=0.0
        ) + max((abs(c) for _, c in rhs.items()), default=0.0)
        return (lhs - rhs).allclose(0, tol * max(scale, 1.0))

    def __repr__(self):
        if self.is_laurent:
            return f"RationalSymbol({self.as_laurent()!r})"
        return f"RationalSymbol({self.num!r} / {self.den!r})"


def as_rational(x) -> RationalSymbol:
    if isinstance(x, RationalSymbol):
        return x
    if isinstance(x, LaurentSymbol):
        return RationalSymbol(x, 1.0, reduce=False)
    if isinstance(x, (int, float, complex)):
        return RationalSymbol(constant(x), 1.0, reduce=False)
    return NotImplemented


def _cancel_common_roots(num, den):
    """Deflate exactly shared roots (within ROOT_TOL) out of num and den."""
    try:
        nroots = list(laurent_roots(num))
        droots = list(laurent_roots(den))
    except ValueError:
        return num, den
    pairs = []
    for r in nroots:
        match = None
        for i, q in enumerate(droots):
            if abs(r - q) <= ROOT_TOL * max(1.0, abs(q)):
                match = i
                break
        if match is not None:
            pairs.append((r + droots.pop(match)) / 2.0)
    if not pairs:
        return num, den
    return _deflate(num, pairs), _deflate(den, pairs)


def _deflate(s, roots):
    p, m = _poly_form(s)
    poly = np.polynomial.Polynomial(p)
    for r in roots:
        poly = np.polynomial.Polynomial(np.polydiv(poly.coef[::-1], [1.0, -r])[0][::-1])
    return LaurentSymbol({k - m: c for k, c in enumerate(poly.coef)})


# ---------------------------------------------------------------------------
# Spec operations: splitting, inversion, Fourier windows, winding numbers.
# ---------------------------------------------------------------------------

def riesz_split(s: LaurentSymbol):
    """Split into (analytic part: modes >= 0, co-analytic part: modes < 0)."""
    s = LaurentSymbol(s) if not isinstance(s, LaurentSymbol) else s
    plus = {k: c for k, c in s.items() if k >= 0}
    minus = {k: c for k, c in s.items() if k < 0}
    return LaurentSymbol(plus), LaurentSymbol(minus)


def invert(s) -> RationalSymbol:
    """Reciprocal 1/s; requires s nonvanishing on the circle."""
    s = as_rational(s)
    if s.is_zero:
        raise NotInvertibleOnCircle("zero symbol")
    _check_roots_off_circle(laurent_roots(s.num), "numerator")
    return RationalSymbol(s.den, s.num, reduce=False)


def fourier_coeffs(s, kmin, kmax, tol=COEFF_TOL) -> LaurentSymbol:
    """Fourier coefficient window c(kmin..kmax) as a (truncated) Laurent symbol.

    Exact for Laurent input.  Rational input is sampled on the circle at a
    point count certified by the geometric tail of its poles, then read off
    a DFT; a doubling self-check guards the certification.  Raises
    TailNotConverged when the pole moduli make the rate hopeless.
    """
    if kmin > kmax:
        raise ValueError("kmin > kmax")
    s = as_rational(s)
    if s.is_laurent:
        lau = s.as_laurent()
        return LaurentSymbol({k: lau.coeff(k) for k in range(kmin, kmax + 1)})

    rho = s.decay_rate()
    if rho >= 1.0 - 1e-12:
        raise TailNotConverged("pole too close to the circle for a decay estimate")
    kabs = max(abs(kmin), abs(kmax))
    scale = float(np.max(np.abs(s.sample(1024)))) + 1.0
    m = 1 << max(8, int(np.ceil(np.log2(4 * (kabs + 1)))))
    # aliasing error at |k| <= kabs is at most 2*scale*rho^(m-kabs)/(1-rho)
    while m <= _FFT_CAP and 2 * scale * rho ** (m - kabs) / (1 - rho) > tol / 4:
        m *= 2
    if m > _FFT_CAP:
        raise TailNotConverged("certified sample count exceeds the FFT cap")

    def window(mm):
        coeffs = np.fft.fft(s.sample(mm)) / mm
        return np.array([coeffs[k % mm] for k in range(kmin, kmax + 1)])

    w1, w2 = window(m), window(2 * m)
    if float(np.max(np.abs(w1 - w2))) > tol / 2:
        raise TailNotConverged("doubling self-check failed at certified sample count")
    return LaurentSymbol({k: w2[k - kmin] for k in range(kmin, kmax + 1)})


def winding_number(s) -> int:
    """Winding of s about the origin: inside zeros minus inside poles.

    Computed algebraically from roots and cross-checked by phase unwinding
    at 4096 sample points; the two must agree exactly.
    """
    s = as_rational(s)
    if s.is_zero:
        raise NotInvertibleOnCircle("zero symbol")
    nroots = laurent_roots(s.num)
    _check_roots_off_circle(nroots, "numerator")
    _, m_num = _poly_form(s.num)
    _, m_den = _poly_form(s.den)
    droots = laurent_roots(s.den)
    algebraic = (
        int(np.sum(np.abs(nroots) < 1.0)) - m_num
        - (int(np.sum(np.abs(droots) < 1.0)) - m_den)
    )
    values = s.sample(4096)
    phases = np.unwrap(np.angle(np.append(values, values[0])))
    sampled = (phases[-1] - phases[0]) / (2 * np.pi)
    if abs(sampled - algebraic) > 0.25:
        raise WindingMismatch(
            f"algebraic winding {algebraic} vs sampled {sampled:.3f}"
        )
    return algebraic


# ---------------------------------------------------------------------------
# 2x2 matrix symbols.
# ---------------------------------------------------------------------------

ROLE_GSIO = "gsio_H"
ROLE_EXT_A = "extension_A"
ROLE_EXT_B = "extension_B"
ROLE_QUOTIENT = "quotient_BinvA"


class MatrixSymbol:
    """2x2 array of symbols.  For role ``gsio_H`` the entries are addressed
    as f = entries[0][0], phi = entries[0][1], g = entries[1][0],
    psi = entries[1][1]."""

    __slots__ = ("entries", "role")

    def __init__(self, entries, role=ROLE_GSIO):
        rows = []
        for row in entries:
            cells = []
            for e in row:
                if isinstance(e, (RationalSymbol, LaurentSymbol)):
                    cells.append(e)
                else:
                    cells.append(LaurentSymbol(e))
            rows.append(tuple(cells))
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("matrix symbol must be 2x2")
        self.entries = tuple(rows)
        self.role = role

    @property
    def f(self):
        return self.entries[0][0]

    @property
    def phi(self):
        return self.entries[0][1]

    @property
    def g(self):
        return self.entries[1][0]

    @property
    def psi(self):
        return self.entries[1][1]

    def det(self) -> RationalSymbol:
        a, b = self.entries[0]
        c, d = self.entries[1]
        return as_rational(a) * as_rational(d) - as_rational(b) * as_rational(c)

    def scalar_mul(self, s):
        return MatrixSymbol(
            [[as_rational(e) * s for e in row] for row in self.entries], self.role
        )

    def eval_many(self, points):
        points = np.asarray(points, dtype=complex)
        out = np.zeros(points.shape + (2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                out[..., i, j] = as_rational(self.entries[i][j]).eval_many(points)
        return out

    def max_bandwidth(self, tol=COEFF_TOL):
        return max(
            as_rational(e).effective_bandwidth(tol)
            for row in self.entries
            for e in row
        )

    @property
    def is_laurent(self):
        return all(as_rational(e).is_laurent for row in self.entries for e in row)

    def __repr__(self):
        e = self.entries
        return (
            f"MatrixSymbol([[{e[0][0]!r}, {e[0][1]!r}], "
            f"[{e[1][0]!r}, {e[1][1]!r}]], role={self.role!r})"
        )


def gsio_symbol(f, phi, g, psi) -> MatrixSymbol:
    """Symbol H = [[f, phi], [g, psi]] of the operator
    P+ f P+ + P- g P+ + P+ phi P- + P- psi P-."""
    return MatrixSymbol([[f, phi], [g, psi]], ROLE_GSIO)


# ---------------------------------------------------------------------------
# Text format (shared with the CLI): JSON symbol documents.
# ---------------------------------------------------------------------------

def _num_from_json(v):
    if isinstance(v, str):
        return float(v)
    if isinstance(v, (int, float)):
        return float(v)
    raise ParseError(f"expected number or decimal string, got {v!r}")


def _laurent_from_coeff_rows(rows):
    coeffs = {}
    for row in rows:
        if len(row) != 3:
            raise ParseError(f"coefficient row must be [k, re, im], got {row!r}")
        k, re, im = row
        if not isinstance(k, int):
            raise ParseError(f"mode must be an integer, got {k!r}")
        coeffs[k] = coeffs.get(k, 0j) + complex(_num_from_json(re), _num_from_json(im))
    return LaurentSymbol(coeffs)


def symbol_from_json(obj):
    """Parse one scalar symbol from its JSON object form.

    Canonical shape: {"type": "laurent", "coeffs": [[k, re, im], ...]} or
    {"type": "rational", "num": {...}, "den": {...}}.  The shorthand forms
    {"laurent": [[k, re, im], ...]} and {"rational": {"num":..., "den":...}}
    are accepted too.
    """
    if not isinstance(obj, dict):
        raise ParseError(f"symbol must be a JSON object, got {obj!r}")
    if "laurent" in obj:
        return _laurent_from_coeff_rows(obj["laurent"])
    if "rational" in obj:
        body = obj["rational"]
        return RationalSymbol(
            symbol_from_json(body["num"]), symbol_from_json(body["den"])
        )
    kind = obj.get("type")
    if kind == "laurent":
        return _laurent_from_coeff_rows(obj.get("coeffs", []))
    if kind == "rational":
        try:
            num = symbol_from_json(obj["num"])
            den = symbol_from_json(obj["den"])
        except KeyError as exc:
            raise ParseError(f"rational symbol missing field {exc}") from exc
        return RationalSymbol(num, den)
    raise ParseError(f"unknown symbol type {kind!r}")


def symbol_to_json(s):
    s = as_rational(s)
    if s.is_laurent:
        lau = s.as_laurent()
        return {
            "type": "laurent",
            "coeffs": [[k, c.real, c.imag] for k, c in lau.items()],
        }
    return {
        "type": "rational",
        "num": {"type": "laurent",
                "coeffs": [[k, c.real, c.imag] for k, c in s.num.items()]},
        "den": {"type": "laurent",
                "coeffs": [[k, c.real, c.imag] for k, c in s.den.items()]},
    }


def matrix_symbol_from_json(obj, role=ROLE_GSIO) -> MatrixSymbol:
    if isinstance(obj, str):
        obj = json.loads(obj)
    entries = obj.get("entries") if isinstance(obj, dict) else None
    if entries is None or len(entries) != 2 or any(len(r) != 2 for r in entries):
        raise ParseError('symbol file must carry a 2x2 "entries" array')
    return MatrixSymbol(
        [[symbol_from_json(e) for e in row] for row in entries],
        obj.get("role", role),
    )


def matrix_symbol_to_json(h: MatrixSymbol):
    return {
        "entries": [[symbol_to_json(e) for e in row] for row in h.entries],
        "role": h.role,
    }
