"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis ``1, z, ..., z**(phi(m)-1)`` as an
integer numerator vector over a single positive common denominator.  Products
are computed by convolution, folding exponents modulo ``m`` and then replacing
each ``z**k`` (``phi(m) <= k < m``) by a precomputed reduced row.

Scalars are :class:`fractions.Fraction`; ``Rational`` is an alias for it.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from pathlib import Path
from typing import Iterable, Sequence, Union

import mpmath
import numpy as np

from ._nt import divisors, totient

Rational = Fraction
Scalar = Union[int, Fraction]

CACHE_ENV = "CYCLOHODGE_CACHE_DIR"


# --------------------------------------------------------------------------
# cyclotomic polynomials and reduction tables
# --------------------------------------------------------------------------

def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact quotient of integer polynomials (ascending coefficients, monic divisor)."""
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dn]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[:dn]):
        raise ArithmeticError("polynomial division is not exact")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, constant term first."""
    if m < 1:
        raise ValueError("m must be >= 1")
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        num = _poly_divexact(num, cyclotomic_poly(d))
    return tuple(num)


@dataclass(frozen=True)
class _Table:
    m: int
    phi: int
    poly: tuple[int, ...]
    rows: np.ndarray  # object array, shape (m, phi); row k is z**k reduced


_TABLES: dict[int, _Table] = {}
_TABLES_LOCK = threading.Lock()


def _build_rows(m: int, poly: Sequence[int]) -> list[list[int]]:
    phi = len(poly) - 1
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(m):
        rows.append(cur)
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            nxt = [c - top * a for c, a in zip(nxt, poly[:-1])]
        cur = nxt
    return rows


def _disk_load(m: int) -> list[list[int]] | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    for path in sorted(Path(root).glob(f"cyclo-{m}-*.json")):
        blob = path.read_bytes()
        if hashlib.sha256(blob).hexdigest()[:16] != path.stem.rsplit("-", 1)[-1]:
            continue
        data = json.loads(blob)
        if data.get("m") == m and data.get("poly") == list(cyclotomic_poly(m)):
            return data["rows"]
    return None


def _disk_store(m: int, rows: list[list[int]]) -> None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return
    blob = json.dumps({"m": m, "poly": list(cyclotomic_poly(m)), "rows": rows},
                      separators=(",", ":")).encode()
    digest = hashlib.sha256(blob).hexdigest()[:16]
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    target = path / f"cyclo-{m}-{digest}.json"
    if not target.exists():
        tmp = target.with_suffix(".tmp")
        tmp.write_bytes(blob)
        tmp.replace(target)


def _table(m: int) -> _Table:
    tab = _TABLES.get(m)
    if tab is not None:
        return tab
    with _TABLES_LOCK:
        tab = _TABLES.get(m)
        if tab is None:
            poly = cyclotomic_poly(m)
            rows = _disk_load(m)
            if rows is None:
                rows = _build_rows(m, poly)
                _disk_store(m, rows)
            arr = np.empty((m, len(poly) - 1), dtype=object)
            arr[:, :] = rows
            tab = _Table(m, len(poly) - 1, poly, arr)
            _TABLES[m] = tab
    return tab


def reduce_exponents(m: int, buckets) -> np.ndarray:
    """Reduce ``sum buckets[k] * z**k`` (any length) to the power basis of Q(zeta_m).

    Returns an object array of length phi(m) holding Python ints (or whatever
    exact scalars were passed in).
    """
    tab = _table(m)
    v = np.asarray(buckets, dtype=object)
    if len(v) > m:
        pad = (-len(v)) % m
        if pad:
            v = np.concatenate([v, np.zeros(pad, dtype=object)])
        v = v.reshape(-1, m).sum(axis=0)
    elif len(v) < m:
        v = np.concatenate([v, np.zeros(m - len(v), dtype=object)])
    out = v[: tab.phi].copy()
    tail = v[tab.phi:]
    if tab.phi < m and any(tail):
        out = out + tail.dot(tab.rows[tab.phi:])
    return out


# --------------------------------------------------------------------------
# field elements
# --------------------------------------------------------------------------

class CycloElement:
    """Immutable element of Q(zeta_m) in the reduced power basis."""

    __slots__ = ("modulus", "_num", "_den")

    def __init__(self, modulus: int, coeffs: Iterable[Scalar]):
        vals = [Fraction(c) for c in coeffs]
        phi = totient(modulus)
        if len(vals) != phi:
            raise ValueError(f"expected {phi} coefficients for modulus {modulus}, got {len(vals)}")
        den = 1
        for c in vals:
            den = den // gcd(den, c.denominator) * c.denominator
        self._set(modulus, [c.numerator * (den // c.denominator) for c in vals], den)

    def _set(self, modulus: int, num, den: int) -> None:
        num = [int(c) for c in num]
        if len(num) != totient(modulus):
            raise ValueError(f"expected {totient(modulus)} coefficients for modulus {modulus}")
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = gcd(den, *num)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "_num", tuple(num))
        object.__setattr__(self, "_den", den)

    def __setattr__(self, name, value):
        raise AttributeError("CycloElement is immutable")

    @classmethod
    def from_ints(cls, modulus: int, num, den: int = 1) -> "CycloElement":
        """Build from an already-reduced integer vector over ``den``."""
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self = object.__new__(cls)
        self._set(modulus, num, den)
        return self

    @classmethod
    def from_exponents(cls, modulus: int, buckets, den: int = 1) -> "CycloElement":
        """``sum buckets[k] z**k / den`` for an unreduced exponent vector."""
        return cls.from_ints(modulus, reduce_exponents(modulus, buckets), den)

    @classmethod
    def zero(cls, modulus: int) -> "CycloElement":
        return cls.from_ints(modulus, [0] * totient(modulus))

    @classmethod
    def rational(cls, modulus: int, value: Scalar) -> "CycloElement":
        value = Fraction(value)
        num = [0] * totient(modulus)
        num[0] = value.numerator
        return cls.from_ints(modulus, num, value.denominator)

    @classmethod
    def one(cls, modulus: int) -> "CycloElement":
        return cls.rational(modulus, 1)

    @classmethod
    def zeta(cls, modulus: int, k: int = 1) -> "CycloElement":
        """The root of unity ``zeta_m ** k``."""
        buckets = [0] * modulus
        buckets[k % modulus] = 1
        return cls.from_exponents(modulus, buckets)

    # -- accessors --------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self._num[0], self._den)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "CycloElement":
        if isinstance(other, CycloElement):
            if other.modulus != self.modulus:
                raise ValueError(
                    f"modulus mismatch: {self.modulus} vs {other.modulus}; lift explicitly")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElement.rational(self.modulus, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        da, db = self._den, other._den
        g = gcd(da, db)
        fa, fb = db // g, da // g
        num = [a * fa + b * fb for a, b in zip(self._num, other._num)]
        return CycloElement.from_ints(self.modulus, num, da * fa)

    __radd__ = __add__

    def __neg__(self):
        return CycloElement.from_ints(self.modulus, [-c for c in self._num], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycloElement.from_ints(
                self.modulus, [c * other.numerator for c in self._num],
                self._den * other.denominator)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a = np.array(self._num, dtype=object)
        b = np.array(other._num, dtype=object)
        prod = np.convolve(a, b)
        return CycloElement.from_exponents(self.modulus, prod, self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_m)")
        tab = _table(self.modulus)
        a = [Fraction(c, self._den) for c in self._num]
        s = _poly_inverse_mod(a, [Fraction(c) for c in tab.poly])
        s = s + [Fraction(0)] * (tab.phi - len(s))
        return CycloElement(self.modulus, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloElement.one(self.modulus)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparisons ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        if not isinstance(other, CycloElement):
            return NotImplemented
        return (self.modulus == other.modulus and self._den == other._den
                and self._num == other._num)

    def __hash__(self):
        return hash((self.modulus, self._num, self._den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycloElement({self.modulus}, {self})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            sign, c = ("-" if c < 0 else "+"), abs(c)
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            elif c.denominator == 1:
                body = f"{c}*{mono}"
            else:
                body = f"({c})*{mono}"
            terms.append((sign, body))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return " ".join([head] + [f"{s} {b}" for s, b in terms[1:]])

    # -- field maps (thin wrappers around module functions) ---------------

    def galois(self, a: int) -> "CycloElement":
        return galois_apply(a, self)

    def conjugate(self) -> "CycloElement":
        return conjugate(self)

    def lift(self, m: int) -> "CycloElement":
        return lift(self, m)

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "coeffs": [fraction_str(c) for c in self.coeffs]}


def fraction_str(x: Scalar) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _poly_trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return _poly_trim(q), _poly_trim(a[: len(b) - 1])


def _poly_sub_mul(a, q, b):
    # a - q*b
    out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, qi in enumerate(q):
        if qi:
            for j, bj in enumerate(b):
                out[i + j] -= qi * bj
    return _poly_trim(out)


def _poly_inverse_mod(a: list[Fraction], f: list[Fraction]) -> list[Fraction]:
    """Inverse of a(x) modulo the irreducible f(x) by the extended Euclidean algorithm."""
    r0, r1 = _poly_trim(list(f)), _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub_mul(s0, q, s1)
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    c = r1[0]
    _, s = _poly_divmod([x / c for x in s1], _poly_trim(list(f)))
    return s


# --------------------------------------------------------------------------
# module-level operations
# --------------------------------------------------------------------------

def cyc_add(a: CycloElement, b: CycloElement) -> CycloElement:
    return a + a._coerce(b)


def cyc_neg(a: CycloElement) -> CycloElement:
    return -a


def cyc_mul(a: CycloElement, b: CycloElement) -> CycloElement:
    return a * a._coerce(b)


def cyc_scale(a: CycloElement, c: Scalar) -> CycloElement:
    return a * Fraction(c)


def cyc_inv(a: CycloElement) -> CycloElement:
    return a.inverse()


def galois_apply(a: int, x: CycloElement) -> CycloElement:
    """The automorphism ``z -> z**a`` of Q(zeta_m)."""
    m = x.modulus
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not coprime to {m}")
    buckets = [0] * m
    for i, c in enumerate(x.numerators):
        if c:
            buckets[(a * i) % m] += c
    return CycloElement.from_exponents(m, buckets, x.denominator)


def conjugate(x: CycloElement) -> CycloElement:
    """Complex conjugation, i.e. ``galois_apply(m - 1, x)``."""
    return galois_apply(x.modulus - 1 if x.modulus > 1 else 1, x)


def lift(x: CycloElement, m: int) -> CycloElement:
    """Image of x under Q(zeta_d) -> Q(zeta_m), ``zeta_d -> zeta_m**(m/d)``."""
    d = x.modulus
    if m % d:
        raise ValueError(f"{d} does not divide {m}")
    if m == d:
        return x
    step = m // d
    buckets = [0] * m
    for i, c in enumerate(x.numerators):
        buckets[i * step] += c
    return CycloElement.from_exponents(m, buckets, x.denominator)


@lru_cache(maxsize=None)
def _descent_data(m: int, d: int) -> tuple[tuple[int, ...], tuple[tuple[Fraction, ...], ...]]:
    # columns of the lift map, then pivot rows and the inverse of that square block
    phi_m, phi_d = totient(m), totient(d)
    cols = [lift(CycloElement.zeta(d, j), m).numerators for j in range(phi_d)]
    mat = [[Fraction(cols[j][i]) for j in range(phi_d)] for i in range(phi_m)]
    pivots = []
    basis: list[tuple[list[Fraction], int]] = []
    for i, row in enumerate(mat):
        v = row[:]
        for b, col in basis:
            if v[col]:
                f = v[col] / b[col]
                v = [x - f * y for x, y in zip(v, b)]
        nz = next((k for k, x in enumerate(v) if x), None)
        if nz is not None:
            basis.append((v, nz))
            pivots.append(i)
            if len(pivots) == phi_d:
                break
    square = [mat[i] for i in pivots]
    inv = _fraction_inverse(square)
    return tuple(pivots), tuple(tuple(r) for r in inv)


def _fraction_inverse(a: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def descend(x: CycloElement, d: int) -> CycloElement:
    """Rewrite an element of Q(zeta_m) lying in Q(zeta_d) over the basis of Q(zeta_d)."""
    m = x.modulus
    if m % d:
        raise ValueError(f"{d} does not divide {m}")
    if m == d:
        return x
    pivots, inv = _descent_data(m, d)
    y = x.coeffs
    coeffs = [sum((r[k] * y[p] for k, p in enumerate(pivots)), Fraction(0)) for r in inv]
    out = CycloElement(d, coeffs)
    if lift(out, m) != x:
        raise ValueError(f"element does not lie in Q(zeta_{d})")
    return out


def trace_down(x: CycloElement, d: int) -> CycloElement:
    """Relative trace Q(zeta_m) -> Q(zeta_d) for d | m."""
    m = x.modulus
    if d < 1 or m % d:
        raise ValueError(f"{d} does not divide {m}")
    autos = [a for a in range(1, m + 1) if gcd(a, m) == 1 and (a - 1) % d == 0]
    buckets = [0] * m
    for i, c in enumerate(x.numerators):
        if c:
            for a in autos:
                buckets[(a * i) % m] += c
    return descend(CycloElement.from_exponents(m, buckets, x.denominator), d)


# --------------------------------------------------------------------------
# numeric embeddings
# --------------------------------------------------------------------------

# Each coefficient contributes at most one rounding of cos/sin plus one product
# and one addition at a working precision 16 bits above the target, so the
# absolute error of ``embed`` is below ``(1 + sum|c_i|) * 2**(EMBED_ERROR_BITS - precision_bits)``.
EMBED_ERROR_BITS = 2


@dataclass(frozen=True)
class ComplexApprox:
    real: mpmath.mpf
    imag: mpmath.mpf
    precision_bits: int

    def _check(self, other: "ComplexApprox") -> None:
        if not isinstance(other, ComplexApprox):
            raise TypeError("ComplexApprox only combines with ComplexApprox")
        if other.precision_bits != self.precision_bits:
            raise ValueError(
                f"precision mismatch: {self.precision_bits} vs {other.precision_bits} bits")

    def __add__(self, other: "ComplexApprox") -> "ComplexApprox":
        self._check(other)
        with mpmath.workprec(self.precision_bits):
            return ComplexApprox(+(self.real + other.real), +(self.imag + other.imag),
                                 self.precision_bits)

    def __sub__(self, other: "ComplexApprox") -> "ComplexApprox":
        self._check(other)
        with mpmath.workprec(self.precision_bits):
            return ComplexApprox(+(self.real - other.real), +(self.imag - other.imag),
                                 self.precision_bits)

    def __mul__(self, other: "ComplexApprox") -> "ComplexApprox":
        self._check(other)
        with mpmath.workprec(self.precision_bits):
            re = self.real * other.real - self.imag * other.imag
            im = self.real * other.imag + self.imag * other.real
            return ComplexApprox(+re, +im, self.precision_bits)

    def __abs__(self) -> float:
        with mpmath.workprec(self.precision_bits):
            return float(mpmath.hypot(self.real, self.imag))

    def __complex__(self) -> complex:
        return complex(float(self.real), float(self.imag))


def embed(x: CycloElement, precision_bits: int = 53) -> ComplexApprox:
    """Evaluate x at ``zeta_m = exp(2 pi i / m)``."""
    if precision_bits < 53:
        raise ValueError("precision_bits must be >= 53")
    m = x.modulus
    with mpmath.workprec(precision_bits + 16):
        re = mpmath.mpf(0)
        im = mpmath.mpf(0)
        for i, c in enumerate(x.coeffs):
            if c:
                t = mpmath.mpf(2 * i) / m
                cv = mpmath.mpf(c.numerator) / c.denominator
                re += cv * mpmath.cospi(t)
                im += cv * mpmath.sinpi(t)
    with mpmath.workprec(precision_bits):
        return ComplexApprox(+re, +im, precision_bits)


def embed_error_bound(x: CycloElement, precision_bits: int = 53) -> float:
    weight = 1 + sum(abs(c) for c in x.coeffs)
    return float(weight) * 2.0 ** (EMBED_ERROR_BITS - precision_bits)
