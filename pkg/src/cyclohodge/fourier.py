"""Odd functions on (Z/qZ)^x, their character coefficients and the character sums
(weighted sums, Gauss and Ramanujan sums, L(1, chi)) that control them.

Characters are extended by zero to non-units, so every "sum over a mod q"
below silently skips residues divisible by p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Mapping, NamedTuple

import mpmath
import numpy as np

from . import kernels
from ._nt import is_prime, legendre, lcm, prime_power, totient
from .characters import (DirichletCharacter, eval_char, legendre_character, odd_characters,
                         restrict_to_conductor)
from .exact import ComplexApprox, CycloElement, conjugate, embed, lift


class IdentityViolation(AssertionError):
    """An exact identity failed; ``witness`` names the offending input."""

    def __init__(self, name: str, witness: dict):
        super().__init__(f"{name} violated: {witness}")
        self.name = name
        self.witness = witness


# --------------------------------------------------------------------------
# odd functions
# --------------------------------------------------------------------------

def units(q: int) -> list[int]:
    if q == 1:
        return []
    p, _ = prime_power(q)
    return [a for a in range(1, q) if a % p]


@dataclass(frozen=True)
class OddFunction:
    """Q-valued function f on (Z/qZ)^x with f(q - a) = -f(a).

    ``values`` is keyed by the unit residues 1 <= a < q.  For q = 2 the only
    unit is its own negative, so the function is zero and ``values`` is empty.
    """

    q: int
    values: Mapping[int, Fraction] = field(repr=False)

    def __post_init__(self):
        vals = {int(a): Fraction(v) for a, v in self.values.items()}
        if self.q == 2:
            if any(vals.values()):
                raise ValueError("the only odd function mod 2 is zero")
            vals = {}
        elif set(vals) != set(units(self.q)):
            raise ValueError(f"values must be given on exactly the units mod {self.q}")
        for a, v in vals.items():
            if vals[self.q - a] != -v:
                raise ValueError(f"not odd: f({a}) = {v}, f({self.q - a}) = {vals[self.q - a]}")
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    @classmethod
    def from_half(cls, q: int, half: Mapping[int, Fraction] | Callable[[int], Fraction]) -> "OddFunction":
        """Extend values given on units a < q/2 by oddness."""
        get = half if callable(half) else half.__getitem__
        vals = {}
        for a in units(q):
            if 2 * a < q:
                v = Fraction(get(a))
                vals[a] = v
                vals[q - a] = -v
        return cls(q, vals)

    def __call__(self, a: int) -> Fraction:
        a %= self.q
        if self.q == 2 and a == 1:
            return Fraction(0)
        try:
            return self.values[a]
        except KeyError:
            raise ValueError(f"{a} is not a unit mod {self.q}") from None

    def __hash__(self):
        return hash((self.q, tuple(self.values.items())))

    def __add__(self, other: "OddFunction") -> "OddFunction":
        if other.q != self.q:
            raise ValueError("modulus mismatch")
        return OddFunction(self.q, {a: v + other.values[a] for a, v in self.values.items()})

    def __neg__(self) -> "OddFunction":
        return OddFunction(self.q, {a: -v for a, v in self.values.items()})

    def __mul__(self, c) -> "OddFunction":
        c = Fraction(c)
        return OddFunction(self.q, {a: c * v for a, v in self.values.items()})

    __rmul__ = __mul__

    def translate(self, s: int) -> "OddFunction":
        """Regular-representation action: ``(s f)(b) = f(b s)``."""
        if gcd(s, self.q) != 1:
            raise ValueError(f"{s} is not a unit mod {self.q}")
        return OddFunction(self.q, {b: self(b * s) for b in self.values})

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def integer_values(self) -> tuple[int, dict[int, int]]:
        """``(D, {a: D f(a)})`` with D the least common denominator."""
        den = 1
        for v in self.values.values():
            den = lcm(den, v.denominator)
        return den, {a: int(v * den) for a, v in self.values.items()}

    def to_json(self) -> dict:
        return {"q": self.q, "values": {str(a): f"{v.numerator}/{v.denominator}"
                                        for a, v in self.values.items()}}


def h_function(n: int, q: int) -> OddFunction:
    """``a -> (n - 1)/2 - floor(n a / q)`` on the units mod q."""
    p, _ = prime_power(q)
    if n % p == 0:
        raise ValueError(f"p = {p} divides n = {n}")
    if n < 1:
        raise ValueError("n must be positive")
    half = Fraction(n - 1, 2)
    if q == 2:
        return OddFunction(2, {})
    return OddFunction(q, {a: half - (n * a) // q for a in units(q)})


# --------------------------------------------------------------------------
# character sums
# --------------------------------------------------------------------------

def fourier_coeff(h: OddFunction, chi: DirichletCharacter) -> CycloElement:
    """``s(h, chi) = sum_a h(a) conj(chi(a))`` in Q(zeta_order(chi)).

    The orthonormal-basis coefficient is this divided by phi(q).
    """
    if chi.modulus != h.q:
        raise ValueError(f"modulus mismatch: h mod {h.q}, chi mod {chi.modulus}")
    den, ints = h.integer_values()
    order = chi.order
    table = chi.exponent_table
    buckets = [0] * order
    for a, v in ints.items():
        if v:
            buckets[(-int(table[a])) % order] += v
    return CycloElement.from_exponents(order, buckets, den)


def normalized_coeff(h: OddFunction, chi: DirichletCharacter) -> CycloElement:
    return fourier_coeff(h, chi) / totient(h.q)


def floor_sum(n: int, chi: DirichletCharacter) -> CycloElement:
    """``sum_{a<q} floor(n a / q) conj(chi(a))``."""
    q, order = chi.modulus, chi.order
    table = chi.exponent_table
    buckets = [0] * order
    for a in range(q):
        k = int(table[a])
        if k >= 0:
            buckets[(-k) % order] += (n * a) // q
    return CycloElement.from_exponents(order, buckets)


def S_sum(chi: DirichletCharacter) -> CycloElement:
    """``S_q(chi) = sum_{a<q} a chi(a)``."""
    order = chi.order
    table = chi.exponent_table
    buckets = [0] * order
    for a in range(chi.modulus):
        k = int(table[a])
        if k >= 0:
            buckets[k] += a
    return CycloElement.from_exponents(order, buckets)


def ambient_modulus(chi: DirichletCharacter) -> int:
    return lcm(chi.modulus, chi.order)


def _additive_sum(chi: DirichletCharacter, m: int) -> CycloElement:
    # sum_a e(m a / q) chi(a) in Q(zeta_L)
    q, order = chi.modulus, chi.order
    big = lcm(q, order)
    sq, so = big // q, big // order
    table = chi.exponent_table
    buckets = [0] * big
    for a in range(q):
        k = int(table[a])
        if k >= 0:
            buckets[(m * a * sq + k * so) % big] += 1
    return CycloElement.from_exponents(big, buckets)


@dataclass(frozen=True)
class GaussSumRecord:
    chi: DirichletCharacter
    value: CycloElement
    norm_check: Fraction | None  # tau * conj(tau) when rational

    def to_json(self) -> dict:
        return {"character": self.chi.to_json(), "value": self.value.to_json(),
                "norm": None if self.norm_check is None else
                f"{self.norm_check.numerator}/{self.norm_check.denominator}"}


def gauss_sum(chi: DirichletCharacter) -> GaussSumRecord:
    tau = _additive_sum(chi, 1)
    norm = tau * conjugate(tau)
    return GaussSumRecord(chi, tau, norm.rational_value() if norm.is_rational() else None)


def ramanujan_sum(chi: DirichletCharacter, m: int) -> CycloElement:
    """``c_chi(m) = sum_a e(m a / q) chi(a)`` in Q(zeta_lcm(q, order))."""
    return _additive_sum(chi, m)


# --------------------------------------------------------------------------
# identity checks
# --------------------------------------------------------------------------

@dataclass
class CharacterResiduals:
    name: str
    params: dict
    residuals: list[tuple[DirichletCharacter, CycloElement]]

    @property
    def passed(self) -> bool:
        return all(r.is_zero() for _, r in self.residuals)

    @property
    def witnesses(self) -> list[DirichletCharacter]:
        return [chi for chi, r in self.residuals if not r.is_zero()]


def _check_coprime(n: int, q: int) -> int:
    p, _ = prime_power(q)
    if n % p == 0:
        raise ValueError(f"p = {p} divides n = {n}")
    return p


def shoulder_residual(h: OddFunction, n: int, chi: DirichletCharacter) -> CycloElement:
    lhs = fourier_coeff(h, chi)
    rhs = (eval_char(chi, n) - n) * S_sum(chi.conj()) / chi.modulus
    return lhs - rhs


def verify_shoulder(n: int, q: int, strict: bool = True) -> CharacterResiduals:
    """s(h, chi) == (chi(n) - n) S_q(conj chi) / q for every odd chi mod q."""
    _check_coprime(n, q)
    if q <= 2:
        raise ValueError("q must exceed 2")
    h = h_function(n, q)
    report = CharacterResiduals("shoulder", {"n": n, "q": q},
                                [(chi, shoulder_residual(h, n, chi)) for chi in odd_characters(q)])
    if strict and not report.passed:
        raise IdentityViolation("shoulder", {"n": n, "q": q, "chi": report.witnesses[0].label()})
    return report


class Nonvanishing(NamedTuple):
    ok: bool
    vanishing: list[DirichletCharacter]


def verify_nonvanishing(n: int, q: int) -> Nonvanishing:
    _check_coprime(n, q)
    if n < 2 or q <= 2:
        raise ValueError("requires n >= 2 and q > 2")
    h = h_function(n, q)
    bad = [chi for chi in odd_characters(q) if fourier_coeff(h, chi).is_zero()]
    return Nonvanishing(not bad, bad)


@dataclass
class ReductionReport:
    chi: DirichletCharacter
    chi_star: DirichletCharacter
    n: int
    residuals: dict[str, CycloElement]

    @property
    def passed(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())


def verify_imprimitive_reduction(chi: DirichletCharacter, n: int,
                                 strict: bool = True) -> ReductionReport:
    """Compare chi mod q with the primitive chi* mod d = conductor inducing it."""
    q = chi.modulus
    _check_coprime(n, q)
    d = chi.conductor
    if d == q:
        raise ValueError(f"{chi.label()} is primitive")
    if not chi.is_odd():
        raise ValueError(f"{chi.label()} is even; the reduction identities concern odd characters")
    star = restrict_to_conductor(chi)
    cbar, sbar = chi.conj(), star.conj()
    res = {
        "S_sum": S_sum(cbar) - S_sum(sbar) * Fraction(q, d),
        "floor_sum": floor_sum(n, chi) - floor_sum(n, star),
        "coefficient": (normalized_coeff(h_function(n, q), chi) * totient(q)
                        - normalized_coeff(h_function(n, d), star) * totient(d)),
    }
    report = ReductionReport(chi, star, n, res)
    if strict and not report.passed:
        bad = next(k for k, v in res.items() if not v.is_zero())
        raise IdentityViolation("imprimitive_reduction",
                                {"chi": chi.label(), "n": n, "identity": bad})
    return report


# --------------------------------------------------------------------------
# L(1, chi)
# --------------------------------------------------------------------------

def _require_odd_primitive(chi: DirichletCharacter) -> None:
    if chi.modulus <= 2 or not chi.is_odd() or not chi.is_primitive():
        raise ValueError(f"{chi.label()} must be odd and primitive with q > 2")


def L1_closed_form(chi: DirichletCharacter) -> CycloElement:
    """Algebraic A with L(1, chi) = pi i A, namely tau(chi) S(conj chi) / q**2."""
    _require_odd_primitive(chi)
    tau = gauss_sum(chi).value
    s = lift(S_sum(chi.conj()), tau.modulus)
    a = tau * s / (chi.modulus ** 2)
    if a.is_zero():
        raise IdentityViolation("L1_nonzero", {"chi": chi.label()})
    return a


def L1_from_closed_form(chi: DirichletCharacter, precision_bits: int = 53) -> ComplexApprox:
    """Numeric value of ``pi i A`` for the closed-form factor A."""
    a = embed(L1_closed_form(chi), precision_bits)
    with mpmath.workprec(precision_bits):
        pi = +mpmath.pi
        return ComplexApprox(+(-pi * a.imag), +(pi * a.real), precision_bits)


def character_table(chi: DirichletCharacter) -> np.ndarray:
    """Complex values chi(a) for a = 0..q-1 (zero at non-units)."""
    k = chi.exponent_table.astype(np.float64)
    vals = np.exp(2j * np.pi * k / chi.order)
    vals[chi.exponent_table < 0] = 0
    return vals


def L1_error_bound(chi: DirichletCharacter, terms: int) -> float:
    """Bound on |L(1, chi) - sum_{m<=terms} chi(m)/m| by partial summation.

    Partial sums of a nontrivial character never exceed phi(q)/2 in absolute
    value, so the tail is at most phi(q) / (terms + 1).
    """
    return totient(chi.modulus) / (terms + 1)


def L1_numeric(chi: DirichletCharacter, terms: int = 10**6,
               precision_bits: int = 53) -> ComplexApprox:
    """Truncated series for L(1, chi), accumulated one full period at a time.

    At 53 bits the hot loop runs in :mod:`cyclohodge.kernels`; above that the
    same partial sum is evaluated per residue class through the digamma
    function, ``sum_{k<K} 1/(kq+a) = (psi(a/q + K) - psi(a/q)) / q``.
    """
    _require_odd_primitive(chi)
    q = chi.modulus
    if terms < q:
        raise ValueError("terms must be at least q")
    if precision_bits == 53:
        z = kernels.lseries_partial_sum(character_table(chi), terms)
        return ComplexApprox(mpmath.mpf(z.real), mpmath.mpf(z.imag), 53)
    with mpmath.workprec(precision_bits + 16):
        total = mpmath.mpc(0)
        for a in units(q):
            count = (terms - a) // q + 1
            x = mpmath.mpf(a) / q
            block = (mpmath.digamma(x + count) - mpmath.digamma(x)) / q
            total += mpmath.expjpi(mpmath.mpf(2 * chi.log(a)) / chi.order) * block
    with mpmath.workprec(precision_bits):
        return ComplexApprox(+total.real, +total.imag, precision_bits)


# --------------------------------------------------------------------------
# class numbers of Q(sqrt(-p))
# --------------------------------------------------------------------------

def reduced_forms(disc: int) -> list[tuple[int, int, int]]:
    """Reduced primitive positive definite forms (a, b, c) with b^2 - 4ac = disc < 0."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ValueError("discriminant must be negative and 0 or 1 mod 4")
    forms = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                forms.append((a, b, c))
        a += 1
    return forms


def class_number_bqf(p: int) -> int:
    """Class number of Q(sqrt(-p)), p prime = 3 mod 4, by counting reduced forms."""
    if not is_prime(p) or p % 4 != 3:
        raise ValueError(f"{p} is not a prime congruent to 3 mod 4")
    return len(reduced_forms(-p))


@dataclass(frozen=True)
class ClassIdentityReport:
    p: int
    n: int
    class_number: int
    lhs: Fraction
    rhs: Fraction
    S_legendre: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs and self.S_legendre == -self.p * self.class_number


def verify_class_identity(p: int, n: int, strict: bool = True) -> ClassIdentityReport:
    """sum h(a) (a/p) == (n - (n/p)) h_p and S(legendre) == -p h_p, for p > 3."""
    if p == 3:
        raise ValueError("p = 3 is excluded: Q(sqrt(-3)) has 6 units and S = -1, not -3 h_3")
    hp = class_number_bqf(p)
    if n % p == 0:
        raise ValueError(f"p = {p} divides n = {n}")
    h = h_function(n, p)
    lhs = sum((h(a) * legendre(a, p) for a in range(1, p)), Fraction(0))
    rhs = Fraction((n - legendre(n, p)) * hp)
    s = S_sum(legendre_character(p)).rational_value()
    report = ClassIdentityReport(p, n, hp, lhs, rhs, s)
    if strict and not report.passed:
        raise IdentityViolation("class_identity", {"p": p, "n": n, "lhs": str(lhs),
                                                   "rhs": str(rhs), "S": str(s)})
    return report
