"""The unit group (Z/p^r Z)^x with canonical generators and discrete logs."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd

import numpy as np

from ._nt import is_prime, totient


@dataclass(frozen=True)
class ResidueGroup:
    """Units modulo ``q = p**r``.

    ``generators`` is a tuple of ``(residue, order)`` pairs; every unit is
    uniquely ``prod g_i ** e_i`` with ``0 <= e_i < order_i``, and ``dlog``
    maps the unit to that exponent vector.  For q = 1 (used only for the
    trivial character mod 1) the group is ``{0}``.
    """

    p: int
    r: int
    q: int
    elements: tuple[int, ...]
    generators: tuple[tuple[int, int], ...]
    dlog_table: dict = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def exponent(self) -> int:
        """Least common multiple of the generator orders."""
        e = 1
        for _, o in self.generators:
            e = e * o // gcd(e, o)
        return e

    def dlog(self, a: int) -> tuple[int, ...]:
        a %= self.q
        try:
            return self.dlog_table[a]
        except KeyError:
            raise ValueError(f"{a} is not a unit modulo {self.q}") from None

    def from_exponents(self, exps) -> int:
        a = 1 % self.q
        for (g, o), e in zip(self.generators, exps):
            a = a * pow(g, e % o, self.q) % self.q
        return a

    def inverse(self, a: int) -> int:
        return pow(a, -1, self.q) if self.q > 1 else 0

    def dlog_array(self) -> np.ndarray:
        """``(q, ngens)`` int array of discrete logs; rows of non-units are -1."""
        return _dlog_array(self)


@lru_cache(maxsize=None)
def _dlog_array(g: ResidueGroup) -> np.ndarray:
    arr = np.full((g.q, len(g.generators)), -1, dtype=np.int64)
    for a, e in g.dlog_table.items():
        arr[a] = e
    arr.setflags(write=False)
    return arr


def multiplicative_order(a: int, q: int) -> int:
    if gcd(a, q) != 1:
        raise ValueError(f"{a} is not a unit modulo {q}")
    k, x = 1, a % q
    while x != 1 % q:
        x = x * a % q
        k += 1
    return k


def primitive_root(p: int, r: int = 1) -> int:
    """Smallest primitive root mod p, bumped by p if it fails mod p**2 (odd p)."""
    if p == 2 or not is_prime(p):
        raise ValueError("primitive roots are only searched for odd primes")
    g = next(g for g in range(2, p + 1) if multiplicative_order(g, p) == p - 1)
    if r >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@lru_cache(maxsize=None)
def build_group(p: int, r: int) -> ResidueGroup:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if r < 0:
        raise ValueError("r must be non-negative")
    q = p**r
    if q == 1:
        gens: tuple[tuple[int, int], ...] = ()
    elif p == 2:
        if r == 1:
            gens = ()
        elif r == 2:
            gens = ((3, 2),)
        else:
            gens = ((q - 1, 2), (5, 2 ** (r - 2)))
    else:
        gens = ((primitive_root(p, r), totient(q)),)

    table = {}
    for exps in product(*(range(o) for _, o in gens)):
        a = 1 % q
        for (g, _), e in zip(gens, exps):
            a = a * pow(g, e, q) % q
        if a in table:
            raise AssertionError(f"generators of ({q}) are not independent")
        table[a] = tuple(exps)
    elements = tuple(sorted(table))
    expected = (0,) if q == 1 else tuple(a for a in range(1, q) if a % p)
    if elements != expected:
        raise AssertionError(f"generators do not span the units mod {q}")
    return ResidueGroup(p, r, q, elements, gens, table)


def subgroup_Gj(g: ResidueGroup, j: int) -> list[int]:
    """Units congruent to 1 modulo ``p**j``: the Galois group of Q(zeta_q)/Q(zeta_{p^j})."""
    if not 1 <= j <= g.r:
        raise ValueError(f"j must lie in [1, {g.r}]")
    d = g.p**j
    return [a for a in g.elements if a % d == 1 % d]


def dlog(g: ResidueGroup, a: int) -> tuple[int, ...]:
    return g.dlog(a)
