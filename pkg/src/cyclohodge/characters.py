"""Dirichlet characters modulo a prime power."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from math import gcd

import numpy as np

from ._nt import prime_power
from .exact import CycloElement
from .resgroup import ResidueGroup, build_group


@lru_cache(maxsize=None)
def group_for_modulus(q: int) -> ResidueGroup:
    if q == 1:
        return build_group(2, 0)
    p, r = prime_power(q)
    return build_group(p, r)


@dataclass(frozen=True)
class DirichletCharacter:
    """A character of (Z/qZ)^x given by exponents on the canonical generators.

    With generators ``g_i`` of order ``o_i`` the character sends ``g_i`` to
    ``exp(2 pi i e_i / o_i)``.  Values live in Q(zeta_order).
    """

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        gens = self.group.generators
        if len(self.exponents) != len(gens):
            raise ValueError("one exponent per generator is required")
        object.__setattr__(self, "exponents",
                           tuple(e % o for e, (_, o) in zip(self.exponents, gens)))

    @property
    def group(self) -> ResidueGroup:
        return group_for_modulus(self.modulus)

    @cached_property
    def order(self) -> int:
        o = 1
        for e, (_, go) in zip(self.exponents, self.group.generators):
            t = go // gcd(go, e)
            o = o * t // gcd(o, t)
        return o

    @cached_property
    def exponent_table(self) -> np.ndarray:
        """``table[a]`` = k with chi(a) = zeta_order**k, or -1 where gcd(a, q) > 1."""
        g = self.group
        if not g.generators:
            table = np.array([0 if gcd(a, g.q) == 1 else -1 for a in range(g.q)], dtype=np.int64)
        else:
            weights = np.array([e * self.order // o
                                for e, (_, o) in zip(self.exponents, g.generators)], dtype=np.int64)
            logs = g.dlog_array()
            table = np.where(logs[:, 0] >= 0, (logs @ weights) % self.order, -1)
        table.setflags(write=False)
        return table

    def log(self, a: int) -> int | None:
        k = int(self.exponent_table[a % self.modulus])
        return None if k < 0 else k

    def __call__(self, a: int) -> CycloElement:
        return eval_char(self, a)

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(-e for e in self.exponents))

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    @cached_property
    def conductor(self) -> int:
        return conductor(self)

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def is_odd(self) -> bool:
        return is_odd(self)

    def label(self) -> str:
        return f"chi_{self.modulus}[{','.join(map(str, self.exponents))}]"

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "exponents": list(self.exponents),
                "order": self.order, "conductor": self.conductor,
                "parity": "odd" if self.is_odd() else "even"}


def all_characters(g: ResidueGroup | int) -> list[DirichletCharacter]:
    if isinstance(g, int):
        g = group_for_modulus(g)
    return [DirichletCharacter(g.q, exps)
            for exps in product(*(range(o) for _, o in g.generators))]


def odd_characters(q: int) -> list[DirichletCharacter]:
    return [chi for chi in all_characters(q) if q > 2 and chi.is_odd()]


def eval_char(chi: DirichletCharacter, a: int) -> CycloElement:
    k = chi.log(a)
    if k is None:
        return CycloElement.zero(chi.order)
    return CycloElement.zeta(chi.order, k)


def is_odd(chi: DirichletCharacter) -> bool:
    if chi.modulus <= 2:
        return False
    k = chi.log(chi.modulus - 1)
    return 2 * k == chi.order


def conductor(chi: DirichletCharacter) -> int:
    """Smallest p-power d | q such that chi is trivial on units congruent to 1 mod d."""
    g = chi.group
    table = chi.exponent_table
    for j in range(g.r + 1):
        d = g.p**j
        if all(table[a] == 0 for a in g.elements if a % d == 1 % d):
            return d
    raise AssertionError("unreachable: chi is trivial on {1}")


def character_from_values(q: int, gen_logs: list[tuple[int, int]]) -> DirichletCharacter:
    """Character mod q sending the i-th generator to ``zeta_M ** k`` for ``(k, M) = gen_logs[i]``."""
    g = group_for_modulus(q)
    exps = []
    for (k, m), (_, o) in zip(gen_logs, g.generators):
        if (k * o) % m:
            raise ValueError("prescribed value is not a root of unity of the generator order")
        exps.append(k * o // m)
    return DirichletCharacter(q, tuple(exps))


def restrict_to_conductor(chi: DirichletCharacter) -> DirichletCharacter:
    return restrict(chi, chi.conductor)


def restrict(chi: DirichletCharacter, d: int) -> DirichletCharacter:
    """The character mod d inducing chi (requires conductor | d | q)."""
    if chi.modulus % d or d % chi.conductor:
        raise ValueError(f"chi mod {chi.modulus} (conductor {chi.conductor}) does not factor through {d}")
    h = group_for_modulus(d)
    return character_from_values(d, [(chi.log(gen), chi.order) for gen, _ in h.generators])


def induce(chi_star: DirichletCharacter, q: int) -> DirichletCharacter:
    """Lift a character mod d to mod q (both powers of the same prime)."""
    d = chi_star.modulus
    if q % d:
        raise ValueError(f"{d} does not divide {q}")
    pq, _ = prime_power(q)
    if d > 1 and prime_power(d)[0] != pq:
        raise ValueError("moduli must be powers of the same prime")
    g = group_for_modulus(q)
    return character_from_values(q, [(chi_star.log(gen), chi_star.order) for gen, _ in g.generators])


def legendre_character(p: int) -> DirichletCharacter:
    """The quadratic character mod an odd prime p."""
    g = group_for_modulus(p)
    (_, o), = g.generators
    return DirichletCharacter(p, (o // 2,))


def value_notation(chi: DirichletCharacter, a: int) -> str:
    k = chi.log(a)
    if k is None:
        return "0"
    if k == 0:
        return "1"
    if 2 * k == chi.order:
        return "-1"
    return f"z{chi.order}^{k}"
