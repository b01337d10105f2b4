"""Rank of the Q[(Z/qZ)^x]-module spanned by the translates of an odd function."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import kernels
from ._nt import is_prime, totient
from .characters import DirichletCharacter, odd_characters
from .exact import CycloElement
from .fourier import IdentityViolation, OddFunction, fourier_coeff, h_function, units
from .resgroup import build_group, subgroup_Gj


@dataclass(frozen=True)
class TranslateMatrix:
    """``entries[i][j] = h(s_i^{-1} sigma_j)`` over the sorted units of q."""

    q: int
    elements: tuple[int, ...]
    entries: tuple[tuple[Fraction, ...], ...]


def translate_matrix(h: OddFunction) -> TranslateMatrix:
    q = h.q
    elems = tuple(units(q)) if q > 2 else (1,)
    rows = []
    for s in elems:
        s_inv = pow(s, -1, q)
        rows.append(tuple(h(s_inv * sigma) for sigma in elems))
    return TranslateMatrix(q, elems, tuple(rows))


def half_translate_matrix(h: OddFunction) -> tuple[int, np.ndarray]:
    """Integer block of the translate matrix on the half-system a < q/2.

    Rows and columns indexed by -a are negatives of those indexed by a, so
    this block has the same rank as the full matrix.  Returns the common
    denominator D and ``D * block`` as an int64 array.
    """
    q = h.q
    if q <= 2:
        return 1, np.zeros((0, 0), dtype=np.int64)
    den, ints = h.integer_values()
    table = np.zeros(q, dtype=np.int64)
    for a, v in ints.items():
        table[a] = v
    half = np.array([a for a in units(q) if 2 * a < q], dtype=np.int64)
    inv = np.array([pow(int(s), -1, q) for s in half], dtype=np.int64)
    return den, table[(inv[:, None] * half[None, :]) % q]


def bareiss_rank(rows) -> int:
    """Exact rank of an integer matrix by fraction-free (Bareiss) elimination."""
    a = [[int(x) for x in row] for row in rows]
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    prev = 1
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        prow = a[rank]
        for i in range(rank + 1, nrows):
            row = a[i]
            f = row[col]
            for k in range(col + 1, ncols):
                row[k] = (p * row[k] - f * prow[k]) // prev
            row[col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def naive_rank(rows) -> int:
    """Rank by textbook Gaussian elimination over Fractions (reference oracle)."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, nrows):
            if a[i][col] != 0:
                f = a[i][col] / a[rank][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def translates_rank(h: OddFunction, method: str = "auto") -> int:
    """Q-dimension of the submodule generated by h.

    ``auto`` first ranks the half-system block modulo a 31-bit prime; that is
    a lower bound for the rational rank, so when it reaches the block size the
    answer is certified.  Otherwise (or with ``method="bareiss"``) Bareiss
    elimination decides exactly.
    """
    _, block = half_translate_matrix(h)
    if block.size == 0:
        return 0
    if method == "auto":
        r = kernels.rank_mod_p(block)
        if r == min(block.shape):
            return r
    elif method != "bareiss":
        raise ValueError(f"unknown method {method!r}")
    return bareiss_rank(block.tolist())


def dim_V(q: int) -> int:
    """Dimension of the space of Q-valued odd functions on (Z/qZ)^x."""
    return 0 if q <= 2 else totient(q) // 2


def generates_V(h: OddFunction) -> bool:
    return translates_rank(h) == dim_V(h.q)


def generation_via_characters(h: OddFunction) -> tuple[bool, list[tuple[DirichletCharacter, CycloElement]]]:
    """All odd-character coefficients ``<h, chi>`` and whether none vanishes."""
    if h.q <= 2:
        raise ValueError("q must exceed 2")
    phi = totient(h.q)
    coeffs = [(chi, fourier_coeff(h, chi) / phi) for chi in odd_characters(h.q)]
    return all(not c.is_zero() for _, c in coeffs), coeffs


def random_odd_function(q: int, rng: random.Random, low: int = -10, high: int = 10) -> OddFunction:
    return OddFunction.from_half(q, {a: rng.randint(low, high) for a in units(q) if 2 * a < q})


# --------------------------------------------------------------------------
# cyclotomic towers
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TowerFunction:
    p: int
    r: int
    n: int
    levels: tuple[OddFunction, ...]  # levels[j - 1] is h_j mod p**j


def tower_function(n: int, p: int, r: int) -> TowerFunction:
    if not is_prime(p) or r < 1:
        raise ValueError("need a prime p and r >= 1")
    return TowerFunction(p, r, n, tuple(h_function(n, p**j) for j in range(1, r + 1)))


@dataclass
class TowerCheck:
    p: int
    r: int
    n: int
    checked: int
    failures: list[tuple[int, int]]

    @property
    def passed(self) -> bool:
        return not self.failures


def tower_check(t: TowerFunction, strict: bool = True) -> TowerCheck:
    """``h_j(a mod p^j) == sum_{b in G_j} h_r(ab)`` for every j < r and unit a."""
    q = t.p**t.r
    group = build_group(t.p, t.r)
    top = t.levels[-1]
    failures = []
    checked = 0
    for j in range(1, t.r):
        hj = t.levels[j - 1]
        gj = subgroup_Gj(group, j)
        for a in group.elements:
            total = sum((top(a * b % q) for b in gj), Fraction(0))
            checked += 1
            if hj(a % t.p**j) != total:
                failures.append((j, a))
    report = TowerCheck(t.p, t.r, t.n, checked, failures)
    if strict and failures:
        j, a = failures[0]
        raise IdentityViolation("tower_trace", {"p": t.p, "r": t.r, "n": t.n, "j": j, "a": a})
    return report


def ambient_dim(p: int, r: int) -> int:
    return sum(dim_V(p**j) for j in range(1, r + 1))


def tower_center_dim(t: TowerFunction) -> int:
    """Dimension of the trace-compatible part of the tower; equals the top-level rank."""
    tower_check(t)
    return translates_rank(t.levels[-1])


def max_simple_dim(q: int) -> int:
    """Largest phi(order(chi)) over odd characters chi mod q (character-orbit maximum)."""
    if q <= 2:
        raise ValueError("q must exceed 2")
    return max(totient(chi.order) for chi in odd_characters(q))
