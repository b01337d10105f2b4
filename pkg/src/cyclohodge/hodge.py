"""Superelliptic Jacobians y^q = f(x), deg f = n: CM types, center dimensions
of the Hodge group, simple-factor bounds and the elliptic-product criterion.

Only dimensions are computed.  Each theorem-level prediction is checked
against an exact rank, and a mismatch raises :class:`TheoremViolation`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

from ._nt import divisors, is_prime, prime_power, totient
from .fourier import OddFunction, h_function, units
from .galmod import (ambient_dim, dim_V, max_simple_dim, tower_center_dim, tower_function,
                     translates_rank)


class TheoremViolation(AssertionError):
    def __init__(self, statement: str, witness: dict):
        super().__init__(f"{statement} fails at {witness}")
        self.statement = statement
        self.witness = witness


@dataclass(frozen=True)
class CMTypeRecord:
    q: int
    n: int
    d: int
    n_sigma: dict[int, int] = field(hash=False)

    def h(self) -> OddFunction:
        """``sigma_a -> d/2 - n_sigma(a)``."""
        if self.q == 2:
            return OddFunction(2, {})
        return OddFunction(self.q, {a: Fraction(self.d, 2) - k for a, k in self.n_sigma.items()})


def _check_params(n: int, q: int) -> int:
    p, _ = prime_power(q)
    if n % p == 0:
        raise ValueError(f"p = {p} divides n = {n}")
    return p


def cm_type(n: int, q: int) -> CMTypeRecord:
    """Multiplicities ``n_sigma_a = floor(n a / q)`` of Q(zeta_q) acting on differentials."""
    _check_params(n, q)
    if n < 2:
        raise ValueError("n must be at least 2")
    d = n - 1
    ns = {a: (n * a) // q for a in units(q)}
    for a, k in ns.items():
        if not 0 <= k <= d or k + ns[q - a] != d:
            raise TheoremViolation("CM type pairing", {"n": n, "q": q, "a": a})
    return CMTypeRecord(q, n, d, ns)


def jacobian_dim(n: int, q: int) -> int:
    """Genus of y^q = f(x) with deg f = n and p not dividing n."""
    _check_params(n, q)
    if n < 2 or q < 2:
        raise ValueError("need n >= 2 and q >= 2")
    twice = (n - 1) * (q - 1)
    if twice % 2:
        raise ArithmeticError(f"(n-1)(q-1) = {twice} is odd")
    return twice // 2


def subvariety_bound(p: int, r: int) -> int:
    """Lower bound for the dimension of a simple abelian subvariety of the new part."""
    if not is_prime(p) or r < 1 or p**r <= 2:
        raise ValueError("need a prime power p**r > 2")
    if p == 2:
        if r < 3:
            raise ValueError("the bound for p = 2 needs r >= 3")
        return 2 ** (r - 3)
    return totient((p - 1) * p ** (r - 1))


@dataclass
class CenterReport:
    p: int
    r: int
    n: int
    level_dims: list[int]
    tower_dim: int
    predicted: int
    ambient_dim: int
    exotic_gap: bool
    subvariety_bound: int | None
    orbit_maximum: int | None
    jacobian_dim: int
    assume_large_galois: bool = False
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def _expected_gap(p: int, r: int) -> bool:
    return (p != 2 and r >= 2) or (p == 2 and r >= 3)


def center_report(n: int, p: int, r: int, assume_large_galois: bool = False) -> CenterReport:
    q = p**r
    _check_params(n, q)
    if n < 2 or q <= 2:
        raise ValueError("need n >= 2 and p**r > 2")
    levels = [translates_rank(h_function(n, p**j)) for j in range(1, r + 1)]
    for j, dim in enumerate(levels, start=1):
        if dim != dim_V(p**j):
            raise TheoremViolation("level center dimension = phi(p^j)/2",
                                   {"n": n, "p": p, "j": j, "rank": dim})
    tower = tower_center_dim(tower_function(n, p, r))
    predicted = dim_V(q)
    if tower != predicted:
        raise TheoremViolation("tower center dimension = phi(p^r)/2",
                               {"n": n, "p": p, "r": r, "rank": tower})
    amb = ambient_dim(p, r)
    gap = amb > tower
    if gap != _expected_gap(p, r):
        raise TheoremViolation("exotic class pattern", {"p": p, "r": r, "gap": gap})
    bound = orbit = None
    if p != 2 or r >= 3:
        bound = subvariety_bound(p, r)
        orbit = max_simple_dim(q)
        if bound != orbit:
            raise TheoremViolation("simple-factor bound = orbit maximum",
                                   {"p": p, "r": r, "bound": bound, "orbit": orbit})
    notes = ["center dimension is a lower bound (unconditional)"]
    if assume_large_galois:
        notes.append("user asserts Gal(f) is S_n or A_n: center equals the norm torus of Q(zeta_q)")
    if n < 3 and bound is not None:
        notes.append("simple-factor bound is stated for n >= 3")
    return CenterReport(p, r, n, levels, tower, predicted, amb, gap, bound, orbit,
                        jacobian_dim(n, q), assume_large_galois, notes)


def zero_level_report(n: int) -> CenterReport:
    """Row for q = 2, where there are no odd functions and every dimension is 0."""
    if n % 2 == 0:
        raise ValueError("n must be odd when q = 2")
    return CenterReport(2, 1, n, [0], 0, 0, 0, False, None, None, jacobian_dim(n, 2), False,
                        ["q = 2: no nonzero odd functions"])


# How the objects of the Hodge-theoretic setting are represented here.
SCOPE_GLOSSARY = {
    "Hdg": "dimension-only (center dimension via translate rank)",
    "MT": "dimension-only",
    "hdg": "dimension-only",
    "mt": "dimension-only",
    "c0": "dimension-only (trace image of the center)",
    "U_q": "dimension-only (norm torus; equality with the center checked as Lie algebra dimension)",
    "T_E": "out of scope (group scheme)",
    "delta_q": "out of scope",
    "J^(f,q)": "out of scope (only its CM type n_sigma is computed)",
    "lambda_r": "out of scope",
    "psi_r": "out of scope",
    "phi_r": "out of scope",
    "beta_r": "out of scope",
    "Omega^1(Z)": "out of scope (multiplicities n_sigma only)",
    "f_H": "out of scope",
    "f_H^0": "out of scope",
    "isogeny alpha": "out of scope",
}


ELLIPTIC_EXCEPTIONS = frozenset({6, 8, 12, 24})


def elliptic_divisor_form(d: int) -> bool:
    """d has a divisor that is a prime >= 5, or 9, or 16."""
    return any((k >= 5 and is_prime(k)) or k in (9, 16) for k in divisors(d))


def elliptic_statement_form(d: int) -> bool:
    return d >= 5 and d not in ELLIPTIC_EXCEPTIONS


def elliptic_split_check(d: int) -> bool:
    """True when the Jacobian of y^d = f(x) is provably not isogenous to a product of elliptic curves."""
    if d < 1:
        raise ValueError("d must be positive")
    result = elliptic_divisor_form(d)
    if result != elliptic_statement_form(d):
        raise TheoremViolation("elliptic criterion forms agree", {"d": d})
    return result
