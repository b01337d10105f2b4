"""Small integer helpers (trial division is plenty at the sizes used here)."""

from __future__ import annotations

from functools import lru_cache
from math import gcd


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def factorint(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of ``n >= 1`` as sorted ``(prime, exponent)`` pairs."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
        f += 1 if f == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def totient(n: int) -> int:
    result = n
    for p, _ in factorint(n):
        result = result // p * (p - 1)
    return result


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorint(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**r`` into ``(p, r)``; raises if q is not a prime power."""
    fac = factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    return fac[0]


def primes_up_to(n: int) -> list[int]:
    return [k for k in range(2, n + 1) if is_prime(k)]


def prime_powers_between(lo: int, hi: int) -> list[int]:
    """All prime powers q with lo <= q <= hi, ascending."""
    return [q for q in range(max(lo, 2), hi + 1) if len(factorint(q)) == 1]


def legendre(a: int, p: int) -> int:
    """Legendre symbol via Euler's criterion (odd prime p)."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1
