"""Numeric hot loops, each with a numba version and a pure-numpy version.

The backend is picked once from ``CYCLOHODGE_BACKEND`` (``numba`` or
``numpy``; default ``numba`` when it imports) and can be switched at runtime
with :func:`set_backend` / :func:`use_backend`.  Both backends must return
identical integers for :func:`rank_mod_p`; for :func:`lseries_partial_sum`
they agree to rounding.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

import numpy as np

try:
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

BACKEND_ENV = "CYCLOHODGE_BACKEND"
RANK_PRIME = 2_147_483_647  # 2**31 - 1; products of residues fit in int64

_backend = os.environ.get(BACKEND_ENV, "numba" if NUMBA_AVAILABLE else "numpy").lower()
if _backend not in ("numba", "numpy"):
    raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {_backend!r}")
if _backend == "numba" and not NUMBA_AVAILABLE:
    _backend = "numpy"


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    _backend = name


@contextmanager
def use_backend(name: str):
    old = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(old)


# --------------------------------------------------------------------------
# rank over F_p
# --------------------------------------------------------------------------

def _rank_mod_p_numpy(a: np.ndarray, prime: int) -> int:
    a = np.array(a, dtype=np.int64) % prime
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if len(nz) == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), prime - 2, prime)
        a[rank] = (a[rank] * inv) % prime
        below = a[rank + 1:, col].copy()
        rows = np.nonzero(below)[0] + rank + 1
        if len(rows):
            a[rows] = (a[rows] - np.outer(a[rows, col], a[rank]) % prime) % prime
        rank += 1
    return rank


def _rank_mod_p_loop(a, prime):
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for i in range(rank, nrows):
            if a[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(ncols):
                t = a[rank, k]
                a[rank, k] = a[piv, k]
                a[piv, k] = t
        # modular inverse by square-and-multiply (Fermat)
        inv = 1
        base = a[rank, col]
        e = prime - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % prime
            base = (base * base) % prime
            e >>= 1
        for k in range(col, ncols):
            a[rank, k] = (a[rank, k] * inv) % prime
        for i in range(rank + 1, nrows):
            f = a[i, col]
            if f != 0:
                for k in range(col, ncols):
                    a[i, k] = (a[i, k] - f * a[rank, k]) % prime
        rank += 1
    return rank


if NUMBA_AVAILABLE:
    _rank_mod_p_numba = njit(cache=True)(_rank_mod_p_loop)


def rank_mod_p(a: np.ndarray, prime: int = RANK_PRIME) -> int:
    """Rank of an integer matrix reduced modulo ``prime`` (< 2**31)."""
    if a.size == 0:
        return 0
    if _backend == "numba":
        return int(_rank_mod_p_numba(np.array(a, dtype=np.int64) % prime, prime))
    return _rank_mod_p_numpy(a, prime)


# --------------------------------------------------------------------------
# periodic L-series partial sums
# --------------------------------------------------------------------------

def _lseries_numpy(vals: np.ndarray, terms: int, chunk: int = 1 << 14):
    q = len(vals)
    full = terms // q
    period_sums = np.empty(full, dtype=np.complex128)
    for start in range(0, full, chunk):
        stop = min(full, start + chunk)
        k = np.arange(start, stop, dtype=np.float64)[:, None]
        a = np.arange(1, q + 1, dtype=np.float64)[None, :]
        w = vals[np.arange(1, q + 1) % q][None, :]
        period_sums[start:stop] = (w / (k * q + a)).sum(axis=1)
    total = period_sums[::-1].sum() if full else 0j
    for m in range(full * q + 1, terms + 1):
        total += vals[m % q] / m
    return complex(total)


def _lseries_loop(vals_re, vals_im, terms):
    q = vals_re.shape[0]
    full = terms // q
    sre = 0.0
    sim = 0.0
    # smallest contributions first
    for k in range(full - 1, -1, -1):
        pre = 0.0
        pim = 0.0
        for a in range(1, q + 1):
            inv = 1.0 / (k * q + a)
            pre += vals_re[a % q] * inv
            pim += vals_im[a % q] * inv
        sre += pre
        sim += pim
    for m in range(full * q + 1, terms + 1):
        sre += vals_re[m % q] / m
        sim += vals_im[m % q] / m
    return sre, sim


if NUMBA_AVAILABLE:
    _lseries_numba = njit(cache=True)(_lseries_loop)


def lseries_partial_sum(vals: np.ndarray, terms: int) -> complex:
    """``sum_{m=1}^{terms} vals[m % q] / m`` summed period by period.

    ``vals`` is the complex value table of a q-periodic function; with mean
    zero over a period each full-period block is O(q / k**2).
    """
    vals = np.asarray(vals, dtype=np.complex128)
    if _backend == "numba":
        re, im = _lseries_numba(np.ascontiguousarray(vals.real), np.ascontiguousarray(vals.imag), terms)
        return complex(re, im)
    return _lseries_numpy(vals, terms)
