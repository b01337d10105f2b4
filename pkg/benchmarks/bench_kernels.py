"""Compare the numba and numpy backends of the numeric kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--terms 1000000]

Reports the best-of-N wall time per kernel and backend, plus a full
generation sweep (every q = p^r <= 128, 2 <= n <= 40) under each backend.
"""

from __future__ import annotations

import argparse
import time

from cyclohodge import kernels
from cyclohodge._nt import prime_power, prime_powers_between, totient
from cyclohodge.characters import legendre_character, odd_characters
from cyclohodge.fourier import character_table, h_function
from cyclohodge.galmod import half_translate_matrix, translates_rank


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def generation_sweep() -> int:
    count = 0
    for q in prime_powers_between(3, 128):
        p, _ = prime_power(q)
        for n in range(2, 41):
            if n % p:
                assert translates_rank(h_function(n, q)) == totient(q) // 2
                count += 1
    return count


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--terms", type=int, default=10**6)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if kernels.NUMBA_AVAILABLE else [])
    _, block125 = half_translate_matrix(h_function(2, 125))
    _, block128 = half_translate_matrix(h_function(3, 128))
    chi = max(odd_characters(25), key=lambda c: c.order)
    cases = [
        ("rank_mod_p   50x50 (q=125)", lambda: kernels.rank_mod_p(block125)),
        ("rank_mod_p   32x32 (q=128)", lambda: kernels.rank_mod_p(block128)),
        (f"lseries      q=163, {args.terms} terms",
         lambda: kernels.lseries_partial_sum(character_table(legendre_character(163)), args.terms)),
        (f"lseries      q=25 order 20, {args.terms} terms",
         lambda: kernels.lseries_partial_sum(character_table(chi), args.terms)),
    ]

    print(f"{'kernel':<40}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for label, fn in cases:
        row = []
        for b in backends:
            with kernels.use_backend(b):
                fn()  # warm-up (JIT compilation for numba)
                row.append(best_of(fn, args.repeat))
        speed = f"{row[0] / row[-1]:>9.1f}x" if len(row) > 1 else ""
        print(f"{label:<40}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row) + speed)

    sweep = []
    for b in backends:
        with kernels.use_backend(b):
            t0 = time.perf_counter()
            n = generation_sweep()
            sweep.append(time.perf_counter() - t0)
    speed = f"{sweep[0] / sweep[-1]:>9.1f}x" if len(sweep) > 1 else ""
    print(f"{f'generation sweep ({n} ranks)':<40}" + "".join(f"{t:>11.2f}s" for t in sweep) + speed)

    ranks = set()
    for b in backends:
        with kernels.use_backend(b):
            ranks.add((kernels.rank_mod_p(block125), kernels.rank_mod_p(block128)))
    assert len(ranks) == 1, "backends disagree on ranks"


if __name__ == "__main__":
    main()
