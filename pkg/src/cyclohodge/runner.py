"""Sweep orchestration behind the command line.

Every subcommand expands its parameters into independent tasks.  Each task is
a plain function returning ``(checks, rows)``; tasks run inline or in a process
pool, and the results are collected in task order.  The emitted report does not
depend on ``jobs``.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import __version__
from ._nt import is_prime, prime_power, primes_up_to
from .characters import all_characters, eval_char, legendre_character, odd_characters, value_notation
from .exact import CycloElement, conjugate, lift
from .fourier import (IdentityViolation, L1_error_bound, L1_numeric, S_sum, class_number_bqf, gauss_sum,
                      ramanujan_sum, verify_class_identity, verify_imprimitive_reduction,
                      units, verify_nonvanishing, verify_shoulder)
from .galmod import (ambient_dim, dim_V, generates_V, generation_via_characters,
                     random_odd_function, tower_check, tower_function, translates_rank)
from .hodge import SCOPE_GLOSSARY, TheoremViolation, center_report, zero_level_report

FORMATS = ("json", "csv", "text")
L1_TERMS = 10**6
STATUSES = ("pass", "fail", "skipped")


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    r: int | None = None
    n: int | None = None
    q: int | None = None
    p_max: int | None = None
    r_max: int | None = None
    n_max: int | None = None
    odd_only: bool = False
    random_samples: int = 0
    assume_large_galois: bool = False
    format: str = "json"
    jobs: int = 1
    seed: int = 0
    timings: bool = False

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        for name in ("p", "r", "n", "q", "p_max", "r_max", "n_max", "jobs"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be positive")
        if self.random_samples < 0:
            raise ValueError("random_samples must be non-negative")

    def echo(self) -> dict:
        # jobs and timings do not change results, so they stay out of the report
        d = asdict(self)
        d.pop("jobs")
        d.pop("timings")
        return {k: v for k, v in d.items() if v is not None}


@dataclass
class CheckRecord:
    name: str
    params: dict
    status: str
    witness: dict | None = None
    wall_time: float | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(self.status)
        if self.status == "fail" and not self.witness:
            raise ValueError("a failing check needs a witness")


@dataclass
class VerificationReport:
    config: dict
    checks: list[CheckRecord]
    rows: list[dict] = field(default_factory=list)
    version: str = __version__
    glossary: dict | None = None

    @property
    def summary(self) -> dict:
        counts = {s: 0 for s in STATUSES}
        for c in self.checks:
            counts[c.status] += 1
        counts["total"] = len(self.checks)
        return counts

    @property
    def exit_code(self) -> int:
        return 1 if self.summary["fail"] else 0

    def to_json(self) -> dict:
        out = {
            "version": self.version,
            "config": self.config,
            "summary": self.summary,
            "checks": [to_jsonable(asdict(c)) for c in self.checks],
            "rows": to_jsonable(self.rows),
        }
        if self.glossary is not None:
            out["glossary"] = dict(self.glossary)
        return out


def to_jsonable(obj: Any) -> Any:
    """Exact values only: Fractions become ``"a/b"``, field elements ``{modulus, coeffs}``."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, CycloElement):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    return obj


Task = tuple[Callable[..., tuple[list[CheckRecord], list[dict]]], dict]


def _ok(fn: Callable, *args) -> Callable[[], tuple[str, None]]:
    """Wrap a strict verifier (raises on failure) as a check body."""
    def body():
        fn(*args)
        return "pass", None
    return body


def _timed(timings: bool, name: str, params: dict, fn: Callable[[], tuple[str, dict | None]]) -> CheckRecord:
    t0 = time.perf_counter()
    try:
        status, witness = fn()
    except (IdentityViolation, TheoremViolation) as exc:
        status, witness = "fail", dict(exc.witness)
    wall = round(time.perf_counter() - t0, 6) if timings else None
    return CheckRecord(name, params, status, witness, wall)


# --------------------------------------------------------------------------
# tasks
# --------------------------------------------------------------------------

def task_center(n: int, p: int, r: int, assume: bool, timings: bool):
    rows = []
    params = {"p": p, "r": r, "n": n}

    def run():
        if p**r == 2:
            rep = zero_level_report(n)
        else:
            rep = center_report(n, p, r, assume)
        rows.append({"q": p**r, **rep.to_json()})
        return "pass", None

    return [_timed(timings, "center", params, run)], rows


def task_fourier(n: int, q: int, timings: bool):
    checks = []
    checks.append(_timed(timings, "shoulder", {"q": q, "n": n},
                         _ok(verify_shoulder, n, q)))
    if n >= 2:
        def nonvanishing():
            res = verify_nonvanishing(n, q)
            if res.ok:
                return "pass", None
            return "fail", {"vanishing": [chi.label() for chi in res.vanishing]}
        checks.append(_timed(timings, "nonvanishing", {"q": q, "n": n}, nonvanishing))
    for chi in odd_characters(q):
        if chi.is_primitive():
            continue
        checks.append(_timed(timings, "imprimitive_reduction",
                             {"q": q, "n": n, "chi": chi.label(), "conductor": chi.conductor},
                             _ok(verify_imprimitive_reduction, chi, n)))
    return checks, []


def task_tower(n: int, p: int, r: int, samples: int, seed: int, timings: bool):
    checks = []
    t = tower_function(n, p, r)
    q = p**r
    ranks = [translates_rank(h) for h in t.levels]
    tower_dim = ranks[-1]
    amb = ambient_dim(p, r)
    checks.append(_timed(timings, "tower_trace", {"p": p, "r": r, "n": n},
                         _ok(tower_check, t)))

    def dims():
        bad = [j for j, rk in enumerate(ranks, 1) if rk != dim_V(p**j)]
        if bad:
            return "fail", {"levels": bad, "ranks": ranks}
        return "pass", None
    checks.append(_timed(timings, "level_dims", {"p": p, "r": r, "n": n}, dims))
    if q > 2 and samples:
        rng = random.Random(f"{seed}:{q}")

        def equivalence():
            for i in range(samples):
                f = random_odd_function(q, rng)
                a, b = generates_V(f), generation_via_characters(f)[0]
                if a != b:
                    return "fail", {"sample": i, "function": f.to_json()}
            return "pass", None
        checks.append(_timed(timings, "criterion_equivalence",
                             {"q": q, "samples": samples, "seed": seed}, equivalence))
    row = {
        "p": p, "r": r, "n": n,
        "levels": [{"j": j, "q": p**j, "dim_V": dim_V(p**j)} for j in range(1, r + 1)],
        "ranks": ranks, "tower_dim": tower_dim, "ambient_dim": amb,
        "exotic_gap": amb > tower_dim,
    }
    return checks, [row]


def task_classnum(p: int, ns: list[int], timings: bool):
    checks = []
    if p == 3:
        checks.append(CheckRecord("class_identity", {"p": 3}, "skipped",
                                  {"reason": "Q(sqrt(-3)) has 6 units; S = -1 != -3 h_3"}))
        return checks, [{"p": 3, "class_number": class_number_bqf(3),
                         "S_legendre": S_sum(legendre_character(3)).rational_value()}]
    hp = class_number_bqf(p)
    for n in ns:
        if n % p == 0:
            continue
        checks.append(_timed(timings, "class_identity", {"p": p, "n": n},
                             _ok(verify_class_identity, p, n)))
    chi = legendre_character(p)
    s = S_sum(chi).rational_value()
    formula = math.pi * hp / math.sqrt(p)
    series = L1_numeric(chi, L1_TERMS).real
    bound = L1_error_bound(chi, L1_TERMS)

    def l_value():
        if abs(float(series) - formula) > bound:
            return "fail", {"p": p, "series": float(series), "formula": formula}
        return "pass", None

    checks.append(_timed(timings, "L1_class_number_formula", {"p": p, "terms": L1_TERMS}, l_value))
    row = {"p": p, "class_number": hp, "S_legendre": s,
           "numeric_L1": {"series": float(series), "class_number_formula": formula,
                          "observed_error": abs(float(series) - formula),
                          "error_bound": bound, "terms": L1_TERMS, "precision_bits": 53}}
    return checks, [row]


def task_gauss(q: int, timings: bool):
    checks, rows = [], []
    for chi in all_characters(q):
        rec = gauss_sum(chi)
        rows.append({"character": chi.label(), "order": chi.order, "conductor": chi.conductor,
                     "parity": "odd" if chi.is_odd() else "even",
                     "primitive": chi.is_primitive(), "value": rec.value, "norm": rec.norm_check})
        if not chi.is_primitive() or q <= 2:
            continue

        def norm(rec=rec):
            if rec.norm_check != q:
                return "fail", {"character": chi.label(), "norm": str(rec.norm_check)}
            return "pass", None

        def conj_relation(chi=chi, rec=rec):
            sign = -1 if chi.is_odd() else 1
            if gauss_sum(chi.conj()).value != sign * conjugate(rec.value):
                return "fail", {"character": chi.label()}
            return "pass", None

        def ramanujan(chi=chi):
            tau_bar = gauss_sum(chi.conj()).value
            for m in range(q):
                if ramanujan_sum(chi.conj(), m) != lift(eval_char(chi, m), tau_bar.modulus) * tau_bar:
                    return "fail", {"character": chi.label(), "m": m}
            return "pass", None

        checks.append(_timed(timings, "gauss_norm", {"character": chi.label()}, norm))
        checks.append(_timed(timings, "gauss_conjugate", {"character": chi.label()}, conj_relation))
        checks.append(_timed(timings, "ramanujan_factorisation", {"character": chi.label()}, ramanujan))
    return checks, rows


def task_characters(q: int, odd_only: bool):
    rows = []
    for chi in all_characters(q):
        if odd_only and not chi.is_odd():
            continue
        rows.append({"character": chi.label(), "order": chi.order, "conductor": chi.conductor,
                     "parity": "odd" if chi.is_odd() else "even",
                     "values": {str(a): value_notation(chi, a) for a in units(q)}})
    return [], rows


# --------------------------------------------------------------------------
# planning and execution
# --------------------------------------------------------------------------

def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ValueError(f"{cfg.command} needs {', '.join('--' + m.replace('_', '-') for m in missing)}")


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def plan(cfg: RunConfig) -> list[Task]:
    c = cfg.command
    if c == "center":
        _require(cfg, "p", "r", "n")
        _require_prime(cfg.p)
        if cfg.p**cfg.r <= 2:
            raise ValueError("center needs p**r > 2")
        if cfg.n < 2 or cfg.n % cfg.p == 0:
            raise ValueError("center needs n >= 2 with p not dividing n")
        return [(task_center, dict(n=cfg.n, p=cfg.p, r=cfg.r, assume=cfg.assume_large_galois,
                                   timings=cfg.timings))]
    if c == "table":
        _require(cfg, "p_max", "r_max", "n_max")
        return [(task_center, dict(n=n, p=p, r=r, assume=cfg.assume_large_galois, timings=cfg.timings))
                for p in primes_up_to(cfg.p_max)
                for r in range(1, cfg.r_max + 1)
                for n in range(2, cfg.n_max + 1) if n % p]
    if c == "verify-fourier":
        _require(cfg, "p", "r", "n_max")
        _require_prime(cfg.p)
        q = cfg.p**cfg.r
        if q <= 2:
            raise ValueError("verify-fourier needs p**r > 2")
        return [(task_fourier, dict(n=n, q=q, timings=cfg.timings))
                for n in range(1, cfg.n_max + 1) if n % cfg.p]
    if c == "verify-tower":
        _require(cfg, "p", "r", "n")
        _require_prime(cfg.p)
        if cfg.n < 2 or cfg.n % cfg.p == 0:
            raise ValueError("verify-tower needs n >= 2 with p not dividing n")
        return [(task_tower, dict(n=cfg.n, p=cfg.p, r=cfg.r, samples=cfg.random_samples,
                                  seed=cfg.seed, timings=cfg.timings))]
    if c == "classnum":
        _require(cfg, "p_max")
        ns = [cfg.n] if cfg.n is not None else list(range(1, 21))
        return [(task_classnum, dict(p=p, ns=ns, timings=cfg.timings))
                for p in primes_up_to(cfg.p_max) if p % 4 == 3]
    if c == "gauss":
        _require(cfg, "q")
        prime_power(cfg.q)
        return [(task_gauss, dict(q=cfg.q, timings=cfg.timings))]
    if c == "characters":
        _require(cfg, "q")
        prime_power(cfg.q)
        return [(task_characters, dict(q=cfg.q, odd_only=cfg.odd_only))]
    raise ValueError(f"unknown command {c!r}")


def _call(task: Task):
    fn, kwargs = task
    return fn(**kwargs)


def run(cfg: RunConfig) -> VerificationReport:
    tasks = plan(cfg)
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_call, tasks))
    else:
        results = [_call(t) for t in tasks]
    checks: list[CheckRecord] = []
    rows: list[dict] = []
    for cs, rs in results:
        checks.extend(cs)
        rows.extend(rs)
    glossary = SCOPE_GLOSSARY if cfg.command in ("center", "table") else None
    return VerificationReport(cfg.echo(), checks, rows, glossary=glossary)
