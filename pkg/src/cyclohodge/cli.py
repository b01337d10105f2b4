"""Command line interface: ``cyclohodge <subcommand> ...``.

Exit status is 0 when every check passes, 1 when any check fails (the report
carries the witness) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .exact import CycloElement
from .runner import FORMATS, RunConfig, VerificationReport, run, to_jsonable


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # subcommand copies use SUPPRESS so flags given before the subcommand survive
    def d(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=FORMATS, default=d("json"))
    parser.add_argument("--out", metavar="PATH", default=d(None))
    parser.add_argument("--jobs", type=int, metavar="N", default=d(1))
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--timings", action="store_true", default=d(False),
                        help="record wall times (makes output non-reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclohodge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        _global_flags(sp, suppress=True)
        return sp

    sp = add("center", "center dimension report for y^(p^r) = f(x), deg f = n")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--assume-large-galois", action="store_true",
                    help="assert Gal(f) is S_n or A_n (recorded, not checked)")

    sp = add("table", "bulk table of center dimensions, bounds and exotic gaps")
    sp.add_argument("--p-max", type=int, required=True)
    sp.add_argument("--r-max", type=int, required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--assume-large-galois", action="store_true")

    sp = add("verify-fourier", "coefficient identity, nonvanishing and imprimitive reduction sweeps")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--n-max", type=int, required=True)

    sp = add("verify-tower", "trace relations and dimensions along Q(zeta_p) < ... < Q(zeta_p^r)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--random-samples", type=int, default=0,
                    help="also compare the rank and character criteria on seeded random odd functions")

    sp = add("classnum", "class numbers of Q(sqrt(-p)) and the weighted Legendre sums")
    sp.add_argument("--p-max", type=int, required=True)
    sp.add_argument("--n", type=int)

    sp = add("gauss", "exact Gauss sums with norm checks")
    sp.add_argument("--q", type=int, required=True)

    sp = add("characters", "character table mod q")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--odd-only", action="store_true")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items() if k not in ("out",)}
    return RunConfig(**fields)


def _flatten(row: dict, text: bool = False) -> dict:
    out = {}
    for k, v in row.items():
        if text and isinstance(v, CycloElement):
            out[k] = str(v)
            continue
        v = to_jsonable(v)
        if isinstance(v, dict) and k == "values":
            out.update({f"a={a}": x for a, x in v.items()})
        elif isinstance(v, (dict, list)):
            out[k] = json.dumps(v, separators=(",", ":"))
        else:
            out[k] = v
    return out


def render(report: VerificationReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_json(), indent=2) + "\n"
    if fmt == "csv":
        data = report.to_json()
        records = [_flatten(r) for r in report.rows] or [_flatten(c) for c in data["checks"]]
        buf = io.StringIO()
        if records:
            cols = list(dict.fromkeys(k for r in records for k in r))
            writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            writer.writeheader()
            writer.writerows(records)
        return buf.getvalue()
    lines = []
    s = report.summary
    lines.append(f"cyclohodge {report.version}  pass={s['pass']} fail={s['fail']} "
                 f"skipped={s['skipped']} total={s['total']}")
    for c in report.to_json()["checks"]:
        params = " ".join(f"{k}={v}" for k, v in c["params"].items())
        line = f"{c['status']:>7}  {c['name']}  {params}"
        if c["witness"]:
            line += f"  witness={json.dumps(c['witness'])}"
        lines.append(line)
    for r in report.rows:
        lines.append("  ".join(f"{k}={v}" for k, v in _flatten(r, text=True).items()))
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        report = run(cfg)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"cyclohodge: error: {exc}", file=sys.stderr)
        return 2
    text = render(report, cfg.format)
    if ns.out:
        Path(ns.out).write_text(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
