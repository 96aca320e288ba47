"""Command line: ``mothergraph {build,resist,bound,verify,scaling}``.

Vertex sets are given as linear-position ranges: ``5`` (one position),
``0:4`` (half-open), ``16:`` (to the end of the level), comma-separated.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import electric, mothercuts, verify
from .schreier import (
    DEFAULT_CAP,
    CapExceeded,
    build_from_criterion,
    build_projected,
    from_json,
    to_dot,
    to_json,
)
from .words import DigitWord, TreeShape

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INFINITE = 3
EXIT_CAP = 4


def rational(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if value is None:
        return ""
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return repr(float(value))


def parse_ranges(text: str, size: int) -> set:
    out = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            lo, hi = part.split(":", 1)
            lo = int(lo) if lo else 0
            hi = int(hi) if hi else size
            out.update(range(lo, min(hi, size)))
        else:
            p = int(part)
            if not 0 <= p < size:
                raise ValueError(f"position {p} outside [0, {size})")
            out.add(p)
    return out


def _shape(args) -> TreeShape:
    return verify.parse_shape(args.m, args.m_list)


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _network(args):
    if getattr(args, "graph", None):
        return from_json(json.loads(Path(args.graph).read_text(encoding="utf-8")))
    shape = _shape(args)
    if getattr(args, "full", False):
        return build_from_criterion(args.d, shape, args.n, cap=args.cap)
    return build_projected(args.d, shape, args.n)


def cmd_build(args) -> int:
    net = _network(args)
    _write(args.out, json.dumps(to_json(net), indent=1) + "\n")
    if args.dot:
        Path(args.dot).write_text(to_dot(net), encoding="utf-8")
    if args.out not in (None, "-"):
        print(f"vertices={len(net.vertices)} edges={len(net.edges)}")
    return 0


def cmd_resist(args) -> int:
    net = _network(args)
    if all(isinstance(v, DigitWord) for v in net.vertices):
        pos = net.positions
        size = 1 << net.n if net.n else max(pos.values()) + 1
    else:
        pos = net.index
        size = len(net.vertices)
    a_pos, b_pos = parse_ranges(args.A, size), parse_ranges(args.B, size)
    A = [v for v in net.vertices if pos[v] in a_pos]
    B = [v for v in net.vertices if pos[v] in b_pos]
    mode = args.mode or electric.default_mode(net)
    try:
        volt = electric.equilibrium_voltage(net, A, B, mode)
    except electric.Disconnected:
        _write(args.out, json.dumps({"res": "inf"}) + "\n")
        return EXIT_INFINITE
    payload = electric.result_json(volt.resistance)
    if not volt.exact:
        payload["residual"] = volt.residual
    _write(args.out, json.dumps(payload) + "\n")
    return 0


def _window_closed(args) -> bool:
    if args.window == "auto":
        return args.d == 0
    return args.window == "closed"


def cutset_table(report, shape, d) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pos", "size", "conductance", "asymptotic", "ratio", "contribution"])
    for row in report.rows:
        asym = mothercuts.asymptotic_conductance(row.id, shape, d) if d in (1, 2) and row.id >= 2 else None
        ratio = float(row.conductance) / asym if asym else None
        w.writerow([row.id, row.size, rational(row.conductance), rational(asym), rational(ratio),
                    rational(row.contribution)])
    return buf.getvalue()


def cmd_bound(args) -> int:
    shape = _shape(args)
    mode = args.mode or ("exact" if (1 << args.n) <= electric.EXACT_LIMIT else "float")
    report = mothercuts.theorem_bound(args.d, shape, args.s, args.t, args.n, mode=mode,
                                      closed=_window_closed(args), certify=args.certify)
    if args.out:
        Path(args.out).write_text(report.dumps(), encoding="utf-8")
    if args.csv:
        Path(args.csv).write_text(cutset_table(report, shape, args.d), encoding="utf-8")
    res = report.resistance
    print(f"bound={rational(report.bound)} res={rational(res)} ratio={float(res) / float(report.bound):.6g}")
    if float(report.bound) > float(res) * (1 + 1e-9):
        print("bound exceeds resistance", file=sys.stderr)
        return EXIT_FAIL
    return 0


def cmd_verify(args) -> int:
    shape = _shape(args)
    results = []
    d_values = [args.d] if args.d is not None else [0, 1, 2]
    n_values = range(1, args.n + 1)
    suite = args.suite
    if suite in ("action", "all"):
        results.append(verify.action_suite(d_values, [shape], n_values))
    if suite in ("lemma", "all"):
        results.append(verify.lemma_suite(d_values, [shape], n_values, project=not shape.is_binary))
    if suite in ("weights", "all"):
        results.append(verify.weights_suite(d_values, [shape], n_values, project=not shape.is_binary))
    if suite in ("wnw", "all"):
        results.append(verify.wnw_soundness_suite(args.trials, args.seed))
        results.append(verify.wnw_optimal_suite(max(1, args.trials // 10), args.seed, mode="exact"))
        results.append(verify.wnw_optimal_suite(max(1, args.trials // 10), args.seed, max_vertices=400,
                                                mode="float"))
    for r in results:
        print(r.line())
        for note in r.notes if args.verbose else ():
            print("  " + note)
        for f in r.failures[:10]:
            print("  counterexample:", f)
    return 0 if all(r.ok for r in results) else EXIT_FAIL


def _scaling_row(job):
    d, shape, s, t, offset, mode, closed = job
    return mothercuts.scaling_rows(d, shape, s, [t], offset, mode, True, closed)[0]


def cmd_scaling(args) -> int:
    shape = _shape(args)
    mode = args.mode or "float"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "bound", "res", "bound_per_step", "bound_per_log", "increment"])
    if args.s == 0:
        n = args.tmax + args.n_offset
        rows = mothercuts.recurrence_experiment(args.d, shape, args.tmax, n=n, solve=True, mode=mode)
        rows = [r for r in rows if r.t >= args.tmin]
        for r in rows:
            w.writerow([r.t, rational(r.bound), rational(r.resistance), rational(float(r.bound) / r.t), "",
                        rational(r.increment)])
    else:
        closed = None if args.window == "auto" else args.window == "closed"
        closed = (args.d == 0) if closed is None else closed
        jobs = [(args.d, shape, args.s, t, args.n_offset, mode, closed)
                for t in range(max(args.tmin, args.s + 1), args.tmax + 1)]
        if args.workers > 1:
            with ProcessPoolExecutor(args.workers) as pool:
                rows = list(pool.map(_scaling_row, jobs))
        else:
            rows = [_scaling_row(j) for j in jobs]
        prev = None
        for r in rows:
            inc = None if prev is None else r.bound - prev
            prev = r.bound
            w.writerow([r.t, rational(r.bound), rational(r.resistance), rational(r.per_step),
                        rational(r.per_log), rational(inc)])
    _write(args.out, buf.getvalue())
    return 0


def _add_shape(p):
    p.add_argument("--m", default="2", help="alphabet sizes: '2' constant, '3,2,4' repeating pattern")
    p.add_argument("--m-list", default=None, help="explicit sizes, padded with the last entry")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mothergraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a level-n Schreier graph")
    p.add_argument("--d", type=int, required=True)
    _add_shape(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--full", action="store_true", help="full alphabet instead of the binary quotient")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", default=None)
    p.add_argument("--dot", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("resist", help="effective resistance between position ranges")
    p.add_argument("--graph", default=None, help="graph JSON written by 'build'")
    p.add_argument("--d", type=int, default=1)
    _add_shape(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--full", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--mode", choices=["exact", "float"], default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_resist)

    p = sub.add_parser("bound", help="cutset lower bound for Res({pos < 2^s}, {pos >= 2^t})")
    p.add_argument("--d", type=int, required=True)
    _add_shape(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "float"], default=None)
    p.add_argument("--window", choices=["auto", "half-open", "closed"], default="auto")
    p.add_argument("--certify", action="store_true", help="embed the full allocation in the JSON")
    p.add_argument("--out", default=None, help="JSON certificate path")
    p.add_argument("--csv", default=None, help="per-cutset CSV path")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=["action", "lemma", "weights", "wnw", "all"])
    p.add_argument("--d", type=int, default=None)
    _add_shape(p)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--graphs", choices=["random"], default="random")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scaling", help="sweep t and tabulate bound against resistance")
    p.add_argument("--d", type=int, required=True)
    _add_shape(p)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--tmin", type=int, default=2)
    p.add_argument("--tmax", type=int, default=12)
    p.add_argument("--n-offset", type=int, default=2)
    p.add_argument("--mode", choices=["exact", "float"], default=None)
    p.add_argument("--window", choices=["auto", "half-open", "closed"], default="auto")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_scaling)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
