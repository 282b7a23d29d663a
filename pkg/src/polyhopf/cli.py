"""Command-line front end.

Exit codes: 0 success, 1 an identity fails, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

from . import identities, numeric
from .bar import boundary
from .polygon import Dissection, Polygon, enumerate_dissections, is_dissection
from .rules import RULES, get_rule, lambda_phi, tree_of

SCHEMA = "1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _polygon(text: str) -> Polygon:
    try:
        return Polygon.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _floats(text: str) -> List[float]:
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polyhopf", description="Polygon dissections, rule trees and their linearizations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, rule=False):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if rule:
            sp.add_argument("--rule", required=True, choices=sorted(RULES))
        return sp

    sp = common(sub.add_parser("dissections", help="list the dissections of a polygon"))
    sp.add_argument("--polygon", required=True, type=_polygon)

    sp = common(sub.add_parser("tree", help="rule tree of one dissection"), rule=True)
    sp.add_argument("--polygon", required=True, type=_polygon)
    sp.add_argument("--dissection", default="{}", help='arrows such as "{2->6,6->2}"')

    sp = common(sub.add_parser("lambda", help="linearized dissection sum"), rule=True)
    sp.add_argument("--polygon", required=True, type=_polygon)

    sp = common(sub.add_parser("boundary", help="boundary of a polygon"), rule=True)
    sp.add_argument("--polygon", required=True, type=_polygon)

    sp = common(sub.add_parser("verify", help="check one identity on one polygon"))
    sp.add_argument("--identity", required=True, choices=identities.identity_names(True))
    sp.add_argument("--polygon", required=True, type=_polygon)

    sp = common(sub.add_parser("verify-all", help="check the identity table"))
    sp.add_argument("--max-weight", type=_positive_int, default=4)
    sp.add_argument("--min-weight", type=_positive_int, default=2)
    sp.add_argument("--random", type=int, default=0, metavar="K",
                    help="also check K random repeated-label polygons per weight")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--timings", action="store_true",
                    help="include per-check millis (output is then not byte-stable)")

    sp = common(sub.add_parser("eval", help="evaluate I(0; a_1..a_n; y) numerically"))
    sp.add_argument("--args", required=True, type=_floats, help="a_1,...,a_n,y")
    sp.add_argument("--depth", type=_positive_int, default=200)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--li", action="store_true", help="treat --args as multiple logarithm arguments")
    return p


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps({"schema": SCHEMA, **payload}, sort_keys=True))
    else:
        print(text)


def _sum_text(x) -> str:
    if not x:
        return "0"
    return "\n".join(f"{e['coeff']} [{e['term']}]" for e in x.to_json())


def _cmd_dissections(args) -> int:
    ds = enumerate_dissections(args.polygon)
    _emit(args, {"polygon": args.polygon.text(), "count": len(ds),
                 "dissections": [d.text() for d in ds]},
          "\n".join(d.text() for d in ds))
    return 0


def _cmd_tree(args) -> int:
    P = args.polygon
    try:
        d = Dissection.parse(args.dissection)
    except ValueError as e:
        raise UsageError(str(e))
    if not is_dissection(P, d):
        raise UsageError(f"{d.text()} is not a dissection of {P.text()}")
    rule = get_rule(args.rule)
    t = tree_of(rule, P, d)
    payload = {
        "polygon": P.text(), "dissection": d.text(), "rule": rule.name,
        "coeff": str(t.coeff), "labels": [q.text() for q in t.labels],
        "edges": [list(e) for e in t.edges], "arrows": [a.text() for a in t.tags],
        "tree": t.forest().text(),
    }
    _emit(args, payload, t.text())
    return 0


def _cmd_sum(args, compute) -> int:
    rule = get_rule(args.rule)
    x = compute(rule, args.polygon)
    _emit(args, {"polygon": args.polygon.text(), "rule": rule.name, "terms": x.to_json()}, _sum_text(x))
    return 0


def _report_text(r: identities.IdentityReport) -> str:
    status = "holds" if r.holds else "FAILS"
    return f"{r.identity} {r.polygon.text()}: {status} ({len(r.defect)} defect terms)"


def _cmd_verify(args) -> int:
    try:
        r = identities.verify(args.identity, args.polygon)
    except ValueError as e:
        raise UsageError(str(e))
    if args.format == "json":
        print(json.dumps({"schema": SCHEMA, **r.to_json()}, sort_keys=True))
    else:
        print(_report_text(r))
        if not r.holds:
            print(_sum_text(r.defect))
    return 0 if r.holds else 1


def _jobs(args) -> List[Tuple[str, Polygon]]:
    rng = random.Random(args.seed)
    polys = []
    for n in range(args.min_weight, args.max_weight + 1):
        polys.append(Polygon([str(k) for k in range(1, n + 2)]))
        for _ in range(args.random):
            polys.append(Polygon([rng.choice("abc") for _ in range(n + 1)]))
    jobs = []
    for name in identities.identity_names():
        _, lo, hi = identities.IDENTITIES[name]
        for P in polys:
            if P.weight >= lo and not (hi and P.weight > hi):
                jobs.append((name, P))
    return jobs


def _run_job(job: Tuple[str, Polygon]) -> dict:
    name, P = job
    return identities.verify(name, P).to_json()


def worker_count() -> int:
    env = os.environ.get("POLYHOPF_THREADS")
    if env:
        try:
            v = int(env)
        except ValueError:
            raise UsageError(f"POLYHOPF_THREADS must be an integer, got {env!r}")
        if v < 1:
            raise UsageError("POLYHOPF_THREADS must be positive")
        return v
    return os.cpu_count() or 1


def _cmd_verify_all(args) -> int:
    if args.min_weight > args.max_weight:
        raise UsageError("--min-weight exceeds --max-weight")
    jobs = _jobs(args)
    workers = worker_count()
    if workers == 1:
        results = [_run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_job, jobs, chunksize=4))
    failed = [r for r in results if not r["holds"]]
    for r in results:
        if args.format == "json":
            if not args.timings:  # timings vary between runs
                r = {k: v for k, v in r.items() if k != "millis"}
            print(json.dumps({"schema": SCHEMA, **r}, sort_keys=True))
        else:
            print(f"{r['identity']} {r['polygon']}: {'holds' if r['holds'] else 'FAILS'}")
    summary = {"total": len(results), "passed": len(results) - len(failed), "failed": len(failed),
               "failures": sorted({f"{r['identity']} {r['polygon']}" for r in failed})}
    if args.format == "json":
        print(json.dumps({"schema": SCHEMA, "summary": summary}, sort_keys=True))
    else:
        print(f"{summary['passed']}/{summary['total']} checks hold")
        for f in summary["failures"]:
            print(f"failed: {f}")
    return 1 if failed else 0


def _cmd_eval(args) -> int:
    try:
        cfg = numeric.EvalConfig(args.depth, args.tol)
        ev = numeric.li_eval(args.args, cfg) if args.li else numeric.integral_eval(args.args, cfg)
    except ValueError as e:  # includes divergence and unreachable tolerance
        raise UsageError(f"polyhopf eval: error: {e}")
    # the result is always JSON; --format only affects other commands
    print(json.dumps({"schema": SCHEMA, "value": ev.value, "tail_bound": ev.tail_bound}, sort_keys=True))
    return 0


COMMANDS = {
    "dissections": _cmd_dissections,
    "tree": _cmd_tree,
    "lambda": lambda a: _cmd_sum(a, lambda_phi),
    "boundary": lambda a: _cmd_sum(a, boundary),
    "verify": _cmd_verify,
    "verify-all": _cmd_verify_all,
    "eval": _cmd_eval,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as e:
        msg = str(e)
        if not msg.startswith("polyhopf"):
            msg = f"polyhopf: error: {msg}"
        print(msg, file=sys.stderr)
        return 2
    except SystemExit as e:  # --help
        return int(e.code or 0)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
