"""Command-line front end.

Exit codes: 0 success, 1 verification/certification failure or module error,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .bounds import bound_report, round8, table1
from .certify import NAMES, certify_tail_sign
from .errors import ScidForgeError
from .geom import enumerate_subspaces, gaussian_binomial
from .gf import field_for_q, prime_power
from .optimize import optimize_cd
from .scid import diagnostic_report, is_sunflower, load_scid, scid_to_dict, verified, verify_scid
from .search import build_intersection_graph, default_jobs, max_nonsunflower_clique


class UsageError(Exception):
    pass


def parse_q(text: str) -> int:
    try:
        if "^" in text:
            base, exp = text.split("^")
            q = int(base) ** int(exp)
        else:
            q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--q: cannot parse {text!r}")
    if prime_power(q) is None:
        raise argparse.ArgumentTypeError(f"--q: {q} is not a prime power")
    return q


def _unit_interval(text: str) -> float:
    x = float(text)
    if not 0 < x < 1:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1)")
    return x


def _json_number(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, Fraction):
        return float(f"{float(x):.12g}")
    if isinstance(x, dict):
        return {k: _json_number(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_number(v) for v in x]
    return x


def _text_value(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x).lower() if isinstance(x, bool) else "none"
    if isinstance(x, (float, Fraction)):
        return round8(float(x))
    if isinstance(x, (dict, list, tuple)):
        return json.dumps(_json_number(x), sort_keys=True)
    return str(x)


class Output:
    def __init__(self, args, stream):
        self.fmt = args.format
        self.stream = stream
        self.config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
        self.deterministic = args.deterministic

    def header(self) -> str:
        return "# scidforge " + json.dumps(self.config, sort_keys=True)

    def emit(self, result: dict):
        if self.fmt == "json":
            doc = {"config": self.config, "result": _json_number(result), "version": __version__}
            if not self.deterministic:
                doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
            self.stream.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        elif self.fmt == "text":
            lines = [self.header()]
            lines += [f"{k}: {_text_value(v)}" for k, v in result.items()]
            self.stream.write("\n".join(lines) + "\n")
        else:
            raise UsageError(f"--format csv is not available for {self.config['command']}")

    def emit_csv(self, header: list[str], rows: list[list]):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        self.stream.write(self.header() + "\n" + buf.getvalue())


# --- subcommands --------------------------------------------------------------------

def cmd_bounds(args, out: Output) -> int:
    out.emit(bound_report(args.q, args.k, args.t).to_dict())
    return 0


def cmd_table1(args, out: Output) -> int:
    rows = table1()
    if out.fmt == "csv":
        out.emit_csv(["q", "F_q", "asymptotic"], [[f"2^{r.exponent}", r.F_q, r.asymptotic] for r in rows])
    elif out.fmt == "json":
        out.emit({"rows": [{"q": f"2^{r.exponent}", "F_q": r.F_q, "asymptotic": r.asymptotic}
                           for r in rows]})
    else:
        out.stream.write(out.header() + "\n")
        out.stream.write("".join(f"2^{r.exponent:<3} {r.F_q} {r.asymptotic}\n" for r in rows))
    return 0


def cmd_optimize(args, out: Output) -> int:
    res = optimize_cd(args.q, args.k, args.step, args.tol)
    doc = res.to_dict()
    doc["iterations"] = res.iterations
    out.emit(doc)
    return 0


def cmd_certify(args, out: Output) -> int:
    names = [args.name] if args.name else list(NAMES)
    certs = [certify_tail_sign(n) for n in names]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([c.to_dict() for c in certs], fh, sort_keys=True, indent=2)
            fh.write("\n")
    summary = {}
    for c in certs:
        summary[c.name] = {"verdict": c.verdict, "claim": c.claim, "degree": c.polynomial.degree,
                           "roots_below_tail": len(c.isolating_intervals),
                           "transcription_mismatches": len(c.diagnostics)}
    if out.fmt == "json":
        out.emit({"certificates": [c.to_dict() for c in certs]})
    else:
        out.emit({f"{k}": f"{v['verdict']} ({v['claim']}, degree {v['degree']}, "
                          f"{v['roots_below_tail']} root(s) below tail, "
                          f"{v['transcription_mismatches']} transcription mismatch(es))"
                  for k, v in summary.items()})
    return 0 if all(c.certified for c in certs) else 1


def cmd_check(args, out: Output) -> int:
    scid = load_scid(args.file)
    res = verify_scid(scid)
    doc = {"q": scid.ctx.q, "n": scid.n, "k": scid.k, "size": len(scid), "valid": res.valid}
    if not res.valid:
        doc["offending_pair"] = list(res.pair)
        doc["meet_dim"] = res.meet_dim
        out.emit(doc)
        return 1
    scid = verified(scid)
    sunflower, center = is_sunflower(scid)
    doc["sunflower"] = sunflower
    if center is not None:
        doc["center"] = center.to_rows()[0]
    status = 0
    if args.c is not None or args.d is not None:
        if args.c is None or args.d is None:
            raise UsageError("--c and --d must be given together")
        if sunflower:
            doc["diagnostics"] = "skipped: the counting bounds assume a non-sunflower"
        else:
            rep = diagnostic_report(scid, args.c, args.d)
            doc["diagnostics"] = rep.to_dict()
            status = 1 if rep.lemma_violated else 0
    out.emit(doc)
    return status


def cmd_search(args, out: Output) -> int:
    ctx = field_for_q(args.q)
    graph = build_intersection_graph(ctx, args.n, args.k)
    res = max_nonsunflower_clique(graph, node_budget=args.node_budget, jobs=args.jobs)
    doc = res.sidecar()
    doc.update(classical_bound=res.classical_bound, within_bounds=res.within_bounds,
               vertices=len(graph))
    doc["scid"] = scid_to_dict(res.best_scid) if res.best_scid else None
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc["scid"], fh)
            fh.write("\n")
        with open(args.out + ".sidecar.json", "w") as fh:
            json.dump(res.sidecar(), fh, sort_keys=True)
            fh.write("\n")
    out.emit(doc)
    return 0 if res.within_bounds else 1


def cmd_enum(args, out: Output) -> int:
    ctx = field_for_q(args.q)
    count = sum(1 for _ in enumerate_subspaces(ctx, args.n, args.k))
    expected = gaussian_binomial(args.n + 1, args.k + 1, args.q)
    doc = {"q": args.q, "n": args.n, "k": args.k, "enumerated": count,
           "gaussian_binomial": expected, "match": count == expected}
    if out.fmt == "csv":
        out.emit_csv(list(doc), [list(doc.values())])
    else:
        out.emit(doc)
    return 0 if count == expected else 1


# --- parser -------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--deterministic", action="store_true",
                        help="omit the timestamp from JSON output")

    parser = _Parser(prog="scidforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", parents=[common], help="all bounds for (q, k)")
    p.add_argument("--q", type=parse_q, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, default=0)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table1", parents=[common], help="F_q and the asymptotic bound for q = 2^4..2^20")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("optimize", parents=[common], help="optimize (c, d) for fixed (q, k)")
    p.add_argument("--q", type=parse_q, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("certify", parents=[common], help="exact tail-sign certificates")
    p.add_argument("--name", choices=NAMES)
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("check", parents=[common], help="verify a SCID file")
    p.add_argument("--file", required=True)
    p.add_argument("--c", type=_unit_interval)
    p.add_argument("--d", type=_unit_interval)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", parents=[common], help="maximum non-sunflower SCID search")
    p.add_argument("--q", type=parse_q, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--node-budget", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("enum", parents=[common], help="count subspaces against the Gaussian coefficient")
    p.add_argument("--q", type=parse_q, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_enum)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", 0) is None:
            args.jobs = default_jobs()
        out = Output(args, stdout)
        if out.fmt == "csv" and args.command not in ("table1", "enum"):
            raise UsageError(f"--format csv is not available for {args.command}")
        return args.func(args, out)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return 2
    except (ScidForgeError, OSError, ValueError, KeyError) as exc:
        stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


def main():
    sys.exit(run())
