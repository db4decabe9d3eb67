"""
``dr-affine`` command line front-end.

Subcommands::

    dr-affine run <spec.json> [--out trace.csv]
    dr-affine oracle {ex27,ex33,ex45,ex-short} [params] [--out table.csv]
    dr-affine random --n N --du DU --dv DV --gap G --seed S --iters K [--out trace.csv]

CSV goes to ``--out`` (or stdout); summary lines start with ``#``.
Exit codes: 0 ok, 2 parse/parameter error, 3 dimension mismatch or
infeasible request, 4 numerical invariant breach.
"""

import argparse
import csv
import io
import logging
import sys

import numpy as np

from . import douglas_rachford as dr
from . import scalar
from .affine import fixed_points, outer_shift
from .errors import DimensionError, InfeasibleError, InvariantError
from .instances import random_instance
from .problemfile import ProblemFileError, dump_problem, load_problem

log = logging.getLogger("dr_affine")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_INVARIANT = 4


def fmt(x):
    """17 significant digits: round-trips any double."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def fmt_vec(v):
    return "[" + ",".join(fmt(t) for t in v) + "]"


def _emit(rows, header, summary, out):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(t) for t in row])
    text = buf.getvalue()
    summary_text = "".join(f"# {line}\n" for line in summary)
    if out is None:
        sys.stdout.write(text + summary_text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        sys.stdout.write(summary_text)


def experiment(problem, iters, out):
    """Run DR on `problem`, write the trace CSV and print the summary."""
    trace = dr.run(problem, iters)
    data = dr.normal_solutions(problem.U, problem.V)
    rate = dr.rate_estimate(trace)
    d = problem.dim
    header = (
        ["n"]
        + [f"governing_{i}" for i in range(d)]
        + [f"shadow_{i}" for i in range(d)]
        + ["shadow_error", "displacement_error"]
    )
    resid = trace.displacement_residual
    rows = [
        [n, *trace.governing[n], *trace.shadow[n], trace.shadow_error[n], resid[n]]
        for n in range(len(trace))
    ]
    summary = [
        f"gap={fmt_vec(data.v)}",
        f"gap_norm={fmt(np.linalg.norm(data.v))}",
        f"cF={fmt(data.cF)}",
        f"rate={fmt(rate)}",
        f"limit={fmt_vec(trace.limit)}",
        f"final_shadow_error={fmt(trace.shadow_error[-1])}",
    ]
    _emit(rows, header, summary, out)
    return trace, data


def cmd_run(args):
    problem, iters, _ = load_problem(args.spec)
    experiment(problem, args.iters or iters, args.out)
    return EXIT_OK


def cmd_random(args):
    problem = random_instance(args.n, args.du, args.dv, args.gap, args.seed)
    if args.spec_out:
        dump_problem(problem, args.iters, args.spec_out, seed=args.seed)
    experiment(problem, args.iters, args.out)
    return EXIT_OK


def _oracle_ex27(args):
    a, b = args.alpha, args.beta
    x = 5.0 if args.x is None else args.x
    rows = []
    for n in range(args.iters + 1):
        closed = scalar.ex27_iterate_closed(a, b, x, n)
        naive = scalar.ex27_iterate_naive(a, b, x, n)
        rows.append([n, closed, naive, abs(closed - naive)])
    lim = scalar.ex27_limit(a, b, x)
    fix_outer, fix_inner = scalar.id_minus_proj_fix_sets(a, b)
    outside = lim not in fix_outer
    summary = [
        f"v={fmt(a)}",
        f"limit={fmt(lim)}",
        f"fix_v_plus_T={fix_outer}",
        f"fix_T_minus_v={fix_inner}",
        "outside Fix(v+T)" if outside else "inside Fix(v+T)",
    ]
    return ["n", "closed", "naive", "abs_diff"], rows, summary


def _oracle_ex33(args):
    a, b = args.alpha, args.beta
    if args.x is None:
        # limit curves over a grid of starting points
        xs = np.linspace(-2.0, 4.0, 61)
        rows = [[x, *scalar.ex33_limits(a, b, x)] for x in xs]
        return ["x", "inner_limit", "outer_limit", "drift_limit"], rows, [f"v={fmt(b)}"]
    x = args.x
    rows = []
    for n in range(args.iters + 1):
        closed = scalar.ex33_sequences(a, b, x, n)
        naive = scalar.ex33_sequences_naive(a, b, x, n)
        rows.append([n, closed[0], naive[0], closed[1], naive[1], closed[2], naive[2]])
    lims = scalar.ex33_limits(a, b, x)
    summary = [
        f"v={fmt(b)}",
        f"inner_limit={fmt(lims[0])}",
        f"outer_limit={fmt(lims[1])}",
        f"drift_limit={fmt(lims[2])}",
    ]
    if x > b:
        wx, wn = scalar.ex33_no_single_operator_witness(a, b, x=x)
        _, outer, drift = scalar.ex33_sequences(a, b, wx, wn)
        summary.append(f"witness x={fmt(wx)} n={wn} mismatch={fmt(abs(outer - drift))}")
    header = ["n", "inner_closed", "inner_naive", "outer_closed", "outer_naive", "drift_closed", "drift_naive"]
    return header, rows, summary


def _oracle_rotation(args):
    b = np.array(args.b if args.b is not None else [2.0, 0.0])
    x0 = np.array(args.x0 if args.x0 is not None else [0.0, 0.0])
    norms = scalar.rotation_dr_trace(b, x0, args.iters)
    T = scalar.rotation_dr_map(b)
    v = -T.offset
    fix = fixed_points(outer_shift(T, -v))
    rows = [[n, norms[n], norms[n] - norms[n - 1] if n else 0.0] for n in range(len(norms))]
    summary = [
        f"v={fmt_vec(v)}",
        f"half_b_norm={fmt(np.linalg.norm(b) / 2)}",
        f"normal_fix_rank={fix.rank if fix is not None else 'empty'}",
    ]
    return ["n", "shadow_norm", "increment"], rows, summary


def _oracle_short(args):
    lo = 1.0 if args.lo is None else args.lo
    hi = 2.0 if args.hi is None else args.hi
    fix_outer, fix_inner = scalar.id_minus_proj_fix_sets(lo, hi)
    T = scalar.IdMinusProjection(lo, hi)
    v = T.gap
    rows = []
    for x in np.linspace(lo - 4.0, hi + 2.0, 25):
        px = min(max(x, lo), hi)
        pxv = min(max(x + v, lo), hi)
        rows.append([x, x in fix_outer, px == v, x in fix_inner, pxv == v])
    summary = [
        f"v={fmt(v)}",
        f"fix_v_plus_T={fix_outer}",
        f"fix_T_minus_v={fix_inner}",
        f"strict_inclusion={fix_outer != fix_inner}",
    ]
    header = ["x", "in_fix_v_plus_T", "P_C(x)==v", "in_fix_T_minus_v", "P_C(x+v)==v"]
    return header, rows, summary


ORACLES = {
    "ex27": _oracle_ex27,
    "ex33": _oracle_ex33,
    "ex45": _oracle_rotation,
    "rotation": _oracle_rotation,
    "ex-short": _oracle_short,
}


def cmd_oracle(args):
    if args.name in ("ex27", "ex33"):
        if args.alpha is None:
            args.alpha = 1.0 if args.name == "ex27" else 0.5
        if args.beta is None:
            args.beta = 2.0 if args.name == "ex27" else 1.0
    try:
        header, rows, summary = ORACLES[args.name](args)
    except ValueError as exc:
        log.error("bad parameters: %s", exc)
        return EXIT_PARSE
    _emit(rows, header, summary, args.out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="dr-affine", description="Douglas-Rachford for two affine subspaces")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run DR on a JSON problem file")
    r.add_argument("spec")
    r.add_argument("--out")
    r.add_argument("--iters", type=int, help="override the file's iteration count")
    r.set_defaults(func=cmd_run)

    o = sub.add_parser("oracle", help="closed-form example vs naive iteration")
    o.add_argument("name", choices=sorted(ORACLES))
    o.add_argument("--alpha", type=float)
    o.add_argument("--beta", type=float)
    o.add_argument("--x", type=float)
    o.add_argument("--b", type=float, nargs=2)
    o.add_argument("--x0", type=float, nargs=2)
    o.add_argument("--lo", type=float, help="left end of C (ex-short)")
    o.add_argument("--hi", type=float, help="right end of C (ex-short)")
    o.add_argument("--iters", type=int, default=20)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("random", help="random instance with a prescribed gap")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--du", type=int, required=True)
    g.add_argument("--dv", type=int, required=True)
    g.add_argument("--gap", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--iters", type=int, default=200)
    g.add_argument("--out")
    g.add_argument("--spec-out", help="also write the generated problem as JSON")
    g.set_defaults(func=cmd_random)
    return p


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="dr-affine: %(message)s")
    args = build_parser().parse_args(argv)
    if getattr(args, "iters", None) is not None and args.iters < 1:
        log.error("--iters must be positive")
        return EXIT_PARSE
    try:
        return args.func(args)
    except ProblemFileError as exc:
        log.error("parse error in %s", exc)
        return EXIT_PARSE
    except (DimensionError, InfeasibleError) as exc:
        log.error("%s", exc)
        return EXIT_DIMENSION
    except InvariantError as exc:
        log.error("invariant breach: %s", exc)
        return EXIT_INVARIANT
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_PARSE
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
