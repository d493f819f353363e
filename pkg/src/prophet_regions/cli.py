"""Command-line front end.

Environment tags: ``iid``, ``indep`` (or ``independent``), ``general``,
``disc:<beta>``, ``alpha2:<alpha>``.  Information pairs: ``u,m``, ``v,m``,
``w,m``.  In ``compare`` a region is written ``ENV[@N]:PAIR``, for example
``general@4:u,m`` or ``disc:0.5:v,m``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Iterable, Optional, Sequence

import numpy as np

from . import boundaries as B
from . import constructions as K
from . import measures as Q
from . import oracle as O
from . import verify as V
from .comparisons import discount_alpha_study, gap_area, gap_horizontal, gap_vertical
from .errors import DegenerateRegion, UnsupportedRegion
from .sequences import DiscreteSequence

PROG = "prophet-regions"

_FAMILIES = {
    "iid": B.Family.IID,
    "indep": B.Family.INDEPENDENT,
    "independent": B.Family.INDEPENDENT,
    "general": B.Family.GENERAL,
    "disc": B.Family.DISCOUNTED,
    "discounted": B.Family.DISCOUNTED,
    "alpha2": B.Family.ALPHA_BOUNDED,
}


class UsageError(ValueError):
    pass


_POSITIONAL = ("name", "file", "suite")


# -- parsing helpers -------------------------------------------------------------

def parse_env(tag: str, n: Optional[int] = None) -> B.EnvironmentSpec:
    """``general``, ``indep``, ``disc:0.5`` ... plus an optional ``@N`` suffix."""
    body, _, horizon = tag.partition("@")
    if horizon:
        try:
            h = int(horizon)
        except ValueError:
            raise UsageError(f"bad horizon in {tag!r}") from None
        if n is not None and n != h:
            raise UsageError(f"horizon given twice: {tag!r} and --n {n}")
        n = h
    name, _, param = body.partition(":")
    fam = _FAMILIES.get(name.lower())
    if fam is None:
        raise UsageError(f"unknown environment {name!r}; expected one of {', '.join(sorted(_FAMILIES))}")
    p = None
    if param:
        try:
            p = float(param)
        except ValueError:
            raise UsageError(f"bad parameter in {tag!r}") from None
    if fam is B.Family.ALPHA_BOUNDED:
        if n not in (None, 2):
            raise UsageError("alpha2 environments have horizon 2")
        n = 2
    if fam in (B.Family.DISCOUNTED, B.Family.ALPHA_BOUNDED) and p is None:
        raise UsageError(f"{name} needs a parameter, e.g. {name}:0.5")
    return B.EnvironmentSpec(fam, n, p)


def parse_region(tag: str) -> B.RegionDescriptor:
    """``ENV[@N]:PAIR``, for example ``independent:v,m``."""
    env_tag, sep, pair = tag.rpartition(":")
    if not sep:
        raise UsageError(f"region tag {tag!r} must look like ENV[@N]:PAIR")
    return B.region(parse_env(env_tag), B.parse_pair(pair))


def _descriptor(args) -> B.RegionDescriptor:
    return B.region(parse_env(args.env, args.n), B.parse_pair(args.pair))


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _count(minimum: int):
    def conv(text: str) -> int:
        v = int(text)
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}")
        return v
    return conv


# -- output helpers --------------------------------------------------------------

def fmt(value) -> str:
    if isinstance(value, str):
        return value
    if value is None:
        return ""
    if value is Q.DIVERGENT:
        return "divergent"
    v = float(value)
    if math.isinf(v):
        return "unbounded"
    return format(v, ".17g")


class Writer:
    def __init__(self, out, args):
        self.out = out
        words = [getattr(args, k) for k in _POSITIONAL if hasattr(args, k)]
        for k, v in sorted(vars(args).items()):
            if k in ("func", "command", *_POSITIONAL) or v is None or v is False:
                continue
            flag = "--" + k.replace("_", "-")
            if v is True:
                words.append(flag)
            elif isinstance(v, list):
                words += [f"{flag}={fmt(x)}" for x in v]
            else:
                words.append(f"{flag}={fmt(v) if isinstance(v, float) else v}")
        self.out.write(" ".join(["#", PROG, args.command, *map(str, words)]) + "\n")

    def row(self, cells: Iterable) -> None:
        self.out.write(",".join(fmt(c) for c in cells) + "\n")


def _safe(fn, *a):
    try:
        return fn(*a)
    except DegenerateRegion:
        return "degenerate"
    except UnsupportedRegion:
        return "unsupported"


# -- subcommands -----------------------------------------------------------------

def cmd_boundary(args, out) -> int:
    desc = _descriptor(args)
    cols = [c.strip() for c in args.columns.split(",")]
    bad = set(cols) - {"boundary", "inverse", "diagonal"}
    if bad:
        raise UsageError(f"unknown columns {sorted(bad)}")
    w = Writer(out, args)
    w.row(["x", *cols])
    for x in np.linspace(0.0, 1.0, args.points):
        x = float(x)
        cells: list = [x]
        for c in cols:
            if c == "boundary":
                cells.append(float(B.boundary(desc, x)))
            elif c == "inverse":
                cells.append(_safe(B.inverse_boundary, desc, x))
            else:
                cells.append(x)
        w.row(cells)
    return 0


def cmd_stats(args, out) -> int:
    desc = _descriptor(args)
    w = Writer(out, args)
    w.row(["area", "typical_difference", "typical_ratio", "max_difference", "max_ratio"])
    w.row([Q.area(desc), _safe(Q.typical_difference, desc), _safe(Q.typical_ratio, desc),
           Q.max_difference(desc).value, Q.max_ratio(desc).value])
    return 0


def cmd_tail(args, out) -> int:
    desc = _descriptor(args)
    if args.at is not None:
        grid = args.at
    else:
        if args.start is None or args.stop is None:
            raise UsageError("give --at VALUE or both --from and --to")
        grid = [float(t) for t in np.linspace(args.start, args.stop, args.points)]
    fn = Q.tail_ratio if args.ratio else Q.tail_difference
    w = Writer(out, args)
    w.row(["c" if args.ratio else "d", "probability"])
    for t in grid:
        w.row([t, fn(desc, t)])
    return 0


def cmd_compare(args, out) -> int:
    w = Writer(out, args)
    if args.discount_alpha_study:
        study = discount_alpha_study(args.grid)
        w.row(["section", "key", "alpha_column", "beta_column", "difference"])
        w.row(["equal_parameter_peak", *study.size_peak])
        w.row(["equal_area_peak", *study.parameter_peak])
        if args.full:
            for r in study.size_rows:
                w.row(["equal_parameter", *r])
            for r in study.parameter_rows:
                w.row(["equal_area", *r])
        return 0
    if args.a is None or args.b is None:
        raise UsageError("compare needs --a and --b, or --discount-alpha-study")
    a, b = parse_region(args.a), parse_region(args.b)
    vert, hor = gap_vertical(a, b), gap_horizontal(a, b)
    w.row(["measure", "location", "value"])
    w.row(["vertical", vert.location, vert.value])
    w.row(["horizontal", hor.location, hor.value])
    w.row(["area", "", gap_area(a, b)])
    return 0


_CONSTRUCTIONS = ("iid-bernoulli", "dilated-bernoulli", "unit-vectors", "worst-u-diff",
                  "statistician", "discounted", "alpha", "random")


def _need(args, *names) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.name} needs " + ", ".join("--" + n for n in missing))


def build_sequence(args) -> DiscreteSequence:
    name = args.name
    if name == "iid-bernoulli":
        _need(args, "n", "x")
        return K.iid_bernoulli(args.n, args.x)
    if name == "dilated-bernoulli":
        _need(args, "n", "x", "lam")
        return K.dilated_bernoulli(args.n, args.x, args.lam)
    if name == "unit-vectors":
        _need(args, "n", "x")
        return K.unit_vectors_general(args.n, args.x, 1.0 if args.lam is None else args.lam)
    if name == "worst-u-diff":
        _need(args, "env", "n")
        return K.worst_case_u_difference(parse_env(args.env, args.n))
    if name == "statistician":
        _need(args, "x")
        return K.statistician_worst_case(args.x)
    if name == "discounted":
        _need(args, "x", "beta")
        return K.discounted_extremal(args.x, args.beta)
    if name == "alpha":
        _need(args, "x", "alpha")
        return K.alpha_extremal(args.x, args.alpha)
    _need(args, "env")
    env = parse_env(args.env, args.n)
    if env.horizon is None:
        raise UsageError("random needs a finite horizon (--n)")
    return K.random_sequence(env, np.random.default_rng(args.seed), max_atoms=args.max_atoms)


def cmd_construct(args, out) -> int:
    seq = build_sequence(args)
    Writer(out, args)
    out.write(seq.to_text())
    return 0


def _read_sequence(path: str) -> DiscreteSequence:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return DiscreteSequence.from_text(text)


def cmd_eval(args, out) -> int:
    seq = _read_sequence(args.file)
    if args.pair is not None:
        pair = B.parse_pair(args.pair)
        levels = [pair.lower.value, "m"]
    else:
        levels = ["u", "v", "m"] + (["w"] if args.j is not None else [])
    j = args.j
    if "w" in levels and j is None:
        j = seq.n - 1
    exact = {"u": O.eval_u(seq), "v": O.eval_v(seq, tol=args.tol), "m": O.eval_m(seq)}
    if "w" in levels:
        exact["w"] = O.eval_w(seq, j)
    w = Writer(out, args)
    if args.mc is None:
        w.row(["quantity", "value"])
        for k in levels:
            w.row([k, exact[k]])
        return 0
    est = O.monte_carlo_values(seq, args.mc, args.seed, args.threads)
    w.row(["quantity", "value", "estimate", "stderr"])
    for k in levels:
        if k == "w":
            w.row([k, exact[k], "unsupported", "unsupported"])
        else:
            w.row([k, exact[k], getattr(est, k), getattr(est, k + "_se")])
    return 0


def cmd_verify(args, out) -> int:
    options = {
        "tails": {"samples": args.samples, "seed": args.seed, "threads": args.threads},
        "oracle-vs-analytic": {"grid": args.grid},
        "observer-ordering": {"seed": args.seed},
    }
    names = list(V.SUITES) if args.suite == "all" else [args.suite]
    results = [V.SUITES[name](**options.get(name, {})) for name in names]
    for r in results:
        out.write(r.summary() + "\n")
    passed = sum(r.passed for r in results)
    out.write(f"{passed}/{len(results)} criteria passed\n")
    return 0 if passed == len(results) else 1


# -- parser ----------------------------------------------------------------------

def _region_flags(p: argparse.ArgumentParser, pair_default: Optional[str] = "v,m") -> None:
    p.add_argument("--env", required=True, help="iid, indep, general, disc:<beta>, alpha2:<alpha>")
    p.add_argument("--pair", default=pair_default, help="u,m  v,m  or  w,m (default %(default)s)")
    p.add_argument("--n", type=_count(2), help="horizon (default: infinite)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("boundary", help="upper boundary on a uniform grid")
    _region_flags(p)
    p.add_argument("--points", type=_count(2), default=101)
    p.add_argument("--columns", default="boundary", help="comma list of boundary, inverse, diagonal")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("stats", help="area, typical and worst-case statistics")
    _region_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("tail", help="P(y/x >= c) or P(y-x >= d) for a uniform point")
    _region_flags(p)
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--ratio", action="store_true")
    kind.add_argument("--diff", action="store_true")
    p.add_argument("--at", type=float, action="append", help="threshold (repeatable)")
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--points", type=_count(2), default=11)
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("compare", help="gaps between two regions, or the discount-alpha study")
    p.add_argument("--a", help="smaller region, ENV[@N]:PAIR")
    p.add_argument("--b", help="larger region, ENV[@N]:PAIR")
    p.add_argument("--discount-alpha-study", action="store_true")
    p.add_argument("--grid", type=_count(100), default=200)
    p.add_argument("--full", action="store_true", help="also print every study row")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("construct", help="write an extremal or random sequence file")
    p.add_argument("name", choices=_CONSTRUCTIONS)
    p.add_argument("--n", type=_count(2))
    p.add_argument("--x", type=float)
    p.add_argument("--lam", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--env")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--max-atoms", type=_count(1), default=64)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("eval", help="exact observer values of a sequence file")
    p.add_argument("file", help="sequence file, or - for standard input")
    p.add_argument("--pair")
    p.add_argument("--j", type=_count(1))
    p.add_argument("--tol", type=float, default=0.0, help="prefix equality tolerance")
    p.add_argument("--mc", type=_count(1), metavar="SAMPLES")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--threads", type=_count(1), default=1)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run acceptance suites")
    p.add_argument("suite", choices=[*V.SUITES, "all"])
    p.add_argument("--grid", type=_count(2), default=50)
    p.add_argument("--samples", type=_count(1000), default=10**6)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--threads", type=_count(1), default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (ValueError, RuntimeError) as exc:
        # domain, unsupported-region, malformed-file and size-cap errors alike
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
