"""Command-line front end (``posetmu``).

Machine-readable output goes to stdout, diagnostics to stderr. Exit codes:
0 success, 1 usage or input error, 2 a computational cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import kernels
from .embeddings import (
    build_A_poset,
    count_normal,
    ez_sets,
    ez_sign_sum,
    format_embedding,
    is_normal,
    rightmost_reps,
)
from .engine import INTERVAL_CAP, interval_elements, interval_poset, mobius, mobius_formula, mobius_recursive
from .errors import CapExceeded
from .perm import PermutationError, all_permutations, embeddings_of, parse_permutation
from .poset import (
    FinitePoset,
    PosetError,
    boolean_lattice,
    mobius_between,
    mobius_of,
    mobius_truncated_boolean,
    reduced_euler_characteristic,
    truncated_boolean,
)
from .survey import exhaustive, random_survey, write_csv


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _perm(text):
    try:
        return parse_permutation(text)
    except PermutationError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _emit(obj, out):
    out.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _write_dot(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# subcommands


def cmd_mu(args, out):
    report = mobius(args.sigma, args.pi, args.method)
    _emit(report.to_json(), out)


def cmd_ne(args, out):
    emb = embeddings_of(args.sigma, args.pi)
    normal = [format_embedding(m, args.pi) for m in emb if is_normal(m, args.pi)]
    _emit(
        {
            "sigma": str(args.sigma),
            "pi": str(args.pi),
            "ne": count_normal(args.sigma, args.pi),
            "occurrences": len(emb),
            "normal": normal,
        },
        out,
    )


def cmd_ezsum(args, out):
    lam, pi = args.lam, args.pi
    reps = rightmost_reps(lam, pi)
    result = {
        "lambda": str(lam),
        "pi": str(pi),
        "embeddings": [format_embedding(m, pi) for m in embeddings_of(lam, pi)],
        "representatives": [format_embedding(m, pi) for m in reps],
        "ez_sum": ez_sign_sum(lam, pi),
    }
    if args.list:
        result["sets"] = sorted(
            sorted(format_embedding(m, pi) for m in s) for s in ez_sets(lam, pi)
        )
    _emit(result, out)


def cmd_interval(args, out):
    elements = interval_elements(args.sigma, args.pi, cap=args.cap)
    if args.dot:
        _write_dot(args.dot, interval_poset(args.sigma, args.pi, cap=args.cap).to_dot(name="interval"))
    _emit({"sigma": str(args.sigma), "pi": str(args.pi), "size": len(elements),
           "elements": [str(e) for e in elements]}, out)


def cmd_aposet(args, out):
    poset, projection = build_A_poset(args.sigma, args.pi)
    if args.dot:
        _write_dot(args.dot, poset.to_dot(label=str, name="A"))
    _emit(
        {
            "sigma": str(args.sigma),
            "pi": str(args.pi),
            "size": len(poset),
            "elements": [{"eta": str(e), "pattern": str(projection[e])} for e in poset],
            "minimal": [str(e) for e in poset.minimal()],
            "maximal": [str(e) for e in poset.maximal()],
            "mobius_bounded": mobius_of(poset),
        },
        out,
    )


def cmd_survey(args, out):
    if args.random is not None:
        if args.sigma_len is None or args.pi_len is None:
            raise UsageError("--random needs --sigma-len and --pi-len")
        rows = random_survey(args.random, args.sigma_len, args.pi_len, args.seed, args.jobs, args.timing)
    else:
        if args.max_len is None:
            raise UsageError("survey needs --max-len or --random")
        rows = exhaustive(args.max_len, include_top=args.include_equal, jobs=args.jobs, timing=args.timing)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            summary = write_csv(rows, fh)
    else:
        summary = write_csv(rows, out)
    print(summary.line(), file=sys.stderr if not args.csv else out)


def cmd_bench(args, out):
    results = {"sigma": str(args.sigma), "pi": str(args.pi), "backend": kernels.BACKEND}
    report = mobius_formula(args.sigma, args.pi)
    results["formula"] = report.to_json()
    if not args.skip_recursive:
        start = time.perf_counter()
        mu = mobius_recursive(args.sigma, args.pi)
        results["recursive"] = {"mu": mu, "elapsed_ms": round((time.perf_counter() - start) * 1000, 3)}
        results["agree"] = mu == report.mu
    _emit(results, out)


def _poset_mobius(p: FinitePoset) -> int:
    """mu(bottom, top) when both exist, else mu of the poset with bounds adjoined."""
    bottom, top = p.bottom, p.top
    if bottom is not None and top is not None and len(p) > 1:
        return mobius_between(p, bottom, top)
    return mobius_of(p)


def _load_poset(path) -> FinitePoset:
    with open(path, encoding="utf-8") as fh:
        return FinitePoset.from_edge_list(fh.read())


def cmd_poset(args, out):
    if args.action == "boolean":
        if args.k is None:
            p = boolean_lattice(args.n)
            result = {"n": args.n, "mobius": _poset_mobius(p)}
        else:
            p = truncated_boolean(args.n, args.k, args.mode)
            result = {"n": args.n, "k": args.k, "mode": args.mode, "mobius": _poset_mobius(p),
                      "closed_form": mobius_truncated_boolean(args.n, args.k, args.mode)}
        result["size"] = len(p)
        if args.dot:
            _write_dot(args.dot, p.to_dot(label=_set_label))
        _emit(result, out)
        return
    if args.file is None:
        raise UsageError(f"poset {args.action} needs FILE")
    p = _load_poset(args.file)
    if args.action == "mobius":
        if args.bottom is not None and args.top is not None:
            _emit({"mobius": mobius_between(p, args.bottom, args.top)}, out)
        else:
            _emit({"mobius": _poset_mobius(p)}, out)
    elif args.action == "euler":
        _emit({"reduced_euler": reduced_euler_characteristic(p)}, out)
    elif args.action == "dot":
        out.write(p.to_dot())


def _set_label(x):
    if isinstance(x, frozenset):
        return "{" + ",".join(str(i) for i in sorted(x)) + "}"
    return str(x)


def cmd_verify(args, out):
    failures = 0
    checked = 0
    for n in range(1, args.max_len + 1):
        for pi in all_permutations(n):
            for sigma in interval_elements(parse_permutation("1"), pi):
                checked += 1
                f = mobius_formula(sigma, pi).mu
                r = mobius_recursive(sigma, pi)
                if f != r:
                    failures += 1
                    print(f"mismatch [{sigma}, {pi}]: formula {f}, recursive {r}", file=sys.stderr)
    _emit({"max_len": args.max_len, "checked": checked, "failures": failures}, out)
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="posetmu", description="Moebius function of permutation intervals")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mu", help="Moebius function of [SIGMA, PI] as JSON")
    p.add_argument("sigma", type=_perm)
    p.add_argument("pi", type=_perm)
    p.add_argument("--method", choices=["recursive", "formula", "auto", "single"], default="auto")
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("ne", help="normal embeddings of SIGMA in PI")
    p.add_argument("sigma", type=_perm)
    p.add_argument("pi", type=_perm)
    p.set_defaults(func=cmd_ne)

    p = sub.add_parser("ezsum", help="representatives and EZ sum of LAMBDA in PI")
    p.add_argument("lam", type=_perm, metavar="LAMBDA")
    p.add_argument("pi", type=_perm)
    p.add_argument("--list", action="store_true", help="also list the counted sets (small cases)")
    p.set_defaults(func=cmd_ezsum)

    for name, func, helptext in (
        ("interval", cmd_interval, "elements of the interval [SIGMA, PI]"),
        ("aposet", cmd_aposet, "poset of run counts above the representatives of SIGMA"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("sigma", type=_perm)
        p.add_argument("pi", type=_perm)
        p.add_argument("--dot", metavar="FILE")
        if name == "interval":
            p.add_argument("--cap", type=int, default=INTERVAL_CAP)
        p.set_defaults(func=func)

    p = sub.add_parser("survey", help="exhaustive or random survey as CSV")
    p.add_argument("--max-len", type=int)
    p.add_argument("--random", type=int, metavar="COUNT")
    p.add_argument("--sigma-len", type=int)
    p.add_argument("--pi-len", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", metavar="FILE")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--include-equal", action="store_true", help="also list the trivial intervals [PI, PI]")
    p.add_argument("--timing", action="store_true", help="fill elapsed_ms (output is then not reproducible)")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("bench", help="time formula against recursion")
    p.add_argument("sigma", type=_perm)
    p.add_argument("pi", type=_perm)
    p.add_argument("--skip-recursive", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("poset", help="generic poset utilities")
    p.add_argument("action", choices=["mobius", "euler", "dot", "boolean"])
    p.add_argument("file", nargs="?", help="edge list: one 'a < b' per line")
    p.add_argument("--bottom")
    p.add_argument("--top")
    p.add_argument("-n", type=int, default=3)
    p.add_argument("-k", type=int)
    p.add_argument("--mode", choices=["le", "ge"], default="le")
    p.add_argument("--dot", metavar="FILE")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("verify", help="formula against recursion on every interval up to a length")
    p.add_argument("--max-len", type=int, default=5)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code = args.func(args, out)
        return code or 0
    except UsageError as exc:
        print(f"posetmu: {exc}", file=sys.stderr)
        return 1
    except CapExceeded as exc:
        print(f"posetmu: cap exceeded: {exc}", file=sys.stderr)
        return 2
    except (PermutationError, PosetError, ValueError, OSError) as exc:
        print(f"posetmu: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
