"""Compare the compiled and pure-Python kernels, and the formula against recursion.

    python benchmarks/bench_kernels.py [--repeat N]

Kernel timings call both backends directly. End-to-end timings run each
backend in a fresh interpreter so caches and the import-time choice do not
leak between them.
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

from posetmu import kernels
from posetmu.perm import parse_permutation

HEADLINE = ("54123", "9 7 10 4 8 1 2 6 5 3 19 17 20 14 18 11 12 16 15 13")


def kernel_cases():
    rng = random.Random(0)
    host = list(range(1, 19))
    rng.shuffle(host)
    host = tuple(host)
    reps = [rng.getrandbits(18) | rng.getrandbits(18) for _ in range(18)]
    facets = [rng.getrandbits(22) & rng.getrandbits(22) | rng.getrandbits(22) for _ in range(12)]
    return {
        "occurrences 2413 in random 18": ("occurrence_masks", ((2, 4, 1, 3), host)),
        "occurrences 13254 in 2 4 ... 9": ("occurrence_masks", ((1, 3, 2, 5, 4), (2, 4, 6, 8, 10, 1, 3, 5, 7, 9))),
        "EZ subset walk, 18 masks": ("ez_subset_sum", (reps,)),
        "face sum, 12 facets on 22 points": ("signed_face_sum", (facets, 22)),
    }


def time_call(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    best = min(timer.repeat(repeat, number)) / number
    return best * 1000


def end_to_end(pure: bool):
    code = (
        "import time, json\n"
        "from posetmu.engine import mobius_formula\n"
        "from posetmu.perm import parse_permutation as P\n"
        f"s, p = P({HEADLINE[0]!r}), P({HEADLINE[1]!r})\n"
        "t = time.perf_counter(); r = mobius_formula(s, p); t = time.perf_counter() - t\n"
        "from posetmu import kernels\n"
        "print(json.dumps({'backend': kernels.BACKEND, 'mu': r.mu, 'ms': t * 1000}))\n"
    )
    env = dict(os.environ)
    env.pop("POSETMU_PURE_PYTHON", None)
    if pure:
        env["POSETMU_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def formula_vs_recursive():
    from posetmu.engine import clear_caches, mobius_formula, mobius_recursive

    rows = []
    for sigma, pi in [("132", "413265"), ("123", "4567123"), ("2413", "2 4 6 8 10 1 3 5 7 9"), ("21", "25314")]:
        s, p = parse_permutation(sigma), parse_permutation(pi)
        clear_caches()
        f = time_call(lambda: (clear_caches(), mobius_formula(s, p)), (), 3)
        r = time_call(lambda: (clear_caches(), mobius_recursive(s, p)), (), 3)
        rows.append((f"[{sigma}, {pi}]", f, r))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"default backend: {kernels.BACKEND}")
    if kernels.compiled is None:
        print("compiled extension not built; only the Python kernels are timed")
    print(f"\n{'kernel case':40} {'python ms':>12} {'cython ms':>12} {'speedup':>9}")
    for name, (fn_name, fn_args) in kernel_cases().items():
        py = time_call(getattr(kernels.python, fn_name), fn_args, args.repeat)
        if kernels.compiled is not None:
            cy = time_call(getattr(kernels.compiled, fn_name), fn_args, args.repeat)
            print(f"{name:40} {py:12.4f} {cy:12.4f} {py / cy:8.1f}x")
        else:
            print(f"{name:40} {py:12.4f} {'-':>12} {'-':>9}")

    print("\nheadline interval, fresh interpreter per backend")
    for pure in (True, False):
        res = end_to_end(pure)
        print(f"  {res['backend']:8} mu={res['mu']}  {res['ms']:.1f} ms")

    print(f"\n{'interval':40} {'formula ms':>12} {'recursive ms':>13}")
    for name, f, r in formula_vs_recursive():
        print(f"{name:40} {f:12.3f} {r:13.3f}")


if __name__ == "__main__":
    main()
