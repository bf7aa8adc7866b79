"""Moebius function of intervals of the permutation pattern poset.

Two independent routes are provided:

* :func:`mobius_recursive` works from the defining recursion over the
  interval, enumerated by deleting letters. It touches neither embeddings
  nor the compiled kernels.
* :func:`mobius_formula` adds the signed count of normal embeddings to
  ``sum mu(sigma, lam) * EZ(lam, pi)`` over ``lam`` in ``[sigma, pi)``, where
  only the ``lam`` with a nonzero EZ sum contribute.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache

from .embeddings import count_normal, ez_sign_sum, rightmost_reps
from .errors import CapExceeded
from .hosts import DENSE_CAP, host_table
from .perm import (
    Permutation,
    contains,
    from_word,
    is_indecomposable,
    power,
    direct_sum_of,
    sum_components,
)
from .poset import FinitePoset

INTERVAL_CAP = 250_000
RECURSIVE_BELOW = 2


class NotSingleError(ValueError):
    pass


@dataclass
class MobiusReport:
    sigma: Permutation
    pi: Permutation
    mu: int
    ne: int
    ne_term: int
    second_term: int
    method: str
    elapsed: float  # seconds

    def to_json(self) -> dict:
        return {
            "sigma": str(self.sigma),
            "pi": str(self.pi),
            "mu": self.mu,
            "ne": self.ne,
            "ne_term": self.ne_term,
            "second_term": self.second_term,
            "method": self.method,
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }


def _sign(pi: Permutation, sigma: Permutation) -> int:
    return -1 if (len(pi) - len(sigma)) % 2 else 1


def _delete(letters: tuple[int, ...], i: int) -> tuple[int, ...]:
    v = letters[i]
    return tuple(x - (x > v) for j, x in enumerate(letters) if j != i)


# interval enumeration (shared by nothing in the formula path)


@lru_cache(maxsize=200_000)
def _down(letters: tuple[int, ...]) -> frozenset:
    """Every pattern of ``letters`` (as letter tuples), itself included, empty excluded."""
    out = {letters}
    if len(letters) > 1:
        for i in range(len(letters)):
            out |= _down(_delete(letters, i))
    return frozenset(out)


def interval_elements(sigma: Permutation, pi: Permutation, cap: int = INTERVAL_CAP) -> list[Permutation]:
    """All ``z`` with ``sigma <= z <= pi``, by length then lexicographically."""
    s = sigma.letters
    seen = {pi.letters}
    frontier = [pi.letters]
    if not _is_pattern(s, pi.letters):
        raise ValueError(f"{sigma} is not contained in {pi}")
    while frontier:
        nxt = []
        for z in frontier:
            if len(z) == len(s):
                continue
            for i in range(len(z)):
                y = _delete(z, i)
                if y not in seen and _is_pattern(s, y):
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise CapExceeded(f"interval [{sigma}, {pi}] has more than {cap} elements")
        frontier = nxt
    return sorted((Permutation(z) for z in seen), key=lambda p: p.sort_key)


def _is_pattern(s: tuple, z: tuple) -> bool:
    # plain backtracking with pairwise order checks; deliberately separate
    # from the compiled occurrence search used by the formula
    k, n = len(s), len(z)
    if k > n:
        return False
    if k == n:
        return s == z
    picked: list[int] = []

    def extend(j: int, start: int) -> bool:
        if j == k:
            return True
        for p in range(start, n - (k - j) + 1):
            v = z[p]
            if all((s[i] < s[j]) == (z[q] < v) for i, q in enumerate(picked)):
                picked.append(p)
                if extend(j + 1, p + 1):
                    return True
                picked.pop()
        return False

    return extend(0, 0)


def interval_poset(sigma: Permutation, pi: Permutation, cap: int = INTERVAL_CAP) -> FinitePoset:
    elements = interval_elements(sigma, pi, cap)
    return FinitePoset.from_order(elements, lambda a, b: a.letters in _down(b.letters))


# recursive oracle

_REC_MEMO: dict[tuple, int] = {}


def mobius_recursive(sigma: Permutation, pi: Permutation) -> int:
    """Moebius value from ``mu(s, s) = 1`` and ``mu(s, p) = -sum_{s <= z < p} mu(s, z)``."""
    return _mu_rec(sigma.letters, pi.letters)


def _mu_rec(s: tuple, p: tuple) -> int:
    if s == p:
        return 1
    if len(s) >= len(p) or s not in _down(p):
        return 0
    key = (s, p)
    if key in _REC_MEMO:
        return _REC_MEMO[key]
    total = 0
    for z in _down(p):
        if z != p and len(z) >= len(s) and s in _down(z):
            total += _mu_rec(s, z)
    _REC_MEMO[key] = -total
    return -total


# formula


_FORMULA_MEMO: dict[tuple, int] = {}


def clear_caches():
    from .hosts import clear_tables

    _REC_MEMO.clear()
    _FORMULA_MEMO.clear()
    _down.cache_clear()
    clear_tables()


def _contributors(sigma: Permutation, pi: Permutation):
    """``(ne, [(lam, ez)])`` for ``lam`` in ``[sigma, pi)`` with nonzero EZ sum."""
    if len(pi) <= DENSE_CAP:
        table = host_table(pi)
        sid = table.id_of(sigma)
        ne = int(table.normal_counts[sid])
        candidates = table.nonzero_ez
        if not candidates:
            return ne, []
        out = []
        # containment of sigma: per candidate submask scan, or one upward closure
        scan_cost = sum(1 << int(table.length[c]) for c in candidates)
        if scan_cost > table.n << table.n:
            up = table.above(sid)
            hits = [c for c in candidates if up[c]]
        else:
            hits = [c for c in candidates if sid in set(table.below(c).tolist())]
        for c in sorted(hits, key=lambda c: table.pattern(c).sort_key):
            out.append((table.pattern(c), candidates[c]))
        return ne, out
    ne = count_normal(sigma, pi)
    out = []
    for lam in interval_elements(sigma, pi):
        if lam == pi:
            continue
        value = ez_sign_sum(lam, pi)
        if value:
            out.append((lam, value))
    return ne, out


def mobius_formula(sigma: Permutation, pi: Permutation, recursive_below: int = RECURSIVE_BELOW) -> MobiusReport:
    """Two-term formula. Inner values ``mu(sigma, lam)`` reuse the formula, or the
    recursive oracle when ``|lam| - |sigma| <= recursive_below`` (use -1 to disable)."""
    start = time.perf_counter()
    if not contains(sigma, pi):
        return MobiusReport(sigma, pi, 0, 0, 0, 0, "formula", time.perf_counter() - start)
    ne, contributors = _contributors(sigma, pi)
    ne_term = _sign(pi, sigma) * ne
    second = 0
    for lam, value in contributors:
        second += _mu_inner(sigma, lam, recursive_below) * value
    mu = ne_term + second
    return MobiusReport(sigma, pi, mu, ne, ne_term, second, "formula", time.perf_counter() - start)


def _mu_inner(sigma: Permutation, lam: Permutation, recursive_below: int) -> int:
    if lam == sigma:
        return 1
    if len(lam) - len(sigma) <= recursive_below:
        return mobius_recursive(sigma, lam)
    key = (sigma.letters, lam.letters, recursive_below)
    if key not in _FORMULA_MEMO:
        _FORMULA_MEMO[key] = mobius_formula(sigma, lam, recursive_below).mu
    return _FORMULA_MEMO[key]


# single intervals


@dataclass(frozen=True)
class SingleReport:
    single: bool
    witness: Permutation | None = None


def has_single_block(lam: Permutation, pi: Permutation) -> bool:
    """Is some position of ``pi`` missed by every rightmost representative of ``lam``?"""
    union = 0
    for r in rightmost_reps(lam, pi):
        union |= r.bits
    return union != (1 << len(pi)) - 1


def is_single(sigma: Permutation, pi: Permutation) -> SingleReport:
    if not contains(sigma, pi):
        raise ValueError(f"{sigma} is not contained in {pi}")
    if len(pi) <= DENSE_CAP:
        table = host_table(pi)
        sid = table.id_of(sigma)
        blockless = table.blockless
        if len(blockless) == 0:
            return SingleReport(True)
        up = table.above(sid)
        bad = [table.pattern(int(c)) for c in blockless if up[c]]
        if not bad:
            return SingleReport(True)
        return SingleReport(False, min(bad, key=lambda p: p.sort_key))
    for lam in interval_elements(sigma, pi):
        if lam != pi and not has_single_block(lam, pi):
            return SingleReport(False, lam)
    return SingleReport(True)


def mobius_single(sigma: Permutation, pi: Permutation) -> int:
    """Signed normal-embedding count; refuses intervals that are not single."""
    report = is_single(sigma, pi)
    if not report.single:
        raise NotSingleError(f"[{sigma}, {pi}] is not single (witness {report.witness})")
    return _sign(pi, sigma) * count_normal(sigma, pi)


def mobius(sigma: Permutation, pi: Permutation, method: str = "auto") -> MobiusReport:
    """Dispatch to ``recursive``, ``formula``, ``single`` or ``auto``."""
    start = time.perf_counter()
    if method == "formula":
        return mobius_formula(sigma, pi)
    if method == "recursive":
        mu = mobius_recursive(sigma, pi)
        ne = count_normal(sigma, pi)
        ne_term = _sign(pi, sigma) * ne
        return MobiusReport(sigma, pi, mu, ne, ne_term, mu - ne_term, "recursive", time.perf_counter() - start)
    if method in ("single", "auto"):
        if not contains(sigma, pi):
            return mobius_formula(sigma, pi)
        if is_single(sigma, pi).single:
            ne = count_normal(sigma, pi)
            ne_term = _sign(pi, sigma) * ne
            return MobiusReport(sigma, pi, ne_term, ne, ne_term, 0, "single_shortcut", time.perf_counter() - start)
        if method == "single":
            raise NotSingleError(f"[{sigma}, {pi}] is not single")
        return mobius_formula(sigma, pi)
    raise ValueError(f"unknown method {method!r}")


# closed forms for repeated components


def _binom(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def _signed(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def ez_sum_closed_power(lam: Permutation, m: int, n: int) -> int:
    """EZ sum of ``lam^m`` in ``lam^n`` for indecomposable ``lam`` of length > 1."""
    if len(lam) < 2 or not is_indecomposable(lam):
        raise ValueError(f"{lam} must be indecomposable of length > 1")
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    return _signed(n - m - 1) * _binom(n - 1, m - 1)


def equal_component_sequences(pi: Permutation) -> list[tuple[int, int, Permutation]]:
    """Maximal runs of at least two equal consecutive components other than ``1``,
    as ``(index of first component, length, component)``."""
    comps = sum_components(pi)
    out = []
    i = 0
    while i < len(comps):
        j = i
        while j + 1 < len(comps) and comps[j + 1] == comps[i]:
            j += 1
        if j > i and len(comps[i]) > 1:
            out.append((i, j - i + 1, comps[i]))
        i = j + 1
    return out


def reduce_sequence(pi: Permutation, run_start: int, alpha: int, ell: int) -> Permutation:
    """Shorten components ``run_start .. run_start + alpha - 1`` (0-based) to ``ell`` copies."""
    comps = sum_components(pi)
    if run_start < 0 or run_start + alpha > len(comps):
        raise ValueError("component indices out of range")
    block = comps[run_start : run_start + alpha]
    if alpha < 2 or any(c != block[0] for c in block):
        raise ValueError("components are not equal")
    if not 0 <= ell <= alpha:
        raise ValueError("need 0 <= ell <= alpha")
    kept = comps[:run_start] + block[:ell] + comps[run_start + alpha :]
    if not kept:
        raise ValueError("reduction removes every letter")
    return direct_sum_of(kept)


def ez_sum_closed_consecutive(pi: Permutation, run_start: int, alpha: int, ell: int) -> int:
    """EZ sum of the reduced permutation in ``pi`` for a sequence of ``alpha`` equal
    components starting at component ``run_start`` (0-based), reduced to ``ell``."""
    reduce_sequence(pi, run_start, alpha, ell)
    if len(sum_components(pi)[run_start]) < 2:
        raise ValueError("the repeated component must have length > 1")
    return _signed(alpha - ell - 1) * _binom(alpha - 1, ell - 1)


@dataclass(frozen=True)
class ConjectureReport:
    lam: Permutation
    predicted: int
    brute: int | None
    agree: bool | None


def conjecture_gen_repeat(pi: Permutation, reductions: list[tuple[int, int]]) -> ConjectureReport:
    """Predicted EZ sum after shortening several equal-component sequences,
    checked against the direct sum when that is within the caps.

    ``reductions`` pairs an index into :func:`equal_component_sequences` with
    the new length; sequences not named keep their length.
    """
    seqs = equal_component_sequences(pi)
    if not seqs:
        raise ValueError(f"{pi} has no sequence of equal components")
    ells = {i: a for i, (_, a, _) in enumerate(seqs)}
    for idx, ell in reductions:
        if idx not in ells:
            raise ValueError(f"no sequence with index {idx}")
        if not 0 <= ell <= seqs[idx][1]:
            raise ValueError("need 0 <= ell <= alpha")
        ells[idx] = ell
    comps = sum_components(pi)
    kept = []
    pos = 0
    for i, (start, alpha, _) in enumerate(seqs):
        kept += comps[pos:start] + comps[start : start + ells[i]]
        pos = start + alpha
    kept += comps[pos:]
    if not kept:
        raise ValueError("reduction removes every letter")
    lam = direct_sum_of(kept)
    alpha_total = sum(a for _, a, _ in seqs)
    ell_total = sum(ells.values())
    predicted = _signed(alpha_total - ell_total - 1)
    for i, (_, alpha, _) in enumerate(seqs):
        predicted *= _binom(alpha - 1, ells[i] - 1)
    try:
        brute = ez_sign_sum(lam, pi)
    except CapExceeded:
        return ConjectureReport(lam, predicted, None, None)
    return ConjectureReport(lam, predicted, brute, brute == predicted)


__all__ = [
    "MobiusReport",
    "NotSingleError",
    "SingleReport",
    "ConjectureReport",
    "interval_elements",
    "interval_poset",
    "mobius_recursive",
    "mobius_formula",
    "mobius",
    "has_single_block",
    "is_single",
    "mobius_single",
    "ez_sum_closed_power",
    "ez_sum_closed_consecutive",
    "equal_component_sequences",
    "reduce_sequence",
    "conjecture_gen_repeat",
    "clear_caches",
    "power",
    "from_word",
]
