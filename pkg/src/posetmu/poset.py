"""Explicit finite posets and their Moebius functions.

A :class:`FinitePoset` keeps its elements in a tuple and the order as a
read-only boolean matrix holding the reflexive-transitive closure, so
``leq[i, j]`` is true iff ``elements[i] <= elements[j]``.

The Moebius function *of a poset* always means the value between fresh
bottom and top elements adjoined to it, so the empty poset has value -1
and any poset with a minimum or maximum has value 0.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceeded

BOOLEAN_CAP = 12
CROSSCUT_CAP = 25


class PosetError(ValueError):
    pass


class _Bound:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name



# labels for the collapsed points of truncated Boolean lattices
BOTTOM = _Bound("0̂")
TOP = _Bound("1̂")


class FinitePoset:
    """Immutable finite poset over hashable labels."""

    def __init__(self, elements: Sequence[Hashable], leq: np.ndarray, check: bool = True):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise PosetError("duplicate elements")
        leq = np.array(leq, dtype=bool).reshape(len(self.elements), len(self.elements))
        leq.flags.writeable = False
        self.leq = leq
        if check:
            self.check()

    # construction

    @classmethod
    def from_relations(cls, elements: Iterable[Hashable], relations: Iterable[tuple]) -> "FinitePoset":
        """Poset generated by pairs ``(a, b)`` meaning ``a <= b``."""
        elements = list(elements)
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        leq = np.eye(n, dtype=bool)
        for a, b in relations:
            leq[index[a], index[b]] = True
        return cls(elements, transitive_closure(leq))

    @classmethod
    def from_order(cls, elements: Iterable[Hashable], le: Callable[[object, object], bool]) -> "FinitePoset":
        elements = list(elements)
        n = len(elements)
        leq = np.zeros((n, n), dtype=bool)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                leq[i, j] = i == j or bool(le(a, b))
        return cls(elements, leq)

    def check(self):
        leq = self.leq
        if not leq.diagonal().all():
            raise PosetError("relation is not reflexive")
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            raise PosetError("relation is not antisymmetric")
        if len(self) and (_bool_matmul(leq, leq) & ~leq).any():
            raise PosetError("relation is not transitive")

    # queries

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __eq__(self, other):
        if not isinstance(other, FinitePoset) or set(self.elements) != set(other.elements):
            return False
        perm = [other.index[e] for e in self.elements]
        return bool((other.leq[np.ix_(perm, perm)] == self.leq).all())

    def __hash__(self):
        return hash(frozenset(self.elements))

    def __repr__(self):
        return f"FinitePoset({len(self)} elements)"

    def le(self, a, b) -> bool:
        return bool(self.leq[self.index[a], self.index[b]])

    def lt(self, a, b) -> bool:
        return a != b and self.le(a, b)

    def below(self, a, strict: bool = True) -> list:
        i = self.index[a]
        return [self.elements[j] for j in np.flatnonzero(self.leq[:, i]) if not (strict and j == i)]

    def above(self, a, strict: bool = True) -> list:
        i = self.index[a]
        return [self.elements[j] for j in np.flatnonzero(self.leq[i]) if not (strict and j == i)]

    def minimal(self) -> list:
        counts = self.leq.sum(axis=0)
        return [e for e, c in zip(self.elements, counts) if c == 1]

    def maximal(self) -> list:
        counts = self.leq.sum(axis=1)
        return [e for e, c in zip(self.elements, counts) if c == 1]

    @property
    def bottom(self):
        """The minimum element, or ``None``."""
        mins = self.minimal()
        if len(mins) == 1 and self.leq[self.index[mins[0]]].all():
            return mins[0]
        return None

    @property
    def top(self):
        maxs = self.maximal()
        if len(maxs) == 1 and self.leq[:, self.index[maxs[0]]].all():
            return maxs[0]
        return None

    def covers(self) -> list[tuple]:
        """Pairs ``(a, b)`` with ``b`` covering ``a``."""
        lt = self.leq.copy()
        np.fill_diagonal(lt, False)
        cover = lt & ~_bool_matmul(lt, lt)
        return [(self.elements[i], self.elements[j]) for i, j in zip(*np.nonzero(cover))]

    def linear_extension(self) -> list[int]:
        """Element indices ordered so that smaller elements come first."""
        return list(np.argsort(self.leq.sum(axis=0), kind="stable"))

    # derived posets

    def subposet(self, elements: Iterable[Hashable]) -> "FinitePoset":
        elements = list(elements)
        idx = [self.index[e] for e in elements]
        return FinitePoset(elements, self.leq[np.ix_(idx, idx)], check=False)

    def interior(self) -> "FinitePoset":
        """Drop the minimum and maximum (both must exist)."""
        lo, hi = self.bottom, self.top
        if lo is None or hi is None:
            raise PosetError("interior needs both a minimum and a maximum")
        return self.subposet(e for e in self.elements if e != lo and e != hi)

    def bounded(self) -> "FinitePoset":
        """Adjoin a new bottom and a new top element (first and last)."""
        n = len(self)
        leq = np.zeros((n + 2, n + 2), dtype=bool)
        leq[1:-1, 1:-1] = self.leq
        leq[0, :] = True
        leq[:, -1] = True
        return FinitePoset((_Bound("0̂"),) + self.elements + (_Bound("1̂"),), leq, check=False)

    def relabel(self, mapping: Mapping | Callable) -> "FinitePoset":
        fn = mapping if callable(mapping) else mapping.__getitem__
        return FinitePoset([fn(e) for e in self.elements], self.leq, check=False)

    # export

    def to_dot(self, label: Callable[[object], str] = str, name: str = "P") -> str:
        ids = {e: f"n{i}" for i, e in enumerate(self.elements)}
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
        for e in self.elements:
            text = label(e).replace('"', '\\"')
            lines.append(f'  {ids[e]} [label="{text}"];')
        for a, b in self.covers():
            lines.append(f"  {ids[a]} -> {ids[b]} [arrowhead=none];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_edge_list(self, label: Callable[[object], str] = str) -> str:
        lines = [label(e) for e in self.elements]
        lines += [f"{label(a)} < {label(b)}" for a, b in self.covers()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "FinitePoset":
        """Parse lines ``a < b`` and bare element declarations; ``#`` starts a comment."""
        elements: dict[str, None] = {}
        relations = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in re.split(r"<", line)]
            if any(not p for p in parts):
                raise PosetError(f"cannot parse line {raw!r}")
            for p in parts:
                elements.setdefault(p)
            relations.extend(zip(parts, parts[1:]))
        return cls.from_relations(list(elements), relations)


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int32) @ b.astype(np.int32)) > 0


def transitive_closure(leq: np.ndarray) -> np.ndarray:
    closure = np.array(leq, dtype=bool)
    for k in range(len(closure)):
        closure |= np.outer(closure[:, k], closure[k])
    return closure


@dataclass(frozen=True)
class PosetMap:
    source: FinitePoset
    target: FinitePoset
    assignment: Mapping

    def __call__(self, x):
        return self.assignment[x]

    def is_order_preserving(self) -> bool:
        s = self.source
        for i, j in zip(*np.nonzero(s.leq)):
            if not self.target.le(self(s.elements[i]), self(s.elements[j])):
                return False
        return True

    def is_surjective(self) -> bool:
        return set(self(x) for x in self.source) == set(self.target.elements)

    def preimage(self, targets: Iterable) -> list:
        targets = set(targets)
        return [x for x in self.source if self(x) in targets]


# Moebius function and Euler characteristic


def mobius_of(p: FinitePoset) -> int:
    """Moebius value between fresh bounds adjoined to ``p``."""
    below = [np.flatnonzero(p.leq[:, i]) for i in range(len(p))]
    mu = [0] * len(p)
    for i in p.linear_extension():
        # mu(0, x) = -(mu(0, 0) + sum over 0 < y < x)
        mu[i] = -1 - sum(mu[j] for j in below[i] if j != i)
    return -1 - sum(mu)


def mobius_between(p: FinitePoset, a, b) -> int:
    if not p.le(a, b):
        raise PosetError(f"{a!r} is not below {b!r}")
    ia, ib = p.index[a], p.index[b]
    inside = [i for i in p.linear_extension() if p.leq[ia, i] and p.leq[i, ib]]
    mu = {}
    for i in inside:
        if i == ia:
            mu[i] = 1
        else:
            mu[i] = -sum(mu[j] for j in inside if j in mu and p.leq[j, i] and j != i)
    return mu[ib]


def order_complex_f_vector(p: FinitePoset) -> list[int]:
    """``f[k]`` counts the chains with ``k`` elements; ``f[0] = 1`` is the empty chain."""
    n = len(p)
    ending = [None] * n  # ending[x][k]: chains with k elements whose maximum is x
    for i in p.linear_extension():
        counts = [0, 1]
        for j in np.flatnonzero(p.leq[:, i]):
            if j == i:
                continue
            sub = ending[j]
            if len(sub) + 1 > len(counts):
                counts.extend([0] * (len(sub) + 1 - len(counts)))
            for k in range(1, len(sub)):
                counts[k + 1] += sub[k]
        ending[i] = counts
    f = [1]
    for counts in ending:
        if len(counts) > len(f):
            f.extend([0] * (len(counts) - len(f)))
        for k in range(1, len(counts)):
            f[k] += counts[k]
    return f


def reduced_euler_characteristic(p: FinitePoset) -> int:
    """Alternating face count of the order complex, empty face included."""
    f = order_complex_f_vector(p)
    # a chain of k elements is a face of dimension k - 1
    return sum(-fk if k % 2 == 0 else fk for k, fk in enumerate(f))


# constructions


def product(p: FinitePoset, q: FinitePoset) -> FinitePoset:
    elements = [(a, b) for a in p.elements for b in q.elements]
    leq = np.einsum("ij,kl->ikjl", p.leq, q.leq).reshape(len(elements), len(elements))
    return FinitePoset(elements, leq, check=False)


def dual(p: FinitePoset) -> FinitePoset:
    return FinitePoset(p.elements, p.leq.T, check=False)


def chain(n: int) -> FinitePoset:
    return FinitePoset(range(n), np.triu(np.ones((n, n), dtype=bool)), check=False)


def antichain(n: int) -> FinitePoset:
    return FinitePoset(range(n), np.eye(n, dtype=bool), check=False)


def _subset_poset(elements: list) -> FinitePoset:
    def le(a, b):
        if a is BOTTOM or b is TOP:
            return True
        if a is TOP or b is BOTTOM:
            return False
        return a <= b

    return FinitePoset.from_order(elements, le)


def boolean_lattice(n: int) -> FinitePoset:
    if n > BOOLEAN_CAP:
        raise CapExceeded(f"Boolean lattice B_{n} exceeds the cap n <= {BOOLEAN_CAP}")
    ground = range(1, n + 1)
    subsets = [frozenset(c) for r in range(n + 1) for c in itertools.combinations(ground, r)]
    return _subset_poset(subsets)


def truncated_boolean(n: int, k: int, mode: str) -> FinitePoset:
    """``le``: subsets of size <= k under a single top ``TOP``.
    ``ge``: a single bottom ``BOTTOM`` under the subsets of size >= k.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if n > BOOLEAN_CAP:
        raise CapExceeded(f"truncated Boolean lattice on {n} points exceeds the cap n <= {BOOLEAN_CAP}")
    ground = range(1, n + 1)
    if mode == "le":
        sizes = range(0, k + 1)
    elif mode == "ge":
        sizes = range(k, n + 1)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    subsets = [frozenset(c) for r in sizes for c in itertools.combinations(ground, r)]
    if mode == "le":
        return _subset_poset(subsets + [TOP])
    return _subset_poset([BOTTOM] + subsets)


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def mobius_truncated_boolean(n: int, k: int, mode: str) -> int:
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if mode == "le":
        return (-1) ** ((k - 1) % 2) * _binom(n - 1, k)
    if mode == "ge":
        return (-1) ** ((n - k - 1) % 2) * _binom(n - 1, k - 1)
    raise ValueError(f"unknown mode {mode!r}")


# lattices


class _Joins:
    def __init__(self, p: FinitePoset):
        self.p = p
        self.cache: dict[tuple[int, int], int] = {}

    def __call__(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        if key not in self.cache:
            leq = self.p.leq
            upper = leq[i] & leq[j]
            cands = np.flatnonzero(upper)
            least = [u for u in cands if (leq[u] >= upper).all()]
            if len(least) != 1:
                raise PosetError("not a lattice: a pair has no least upper bound")
            self.cache[key] = int(least[0])
        return self.cache[key]


def is_lattice(p: FinitePoset) -> bool:
    if len(p) == 0 or p.bottom is None or p.top is None:
        return False
    join = _Joins(p)
    try:
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                join(i, j)
    except PosetError:
        return False
    return True


def atoms(p: FinitePoset) -> list:
    lo = p.bottom
    if lo is None:
        raise PosetError("poset has no minimum")
    return [b for a, b in p.covers() if a == lo]


def crosscut_sum(lattice: FinitePoset, x: Iterable) -> int:
    """Sum of (-1)^|A| over subsets A of ``x`` whose join is the top."""
    if not is_lattice(lattice):
        raise PosetError("not a lattice")
    lo, hi = lattice.bottom, lattice.top
    xs = list(dict.fromkeys(x))
    if lo in xs:
        raise PosetError("the crosscut may not contain the bottom element")
    for s in lattice.elements:
        if s != lo and not any(lattice.le(t, s) for t in xs):
            raise PosetError(f"{s!r} lies above no element of the crosscut")
    if len(xs) > CROSSCUT_CAP:
        raise CapExceeded(f"crosscut of size {len(xs)} exceeds the cap {CROSSCUT_CAP}")
    join = _Joins(lattice)
    idx = [lattice.index[t] for t in xs]
    top = lattice.index[hi]
    m = len(idx)
    total = 0

    def walk(start, cur, size):
        nonlocal total
        for j in range(start, m):
            nxt = idx[j] if cur is None else join(cur, idx[j])
            if nxt == top:
                # supersets of this set also join to the top and cancel unless none remain
                if j == m - 1:
                    total += (-1) ** ((size + 1) % 2)
                continue
            walk(j + 1, nxt, size + 1)

    walk(0, None, 0)
    if lo == hi:
        total += 1
    return total


# fibrations


@dataclass(frozen=True)
class FibrationReport:
    condition_holds: bool
    lhs: int
    rhs: int


def fibration_mobius_check(f: PosetMap) -> FibrationReport:
    """Compare ``mu(Q)`` with ``mu(P) + sum_q mu(Q_<q) mu(f^-1(Q_>=q))``.

    ``condition_holds`` reports whether ``f(P_<p) = Q_<q`` for every ``q`` and
    every ``p`` over it; the two sides agree whenever it does.
    """
    if not f.is_order_preserving():
        raise PosetError("map is not order-preserving")
    if not f.is_surjective():
        raise PosetError("map is not surjective")
    P, Q = f.source, f.target
    holds = True
    for p in P:
        q = f(p)
        if set(f(x) for x in P.below(p)) != set(Q.below(q)):
            holds = False
            break
    lhs = mobius_of(Q)
    rhs = mobius_of(P)
    for q in Q:
        under = Q.subposet(Q.below(q))
        over = P.subposet(f.preimage(Q.above(q, strict=False)))
        rhs += mobius_of(under) * mobius_of(over)
    return FibrationReport(holds, lhs, rhs)
