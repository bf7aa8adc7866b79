"""Normal embeddings, adjacency decompositions of embeddings and the EZ sum.

An embedding of ``sigma`` in ``pi`` is handled as an :class:`EmbeddingMask`
(the set of positions it uses). Two embeddings are equivalent when they use
the same number of letters from every adjacency of ``pi``; the rightmost
member of a class takes, inside each adjacency, the rightmost slots.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from . import kernels
from .errors import CapExceeded
from .perm import (
    DECREASING,
    INCREASING,
    AdjacencyDecomposition,
    EmbeddingMask,
    Permutation,
    PermutationError,
    adjacencies,
    embeddings_of,
    format_word,
)
from .poset import FinitePoset

DEFAULT_EZ_CAP = 24
DEFINITION_CAP = 20
FACE_BITMAP_BITS = 26
A_POSET_CAP = 5000


def ez_cap() -> int:
    """Largest representative set enumerated subset by subset (``POSETMU_EZ_CAP``)."""
    value = os.environ.get("POSETMU_EZ_CAP")
    return int(value) if value else DEFAULT_EZ_CAP


@dataclass(frozen=True)
class EtaHat:
    """Letters an embedding takes from each adjacency of the host.

    ``counts[i]`` is the number of letters in adjacency ``i`` (0 means empty);
    ``shape`` holds the adjacency lengths and directions of the host.
    """

    counts: tuple[int, ...]
    shape: tuple[tuple[int, str], ...]

    @property
    def components(self) -> list:
        return [None if c == 0 else (c, d) for c, (_, d) in zip(self.counts, self.shape)]

    def __le__(self, other: "EtaHat") -> bool:
        return all(a <= b for a, b in zip(self.counts, other.counts))

    def __lt__(self, other: "EtaHat") -> bool:
        return self != other and self <= other

    def __str__(self):
        parts = []
        for c, (_, d) in zip(self.counts, self.shape):
            if c == 0:
                parts.append("∅")
            elif d == INCREASING:
                parts.append("".join(str(i) for i in range(1, c + 1)))
            elif d == DECREASING:
                parts.append("".join(str(i) for i in range(c, 0, -1)))
            else:
                parts.append("1")
        return "(" + ",".join(parts) + ")"

    def bits(self, adj: AdjacencyDecomposition) -> int:
        """Rightmost embedding with these counts."""
        out = 0
        for run, c in zip(adj.runs, self.counts):
            out |= run.rightmost_bits(c)
        return out


def _check_mask(mask: EmbeddingMask, pi: Permutation):
    if mask.host_length != len(pi):
        raise PermutationError(f"mask for a host of length {mask.host_length}, got length {len(pi)}")


def embedding_to_word(mask: EmbeddingMask, pi: Permutation) -> tuple[int, ...]:
    """Host letters at the mask positions, 0 elsewhere."""
    _check_mask(mask, pi)
    return tuple(x if mask.bits >> i & 1 else 0 for i, x in enumerate(pi.letters))


def format_embedding(mask: EmbeddingMask, pi: Permutation) -> str:
    return format_word(embedding_to_word(mask, pi))


def is_normal(mask: EmbeddingMask, pi: Permutation) -> bool:
    _check_mask(mask, pi)
    tails = adjacencies(pi).tail_bits
    return mask.bits & tails == tails


def count_normal(sigma: Permutation, pi: Permutation) -> int:
    """Number of embeddings of ``sigma`` in ``pi`` covering every tail position."""
    tails = adjacencies(pi).tail_bits
    return sum(1 for m in embeddings_of(sigma, pi) if m.bits & tails == tails)


def run_counts(bits: int, adj: AdjacencyDecomposition) -> tuple[int, ...]:
    return tuple((bits & run.bits).bit_count() for run in adj.runs)


def right_pack(bits: int, adj: AdjacencyDecomposition) -> int:
    out = 0
    for run in adj.runs:
        out |= run.rightmost_bits((bits & run.bits).bit_count())
    return out


def eta_hat(mask: EmbeddingMask, pi: Permutation) -> EtaHat:
    _check_mask(mask, pi)
    adj = adjacencies(pi)
    shape = tuple((r.length, r.direction) for r in adj.runs)
    return EtaHat(run_counts(mask.bits, adj), shape)


def pi_hat(pi: Permutation) -> EtaHat:
    return eta_hat(EmbeddingMask((1 << len(pi)) - 1, len(pi)), pi)


def rightmost_reps(sigma: Permutation, pi: Permutation) -> list[EmbeddingMask]:
    """One right-packed representative per equivalence class of embeddings."""
    adj = adjacencies(pi)
    reps = {right_pack(m.bits, adj) for m in embeddings_of(sigma, pi)}
    out = [EmbeddingMask(b, len(pi)) for b in reps]
    return sorted(out, key=lambda m: m.sort_key)


def ez_from_zero_masks(zero_masks, n: int, method: str = "auto", cap: int | None = None) -> int:
    """Sum of (-1)^|S| over nonempty sets of zero masks with empty intersection.

    ``subsets`` walks the sets directly (at most ``cap`` masks), ``complex``
    uses the equivalent alternating face count of the simplicial complex the
    zero masks generate, ``definition`` is plain enumeration for testing.
    """
    zs = list(dict.fromkeys(zero_masks))
    m = len(zs)
    if m == 0:
        return 0
    if cap is None:
        cap = ez_cap()
    if method == "definition":
        if m > DEFINITION_CAP:
            raise CapExceeded(f"{m} representatives exceed the enumeration cap {DEFINITION_CAP}")
        total = 0
        for r in range(1, m + 1):
            for combo in itertools.combinations(zs, r):
                inter = -1
                for z in combo:
                    inter &= z
                if inter == 0:
                    total += (-1) ** r
        return total
    common = -1
    for z in zs:
        common &= z
    if common:
        return 0
    if method == "auto":
        d = zs[0].bit_count()
        complex_cost = min(m << d, 1 << n) * max(d, 1)
        fits_complex = n <= FACE_BITMAP_BITS or (m << d) <= 1 << 22
        if m <= cap and (not fits_complex or m < 40 and (1 << m) <= complex_cost):
            method = "subsets"
        elif fits_complex:
            method = "complex"
        else:
            raise CapExceeded(
                f"{m} representatives on a host of length {n}: both EZ algorithms exceed their caps"
            )
    if method == "subsets":
        if m > cap:
            raise CapExceeded(f"{m} representatives exceed the EZ cap {cap}")
        return kernels.ez_subset_sum(zs)
    if method == "complex":
        return -kernels.signed_face_sum(zs, n)
    raise ValueError(f"unknown method {method!r}")


def ez_sign_sum(lam: Permutation, pi: Permutation, method: str = "auto", cap: int | None = None) -> int:
    """Sum of (-1)^|S| over the sets S of rightmost representatives of
    ``lam`` in ``pi`` whose zero sets have empty intersection."""
    reps = rightmost_reps(lam, pi)
    return ez_from_zero_masks([r.zero_bits for r in reps], len(pi), method, cap)


def ez_sets(lam: Permutation, pi: Permutation) -> list[frozenset[EmbeddingMask]]:
    """Explicit list of the sets counted by :func:`ez_sign_sum` (small cases only)."""
    reps = rightmost_reps(lam, pi)
    if len(reps) > DEFINITION_CAP:
        raise CapExceeded(f"{len(reps)} representatives exceed the enumeration cap {DEFINITION_CAP}")
    out = []
    for r in range(1, len(reps) + 1):
        for combo in itertools.combinations(reps, r):
            inter = -1
            for m in combo:
                inter &= m.zero_bits
            if inter == 0:
                out.append(frozenset(combo))
    return out


def join(etas) -> EtaHat:
    etas = list(etas)
    counts = tuple(max(c) for c in zip(*(e.counts for e in etas)))
    return EtaHat(counts, etas[0].shape)


def open_box(eta: EtaHat, top: EtaHat) -> set[EtaHat]:
    """Elements strictly between ``eta`` and ``top`` in the product of chains."""
    ranges = [range(a, b + 1) for a, b in zip(eta.counts, top.counts)]
    out = {EtaHat(c, eta.shape) for c in itertools.product(*ranges)}
    out.discard(eta)
    out.discard(top)
    return out


def build_A_poset(sigma: Permutation, pi: Permutation, cap: int = A_POSET_CAP):
    """Union of the open boxes above the rightmost representatives of ``sigma``.

    Returns the poset on :class:`EtaHat` values (componentwise order) and the
    projection sending each element to the permutation it embeds.
    """
    if len(sigma) >= len(pi):
        raise ValueError("need |sigma| < |pi|")
    adj = adjacencies(pi)
    top = pi_hat(pi)
    size = 1
    for run in adj.runs:
        size *= run.length + 1
    elements: set[EtaHat] = set()
    for rep in rightmost_reps(sigma, pi):
        elements |= open_box(eta_hat(rep, pi), top)
        if len(elements) > cap:
            raise CapExceeded(f"A-poset exceeds {cap} elements")
    ordered = sorted(elements, key=lambda e: (sum(e.counts), e.counts))
    poset = FinitePoset.from_order(ordered, lambda a, b: a <= b)
    projection = {e: pi.pattern_at(e.bits(adj)) for e in ordered}
    return poset, projection
