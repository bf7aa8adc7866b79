"""Dense tables over every position subset of a host permutation.

For a host ``pi`` of length ``n`` the table assigns each of the ``2**n``
position masks the id of the pattern it spans. Ids are handed out level by
level (by mask size), so a larger id never belongs to a shorter pattern.
The pattern of a mask is fixed by the pattern of the mask without its
lowest position together with the rank of that position's letter, which
lets a whole level be labelled with one ``np.unique`` call.
"""

from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from . import kernels
from .embeddings import ez_from_zero_masks
from .errors import CapExceeded
from .perm import Permutation, adjacencies

DENSE_CAP = 22


def _submasks(mask: int) -> np.ndarray:
    """All submasks of ``mask`` as an int64 array."""
    positions = [i for i in range(mask.bit_length()) if mask >> i & 1]
    out = np.zeros(1, dtype=np.int64)
    for p in positions:
        out = np.concatenate([out, out | (1 << p)])
    return out


class HostTable:
    def __init__(self, pi: Permutation):
        n = len(pi)
        if n > DENSE_CAP:
            raise CapExceeded(f"dense table for length {n} exceeds the cap {DENSE_CAP}")
        self.pi = pi
        self.n = n
        self.full = (1 << n) - 1
        masks = np.arange(1 << n, dtype=np.int64)
        size = np.bitwise_count(masks).astype(np.int64)
        below = np.array(
            [sum(1 << q for q in range(n) if pi[q] < pi[p]) for p in range(n)] or [0],
            dtype=np.int64,
        )
        low = masks & -masks
        lowpos = np.zeros_like(masks)
        lowpos[1:] = np.bitwise_count(low[1:] - 1)
        rest = masks ^ low
        rank = np.bitwise_count(masks & below[lowpos]).astype(np.int64)

        ids = np.zeros(1 << n, dtype=np.int64)
        level_start = [0, 1]
        next_id = 1
        for k in range(1, n + 1):
            level = np.flatnonzero(size == k)
            key = ids[rest[level]] * (n + 1) + rank[level]
            uniq, inverse = np.unique(key, return_inverse=True)
            ids[level] = next_id + inverse
            next_id += len(uniq)
            level_start.append(next_id)
        self.ids = ids
        self.size = size
        self.count = next_id
        self.level_start = level_start
        first = np.zeros(next_id, dtype=np.int64)
        first[ids[::-1]] = masks[::-1]
        self.first = first
        self.length = size[first]
        self._masks = masks

    # patterns

    def pattern(self, pid: int) -> Permutation:
        return self.pi.pattern_at(int(self.first[pid]))

    def id_of(self, sigma: Permutation) -> int | None:
        """Id of ``sigma`` or ``None`` when it does not occur."""
        found = kernels.occurrence_masks(sigma.letters, self.pi.letters, 1)
        return int(self.ids[found[0]]) if found else None

    @property
    def top_id(self) -> int:
        return int(self.ids[self.full])

    def ids_of_length(self, k: int) -> range:
        return range(self.level_start[k], self.level_start[k + 1])

    def below(self, pid: int) -> np.ndarray:
        """Ids of all patterns contained in pattern ``pid`` (itself and empty included)."""
        return np.unique(self.ids[_submasks(int(self.first[pid]))])

    def above(self, pid: int) -> np.ndarray:
        """Boolean array over ids: does the pattern contain pattern ``pid``?"""
        hit = self.ids == pid
        n = self.n
        for i in range(n):
            view = hit.reshape(-1, 2, 1 << i)
            view[:, 1, :] |= view[:, 0, :]
        return hit[self.first]

    # embeddings

    @cached_property
    def adj(self):
        return adjacencies(self.pi)

    @cached_property
    def _reps(self):
        rep = np.zeros_like(self._masks)
        for run in self.adj.runs:
            run_bits = run.bits
            table = np.array([run.rightmost_bits(c) for c in range(run.length + 1)], dtype=np.int64)
            rep |= table[np.bitwise_count(self._masks & run_bits)]
        pairs = np.unique(self.ids * (1 << self.n) + rep)
        rep_ids = pairs >> self.n
        rep_masks = pairs & self.full
        offsets = np.searchsorted(rep_ids, np.arange(self.count + 1))
        return rep_masks, offsets

    def reps(self, pid: int) -> np.ndarray:
        """Right-packed representative masks of pattern ``pid``."""
        rep_masks, offsets = self._reps
        return rep_masks[offsets[pid] : offsets[pid + 1]]

    @cached_property
    def rep_union(self) -> np.ndarray:
        rep_masks, offsets = self._reps
        return np.bitwise_or.reduceat(rep_masks, offsets[:-1])

    @cached_property
    def normal_counts(self) -> np.ndarray:
        tails = self.adj.tail_bits
        normal = self.ids[(self._masks & tails) == tails]
        return np.bincount(normal, minlength=self.count)

    @cached_property
    def nonzero_ez(self) -> dict[int, int]:
        """EZ sums that are nonzero, keyed by pattern id, for patterns other than the host."""
        out = {}
        top = self.top_id
        for pid in np.flatnonzero(self.rep_union == self.full):
            pid = int(pid)
            if pid == top or pid == 0:
                continue
            value = self.ez(pid)
            if value:
                out[pid] = value
        return out

    @cached_property
    def blockless(self) -> np.ndarray:
        """Ids (other than the host) whose representatives miss no position of the host."""
        out = np.flatnonzero(self.rep_union == self.full)
        return out[(out != self.top_id) & (out != 0)]

    def ez(self, pid: int) -> int:
        zero = [int(self.full ^ r) for r in self.reps(pid)]
        return ez_from_zero_masks(zero, self.n)


@lru_cache(maxsize=2048)
def _small_table(pi: Permutation) -> HostTable:
    return HostTable(pi)


@lru_cache(maxsize=4)
def _large_table(pi: Permutation) -> HostTable:
    return HostTable(pi)


def host_table(pi: Permutation) -> HostTable:
    return _small_table(pi) if len(pi) <= 12 else _large_table(pi)


def clear_tables():
    _small_table.cache_clear()
    _large_table.cache_clear()
