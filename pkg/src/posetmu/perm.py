"""Permutations, pattern containment and adjacency structure.

Permutations are stored in one-line notation as tuples of the letters
``1..n``. Occurrences of a pattern are position sets of the host, stored
as integer bitmasks where bit ``i`` stands for (1-based) position ``i+1``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from . import kernels

MAX_LENGTH = 64
ENUMERATION_LIMIT = 10

INCREASING = "increasing"
DECREASING = "decreasing"
SINGLETON = "singleton"


class PermutationError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    letters: tuple[int, ...]

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        object.__setattr__(self, "letters", letters)
        n = len(letters)
        if n == 0:
            raise PermutationError("the empty permutation is not a poset element")
        if n > MAX_LENGTH:
            raise PermutationError(f"length {n} exceeds the supported maximum {MAX_LENGTH}")
        if sorted(letters) != list(range(1, n + 1)):
            raise PermutationError(f"{letters} is not a permutation of 1..{n}")

    @property
    def n(self) -> int:
        return len(self.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __str__(self):
        return format_word(self.letters)

    def __repr__(self):
        return f"Permutation({self})"

    @property
    def sort_key(self):
        """Length first, then lexicographic."""
        return (len(self.letters), self.letters)

    def pattern_at(self, bits: int) -> "Permutation":
        """The permutation formed by the letters at the positions in ``bits``."""
        return from_word([self.letters[i] for i in iter_bits(bits)])


@dataclass(frozen=True)
class EmbeddingMask:
    """Position set of an occurrence inside a host of length ``host_length``."""

    bits: int
    host_length: int

    def __post_init__(self):
        if self.bits >> self.host_length:
            raise PermutationError("mask has positions beyond the host length")

    def __len__(self):
        return self.bits.bit_count()

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in iter_bits(self.bits))

    @property
    def zero_bits(self) -> int:
        return ((1 << self.host_length) - 1) & ~self.bits

    @property
    def zero_set(self) -> frozenset[int]:
        return frozenset(i + 1 for i in iter_bits(self.zero_bits))

    @property
    def sort_key(self):
        return self.positions

    @classmethod
    def from_positions(cls, positions: Iterable[int], host_length: int) -> "EmbeddingMask":
        bits = 0
        for p in positions:
            if not 1 <= p <= host_length:
                raise PermutationError(f"position {p} outside 1..{host_length}")
            bits |= 1 << (p - 1)
        return cls(bits, host_length)

    @classmethod
    def from_word(cls, word: Sequence[int]) -> "EmbeddingMask":
        """Read the zero-padded display form, e.g. ``0300065``."""
        return cls.from_positions([i + 1 for i, x in enumerate(word) if x], len(word))


class Run(NamedTuple):
    start: int  # 1-based
    length: int
    direction: str

    @property
    def bits(self) -> int:
        return ((1 << self.length) - 1) << (self.start - 1)

    def rightmost_bits(self, count: int) -> int:
        """Bitmask of the ``count`` rightmost positions of the run."""
        return ((1 << count) - 1) << (self.start - 1 + self.length - count)


@dataclass(frozen=True)
class AdjacencyDecomposition:
    runs: tuple[Run, ...]
    tail_positions: frozenset[int]

    @property
    def tail_bits(self) -> int:
        bits = 0
        for p in self.tail_positions:
            bits |= 1 << (p - 1)
        return bits

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(r.length for r in self.runs)


def iter_bits(bits: int) -> Iterator[int]:
    """Indices of the set bits, lowest first."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def format_word(word: Sequence[int]) -> str:
    if len(word) <= 9 and all(0 <= x <= 9 for x in word):
        return "".join(str(x) for x in word)
    return " ".join(str(x) for x in word)


def parse_word(text: str) -> list[int]:
    text = text.strip()
    if not text:
        raise PermutationError("empty input")
    if re.fullmatch(r"\d+", text):
        return [int(c) for c in text]
    parts = [p for p in re.split(r"[\s,]+", text) if p]
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise PermutationError(f"cannot parse {text!r} as a permutation") from None


def parse_permutation(text: str) -> Permutation:
    """Parse ``"413265"`` or ``"9 7 10 4 8 1 2 6 5 3"`` (commas also accepted)."""
    return Permutation(tuple(parse_word(text)))


def from_word(word: Sequence[int]) -> Permutation:
    """Reduce a word of distinct positive integers to the order-isomorphic permutation."""
    word = list(word)
    if not word:
        raise PermutationError("empty input")
    if len(set(word)) != len(word):
        raise PermutationError(f"duplicate letters in {word}")
    rank = {x: i + 1 for i, x in enumerate(sorted(word))}
    return Permutation(tuple(rank[x] for x in word))


def as_permutation(x) -> Permutation:
    if isinstance(x, Permutation):
        return x
    if isinstance(x, str):
        return parse_permutation(x)
    return Permutation(tuple(x))


def embeddings_of(sigma: Permutation, pi: Permutation) -> list[EmbeddingMask]:
    """All occurrences of ``sigma`` in ``pi``, in lexicographic order of position sets."""
    if len(sigma) > len(pi):
        return []
    masks = kernels.occurrence_masks(sigma.letters, pi.letters, 0)
    return [EmbeddingMask(m, len(pi)) for m in masks]


def contains(sigma: Permutation, pi: Permutation) -> bool:
    if len(sigma) > len(pi):
        return False
    return bool(kernels.occurrence_masks(sigma.letters, pi.letters, 1))


def adjacencies(pi: Permutation) -> AdjacencyDecomposition:
    letters = pi.letters
    n = len(letters)
    runs = []
    tails = set()
    s = 0
    while s < n:
        e = s + 1
        direction = SINGLETON
        if e < n and abs(letters[e] - letters[s]) == 1:
            step = letters[e] - letters[s]
            direction = INCREASING if step == 1 else DECREASING
            while e < n and letters[e] - letters[e - 1] == step:
                e += 1
        runs.append(Run(s + 1, e - s, direction))
        tails.update(range(s + 2, e + 1))
        s = e
    return AdjacencyDecomposition(tuple(runs), frozenset(tails))


def direct_sum(a: Permutation, b: Permutation) -> Permutation:
    k = len(a)
    return Permutation(a.letters + tuple(x + k for x in b.letters))


def skew_sum(a: Permutation, b: Permutation) -> Permutation:
    k = len(b)
    return Permutation(tuple(x + k for x in a.letters) + b.letters)


def compose(a: Permutation, b: Permutation, mode: str = "direct") -> Permutation:
    if mode == "direct":
        return direct_sum(a, b)
    if mode == "skew":
        return skew_sum(a, b)
    raise ValueError(f"unknown mode {mode!r}")


def direct_sum_of(parts: Iterable[Permutation]) -> Permutation:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = direct_sum(out, p)
    return out


def power(lam: Permutation, n: int) -> Permutation:
    """``lam`` summed with itself ``n`` times."""
    return direct_sum_of([lam] * n)


def sum_components(pi: Permutation) -> list[Permutation]:
    """Indecomposable direct summands, left to right."""
    out = []
    start = 0
    running_max = 0
    for i, x in enumerate(pi.letters):
        running_max = max(running_max, x)
        if running_max == i + 1:
            out.append(from_word(pi.letters[start : i + 1]))
            start = i + 1
    return out


def is_indecomposable(pi: Permutation) -> bool:
    return len(sum_components(pi)) == 1


def descents(pi: Permutation) -> int:
    return sum(1 for a, b in zip(pi.letters, pi.letters[1:]) if a > b)


def all_permutations(n: int) -> Iterator[Permutation]:
    for p in itertools.permutations(range(1, n + 1)):
        yield Permutation(p)


def tail_statistics(n: int, mode: str = "enumerate") -> Fraction:
    """Average number of tail letters over all permutations of length ``n``."""
    if n < 1:
        raise ValueError("n must be positive")
    if mode == "closed":
        return Fraction(2 * (n - 1), n)
    if mode != "enumerate":
        raise ValueError(f"unknown mode {mode!r}")
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"n={n} too large to enumerate; use mode='closed'")
    total = 0
    count = 0
    for p in all_permutations(n):
        total += len(adjacencies(p).tail_positions)
        count += 1
    return Fraction(total, count)


def count_without_adjacencies(n: int) -> int:
    """Number of permutations of length ``n`` whose adjacencies all have length 1."""
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"n={n} too large to enumerate")
    return sum(1 for p in all_permutations(n) if not adjacencies(p).tail_positions)
