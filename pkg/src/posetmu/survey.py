"""Exhaustive and random surveys of intervals.

The exhaustive survey works host by host. For a host ``pi`` the dense
table gives every pattern of ``pi``, its normal-embedding count and its EZ
sum in ``pi``; the Moebius values ``mu(sigma, lam)`` for all patterns come
from inverting the zeta matrix of the down-set of ``pi``. Each row then
records ``mu(sigma, pi)`` together with the second term
``sum mu(sigma, lam) EZ(lam, pi)`` computed separately, so every row is
also a check of ``mu = (-1)^(|pi|-|sigma|) NE + second_term``.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import astuple, dataclass, fields
from multiprocessing import Pool
from typing import Iterable, Iterator

import numpy as np
from scipy.linalg import solve_triangular

from .engine import is_single, mobius_formula
from .hosts import HostTable
from .perm import Permutation, all_permutations, from_word


@dataclass(frozen=True)
class SurveyRow:
    sigma: str
    pi: str
    mu: int
    ne: int
    second_term: int
    single: bool
    elapsed_ms: float

    @property
    def consistent(self) -> bool:
        sign = -1 if (_length(self.pi) - _length(self.sigma)) % 2 else 1
        return self.mu == sign * self.ne + self.second_term


def _length(text: str) -> int:
    return len(text.split()) if " " in text else len(text)


@dataclass
class SurveySummary:
    rows: int = 0
    second_term_zero: int = 0
    single: int = 0
    inconsistent: int = 0

    def add(self, row: SurveyRow):
        self.rows += 1
        self.second_term_zero += row.second_term == 0
        self.single += row.single
        self.inconsistent += not row.consistent

    @property
    def zero_fraction(self) -> float:
        return self.second_term_zero / self.rows if self.rows else 0.0

    @property
    def single_fraction(self) -> float:
        return self.single / self.rows if self.rows else 0.0

    def line(self) -> str:
        return (
            f"summary rows={self.rows} second_term_zero={self.zero_fraction:.6f} "
            f"single={self.single_fraction:.6f} inconsistent={self.inconsistent}"
        )


def host_rows(pi: Permutation, include_top: bool = False, timing: bool = False) -> list[SurveyRow]:
    """One row for every ``sigma <= pi`` (``sigma = pi`` only if ``include_top``)."""
    start = time.perf_counter()
    table = HostTable(pi)
    count = table.count
    ids = table.ids
    first = table.first
    # zeta matrix over nonempty patterns; ids grow with length so it is upper triangular
    down = [0] * count
    for b in range(1, count):
        bits = 1 << b
        m = int(first[b])
        rest = m
        while rest:
            low = rest & -rest
            rest ^= low
            c = int(ids[m ^ low])
            if c:
                bits |= down[c]
        down[b] = bits
    size = count - 1
    zeta = np.zeros((size, size), dtype=np.int64)
    for b in range(1, count):
        bits = down[b] >> 1
        col = np.frombuffer(bits.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
        zeta[:, b - 1] = np.unpackbits(col, bitorder="little")[:size]
    mobius = np.rint(
        solve_triangular(zeta.astype(float), np.eye(size), unit_diagonal=True)
    ).astype(np.int64)
    if not (zeta @ mobius == np.eye(size, dtype=np.int64)).all():
        raise ArithmeticError(f"zeta inversion lost precision for host {pi}")

    top = table.top_id - 1
    ez = np.zeros(size, dtype=np.int64)
    for pid, value in table.nonzero_ez.items():
        ez[pid - 1] = value
    second = mobius @ ez
    mu_top = mobius[:, top]
    bad = np.zeros(size, dtype=bool)
    bad[table.blockless - 1] = True
    not_single = (zeta[:, bad] != 0).any(axis=1)
    ne = table.normal_counts[1:]
    elapsed = (time.perf_counter() - start) * 1000 if timing else 0.0

    rows = []
    pi_text = str(pi)
    for s in range(size):
        if s == top and not include_top:
            continue
        rows.append(
            SurveyRow(
                str(table.pattern(s + 1)),
                pi_text,
                int(mu_top[s]),
                int(ne[s]),
                int(second[s]),
                not bool(not_single[s]),
                round(elapsed, 3),
            )
        )
    rows.sort(key=lambda r: (_length(r.sigma), r.sigma))
    return rows


def _host_job(args):
    letters, include_top, timing = args
    return host_rows(Permutation(letters), include_top, timing)


def exhaustive(max_len: int, min_len: int = 1, include_top: bool = False, jobs: int = 1,
               timing: bool = False) -> Iterator[SurveyRow]:
    """Rows for every interval ``[sigma, pi]`` with ``min_len <= |pi| <= max_len``."""
    hosts = ((p.letters, include_top, timing) for n in range(min_len, max_len + 1) for p in all_permutations(n))
    if jobs > 1:
        with Pool(jobs) as pool:
            for rows in pool.imap(_host_job, hosts, chunksize=64):
                yield from rows
    else:
        for job in hosts:
            yield from _host_job(job)


def random_pairs(count: int, sigma_len: int, pi_len: int, seed: int = 0) -> list[tuple[Permutation, Permutation]]:
    """Uniform random hosts; ``sigma`` from a uniform random choice of kept positions."""
    if not 1 <= sigma_len <= pi_len:
        raise ValueError("need 1 <= sigma_len <= pi_len")
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        letters = list(range(1, pi_len + 1))
        rng.shuffle(letters)
        keep = sorted(rng.sample(range(pi_len), sigma_len))
        out.append((from_word([letters[i] for i in keep]), Permutation(tuple(letters))))
    return out


def pair_row(sigma: Permutation, pi: Permutation, timing: bool = False, with_mu: bool = True) -> SurveyRow:
    start = time.perf_counter()
    single = is_single(sigma, pi).single
    if with_mu:
        report = mobius_formula(sigma, pi)
        mu, ne, second = report.mu, report.ne, report.second_term
    else:
        from .embeddings import count_normal

        ne = count_normal(sigma, pi)
        sign = -1 if (len(pi) - len(sigma)) % 2 else 1
        mu, second = (sign * ne, 0) if single else (0, 0)
    elapsed = (time.perf_counter() - start) * 1000 if timing else 0.0
    return SurveyRow(str(sigma), str(pi), mu, ne, second, single, round(elapsed, 3))


def _pair_job(args):
    s, p, timing = args
    return pair_row(Permutation(s), Permutation(p), timing)


def random_survey(count: int, sigma_len: int, pi_len: int, seed: int = 0, jobs: int = 1,
                  timing: bool = False) -> Iterator[SurveyRow]:
    jobs_args = [(s.letters, p.letters, timing) for s, p in random_pairs(count, sigma_len, pi_len, seed)]
    if jobs > 1:
        with Pool(jobs) as pool:
            yield from pool.imap(_pair_job, jobs_args, chunksize=8)
    else:
        for a in jobs_args:
            yield _pair_job(a)


def header() -> list[str]:
    return [f.name for f in fields(SurveyRow)]


def write_csv(rows: Iterable[SurveyRow], stream: io.TextIOBase) -> SurveySummary:
    summary = SurveySummary()
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header())
    for row in rows:
        summary.add(row)
        values = list(astuple(row))
        values[5] = int(row.single)
        writer.writerow(values)
    return summary


def summarize(rows: Iterable[SurveyRow]) -> SurveySummary:
    summary = SurveySummary()
    for row in rows:
        summary.add(row)
    return summary
