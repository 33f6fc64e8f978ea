"""Haar moments of U_d: exact values, a dimension-2 oracle and Monte Carlo.

The exact value of the 2t-th moment of |tr X| over Haar-random X in U_d is
the number of permutations of t letters whose longest increasing
subsequence has length at most d; by RSK this is the sum of squared
standard-tableaux counts over partitions of t with at most d rows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts) or list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError(f"not a partition: {self.parts}")

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))


def partitions(t: int, max_part: Optional[int] = None) -> Iterator[Partition]:
    """All partitions of t in reverse lexicographic order."""
    max_part = t if max_part is None else max_part

    def rec(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    for p in rec(t, max_part):
        yield Partition(p)


def hook_dimension(lam: Partition) -> int:
    """Number of standard Young tableaux of shape lam (hook-length formula)."""
    if not lam.parts:
        raise ValueError("empty partition")
    conj = lam.conjugate().parts
    hooks = 1
    for i, row in enumerate(lam.parts):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(lam.weight) // hooks


@lru_cache(maxsize=None)
def haar_moment(d: int, t: int) -> int:
    """E|tr X|^(2t) for Haar X in U_d."""
    if d < 1 or t < 0:
        raise ValueError("need d >= 1 and t >= 0")
    if t == 0:
        return 1
    return sum(hook_dimension(lam) ** 2 for lam in partitions(t) if len(lam.parts) <= d)


def haar_table(dims, ts) -> dict[tuple[int, int], int]:
    return {(d, t): haar_moment(d, t) for d in dims for t in ts}


def haar_moment_dim2_oracle(t: int) -> int:
    """Sum of squared multiplicities of Sym^k(V) in V^(x)t for dim V = 2.

    Uses Sym^a (x) V = Sym^(a+1) + Sym^(a-1) (a >= 1) and Sym^0 (x) V = Sym^1.
    """
    if not 1 <= t <= 12:
        raise ValueError("oracle supports 1 <= t <= 12")
    mult = {0: 1}
    for _ in range(t):
        nxt: dict[int, int] = {}
        for a, m in mult.items():
            nxt[a + 1] = nxt.get(a + 1, 0) + m
            if a >= 1:
                nxt[a - 1] = nxt.get(a - 1, 0) + m
        mult = nxt
    return sum(m * m for m in mult.values())


def lis_count(d: int, t: int) -> int:
    """Brute-force count of permutations of t letters with longest increasing subsequence <= d."""
    from bisect import bisect_left
    from itertools import permutations

    count = 0
    for perm in permutations(range(t)):
        tails: list[int] = []
        for v in perm:
            k = bisect_left(tails, v)
            if k == len(tails):
                tails.append(v)
            else:
                tails[k] = v
        count += len(tails) <= d
    return count


# ---------------------------------------------------------------------------
# Monte Carlo

SHARD = 50_000


def haar_unitaries(rng: np.random.Generator, d: int, count: int) -> np.ndarray:
    """Haar-distributed unitaries by QR of a complex Ginibre matrix.

    QR alone is not Haar: the phases of R's diagonal must be moved onto Q,
    otherwise the distribution depends on the QR sign convention.
    """
    z = (rng.standard_normal((count, d, d)) + 1j * rng.standard_normal((count, d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=1, axis2=2)
    phases = diag / np.abs(diag)
    return q * phases[:, None, :]


def mc_trace_powers(d: int, ts, samples: int, seed: int) -> dict[int, tuple[float, float]]:
    """(mean, stderr) of |tr X|^(2t) for every t in ts from one seeded sample set."""
    if samples < 100:
        raise ValueError("need at least 100 samples")
    ts = list(ts)
    if any(t < 1 for t in ts):
        raise ValueError("t must be >= 1")
    nshards = -(-samples // SHARD)
    children = np.random.SeedSequence(seed).spawn(nshards)
    sums = {t: 0.0 for t in ts}
    sq = {t: 0.0 for t in ts}
    # shard layout depends only on (seed, samples), reduced in shard order
    for k, child in enumerate(children):
        count = min(SHARD, samples - k * SHARD)
        u = haar_unitaries(np.random.default_rng(child), d, count)
        a2 = np.abs(np.trace(u, axis1=1, axis2=2)) ** 2
        for t in ts:
            v = a2 ** t
            sums[t] += float(v.sum())
            sq[t] += float((v * v).sum())
    out = {}
    for t in ts:
        mean = sums[t] / samples
        var = max(sq[t] / samples - mean * mean, 0.0) * samples / (samples - 1)
        out[t] = (mean, math.sqrt(var / samples))
    return out


def mc_haar_estimate(d: int, t: int, samples: int, seed: int = 0) -> tuple[float, float]:
    return mc_trace_powers(d, [t], samples, seed)[t]
