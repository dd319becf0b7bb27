"""Minimum bucket partition of the SA domain.

Values are grouped into buckets of consecutive ascending-frequency runs. A
run is admissible when its total mass stays strictly below the frequency
bound of its rarest member; classes drawing from buckets proportionally then
keep every value inside its bound even in the worst-case composition. Dynamic
programming over run endpoints minimizes the number of buckets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Table, sa_distribution
from .likeness import Distribution, LikenessError, _check_beta, one_plus_beta


@dataclass(frozen=True)
class Bucket:
    """Rows whose SA code lies in the contiguous range [lo, hi]."""

    lo: int
    hi: int
    rows: np.ndarray
    min_freq: float
    mass: float

    @property
    def size(self) -> int:
        return len(self.rows)

    def value_names(self, dist: Distribution) -> tuple[str, ...]:
        return dist.values[self.lo : self.hi + 1]


@dataclass(frozen=True)
class BucketPartition:
    buckets: tuple[Bucket, ...]
    dist: Distribution
    beta: float


def combinable(dist: Distribution, b: int, e: int, beta: float) -> bool:
    """Can values b..e (0-based, inclusive) share a bucket?

    True when their combined mass is strictly below the frequency bound of
    value b, the rarest of the run since the distribution is ascending. The
    linear branch of the bound is compared with exact integer arithmetic.
    """
    _check_beta(beta)
    if not 0 <= b <= e < dist.m:
        raise LikenessError(f"value range [{b}, {e}] out of bounds for m={dist.m}")
    run = sum(dist.counts[b : e + 1])
    n_b = dist.counts[b]
    if n_b / dist.total <= math.exp(-beta):
        num, den = one_plus_beta(beta)
        return run * den < num * n_b
    p = n_b / dist.total
    return run / dist.total < p * (1.0 - math.log(p))


def partition_spans(dist: Distribution, beta: float) -> list[tuple[int, int]]:
    """Optimal contiguous partition of the value sequence, fewest buckets.

    Prefix recursion: best[e] = min over admissible runs (b..e) of
    best[b-1] + 1, a singleton run being the unconditioned default. Updates
    happen only on strict improvement, so among equal-count partitions the
    latest bucket is the smallest admissible one.
    """
    _check_beta(beta)
    m = dist.m
    num, den = one_plus_beta(beta)
    cut = math.exp(-beta)
    counts = dist.counts
    prefix = [0]
    for c in counts:
        prefix.append(prefix[-1] + c)

    def _combinable(b: int, e: int) -> bool:
        run = prefix[e + 1] - prefix[b]
        n_b = counts[b]
        if n_b / dist.total <= cut:
            return run * den < num * n_b
        p = n_b / dist.total
        return run / dist.total < p * (1.0 - math.log(p))

    best = [0] * (m + 1)
    start = [0] * (m + 1)
    for e in range(1, m + 1):
        best[e] = best[e - 1] + 1
        start[e] = e
        b = e - 1
        # Mass grows and the bound shrinks as the run extends left, so the
        # first inadmissible b ends the scan.
        while b > 0 and _combinable(b - 1, e - 1):
            if best[b - 1] + 1 < best[e]:
                best[e] = best[b - 1] + 1
                start[e] = b
            b -= 1
    spans = []
    e = m
    while e > 0:
        b = start[e]
        spans.append((b - 1, e - 1))
        e = b - 1
    spans.reverse()
    return spans


def dp_partition(table: Table, beta: float) -> BucketPartition:
    """Partition the table into the minimum number of admissible buckets."""
    dist = sa_distribution(table)
    spans = partition_spans(dist, beta)
    order = np.argsort(table.sa_codes, kind="stable")
    bounds = np.cumsum([0] + list(dist.counts))
    buckets = []
    for lo, hi in spans:
        rows = order[bounds[lo] : bounds[hi + 1]]
        mass = sum(dist.counts[lo : hi + 1]) / dist.total
        buckets.append(Bucket(lo, hi, np.sort(rows), dist.freq(lo), mass))
    return BucketPartition(tuple(buckets), dist, beta)
