"""The relative-gain privacy model.

An adversary who knows the overall sensitive-attribute distribution P gains
information from a published equivalence class whose distribution Q pushes
some value's frequency above its global one. The model caps that gain in
relative terms: q <= p * (1 + min(beta, -ln p)) for every value, so rare
values get the full beta budget while frequent ones are bent away from
certainty.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class LikenessError(ValueError):
    pass


@dataclass(frozen=True)
class Distribution:
    """Overall SA distribution: values in ascending frequency order.

    Counts are kept exact; frequencies are materialized only where compared.
    """

    values: tuple[str, ...]
    counts: tuple[int, ...]
    total: int

    def __post_init__(self) -> None:
        if len(self.values) != len(self.counts) or not self.values:
            raise LikenessError("values and counts must align and be non-empty")
        if sum(self.counts) != self.total:
            raise LikenessError("counts do not sum to total")
        if any(c <= 0 for c in self.counts):
            raise LikenessError("every value must have a positive count")
        if any(a > b for a, b in zip(self.counts, self.counts[1:])):
            raise LikenessError("counts must be in ascending order")

    @property
    def m(self) -> int:
        return len(self.values)

    def freqs(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.total

    def freq(self, i: int) -> float:
        return self.counts[i] / self.total

    def index_of(self, value: str) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise LikenessError(f"SA value {value!r} not in distribution") from None


def relative_distance(p: float, q: float) -> float:
    """Relative change of a value's frequency from p to q: (q - p) / p."""
    if not 0.0 < p <= 1.0:
        raise LikenessError(f"base frequency must be in (0, 1], got {p}")
    if not 0.0 <= q <= 1.0:
        raise LikenessError(f"frequency must be in [0, 1], got {q}")
    return (q - p) / p


def frequency_bound(p: float, beta: float) -> float:
    """Largest in-class frequency allowed for a value of global frequency p.

    Linear (1 + beta) * p while p <= e^-beta, then p * (1 - ln p): continuous,
    strictly increasing, and equal to 1 at p = 1.
    """
    _check_beta(beta)
    if not 0.0 < p <= 1.0:
        raise LikenessError(f"frequency must be in (0, 1], got {p}")
    if p <= math.exp(-beta):
        return p * (1.0 + beta)
    return p * (1.0 - math.log(p))


def _check_beta(beta: float) -> None:
    if not beta > 0.0:
        raise LikenessError(f"beta must be > 0, got {beta}")


def one_plus_beta(beta: float) -> tuple[int, int]:
    """(1 + beta) as an exact integer ratio of the given float."""
    f = 1 + Fraction(beta)
    return f.numerator, f.denominator


# Slack for the logarithmic branch only; the linear branch is compared with
# exact integer cross-multiplication so boundary classes cannot flip.
LOG_BRANCH_SLACK = 1e-12


def class_counts(dist: Distribution, sa_values: Iterable[str]) -> np.ndarray:
    """Per-value counts of one class, aligned with `dist`; unknown value errors."""
    counts = np.zeros(dist.m, dtype=np.int64)
    for v in sa_values:
        counts[dist.index_of(v)] += 1
    return counts


def _as_counts(dist: Distribution, counts: Sequence[int] | np.ndarray) -> np.ndarray:
    arr = np.asarray(counts, dtype=np.int64)
    if arr.shape != (dist.m,):
        raise LikenessError(f"class counts must align with the {dist.m} SA values")
    if (arr < 0).any():
        raise LikenessError("class counts must be nonnegative")
    if arr.sum() == 0:
        raise LikenessError("class is empty")
    return arr


def check_basic(dist: Distribution, counts, beta: float) -> bool:
    """Does the class keep every value's relative gain at or below beta?"""
    _check_beta(beta)
    arr = _as_counts(dist, counts)
    g = int(arr.sum())
    num, den = one_plus_beta(beta)
    for i, c in enumerate(arr):
        if c == 0:
            continue
        # c/g <= (1+beta) * N_i/total, cross-multiplied exactly
        if int(c) * den * dist.total > num * dist.counts[i] * g:
            return False
    return True


def check_enhanced(dist: Distribution, counts, beta: float) -> bool:
    """Basic check tightened so no value can approach certainty.

    Every present value must satisfy q <= frequency_bound(p, beta); values
    absent from the class pass by definition.
    """
    _check_beta(beta)
    arr = _as_counts(dist, counts)
    g = int(arr.sum())
    num, den = one_plus_beta(beta)
    cut = math.exp(-beta)
    for i, c in enumerate(arr):
        if c == 0:
            continue
        n_i = dist.counts[i]
        p = n_i / dist.total
        if p <= cut:
            if int(c) * den * dist.total > num * n_i * g:
                return False
        else:
            if c / g > p * (1.0 - math.log(p)) + LOG_BRANCH_SLACK:
                return False
    return True


def required_beta(dist: Distribution, counts) -> float:
    """Smallest beta under which the class passes the enhanced check.

    Returns 0.0 when no value exceeds its global frequency and math.inf when
    some value exceeds the p * (1 - ln p) cap that no finite beta relaxes.
    """
    arr = _as_counts(dist, counts)
    g = int(arr.sum())
    worst = 0.0
    for i, c in enumerate(arr):
        if c == 0:
            continue
        p = dist.counts[i] / dist.total
        q = c / g
        if q <= p:
            continue
        if q > p * (1.0 - math.log(p)) + LOG_BRANCH_SLACK:
            return math.inf
        worst = max(worst, (q - p) / p)
    return worst
