"""Aggregate COUNT workloads and estimators over published artifacts.

Workloads and per-query reports serialize as delimited text, so a workload
can be fixed once and replayed against several artifacts.

A query constrains a random subset of QI attributes plus the SA with
intervals sized so the expected selectivity matches a target under a
uniformity assumption. The generalized estimator spreads each class's
SA-matching mass uniformly over its extent; the perturbed estimator filters
on exact QI values, reconstructs the SA counts of the filtered subset, and
sums the requested range. The baseline publishes exact QI values plus only
the global SA distribution.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .data import CATEGORICAL, DataError, Table
from .likeness import Distribution
from .perturb import PerturbationModel, reconstruct_nonnegative
from .release import Release


@dataclass(frozen=True)
class AggregateQuery:
    """Conjunctive predicates: per chosen QI attribute an interval over its
    axis (numeric range, or contiguous leaf-rank range), plus an SA interval
    over the ascending-frequency value order. All intervals are inclusive."""

    qi: tuple[tuple[int, float, float], ...]
    sa_lo: int
    sa_hi: int


def gen_workload(table: Table, lam: int, theta: float, n: int, seed: int = 0) -> list[AggregateQuery]:
    """n random queries over `lam` QI attributes at expected selectivity theta.

    Each constrained axis (and the SA axis) gets an interval covering the
    fraction theta ** (1 / (lam + 1)) of its domain, placed uniformly.
    """
    schema = table.schema
    d = len(schema.qi_attributes)
    if not 1 <= lam <= d:
        raise DataError(f"lam must be in [1, {d}], got {lam}")
    if not 0.0 < theta < 1.0:
        raise DataError(f"theta must be in (0, 1), got {theta}")
    frac = theta ** (1.0 / (lam + 1))
    rng = np.random.default_rng(seed)
    m = table.m
    queries = []
    for _ in range(n):
        chosen = sorted(rng.choice(d, size=lam, replace=False).tolist())
        preds = []
        for k in chosen:
            attr = schema.qi_attributes[k]
            if attr.kind == CATEGORICAL:
                leaves = attr.hierarchy.n_leaves
                width = max(1, round(leaves * frac))
                start = int(rng.integers(0, leaves - width + 1))
                preds.append((k, float(start), float(start + width - 1)))
            else:
                length = (attr.hi - attr.lo) * frac
                start = attr.lo + rng.random() * (attr.hi - attr.lo - length)
                preds.append((k, start, start + length))
        width = max(1, round(m * frac))
        sa_lo = int(rng.integers(0, m - width + 1))
        queries.append(AggregateQuery(tuple(preds), sa_lo, sa_lo + width - 1))
    return queries


def _qi_mask(table: Table, query: AggregateQuery) -> np.ndarray:
    mask = np.ones(table.n_rows, dtype=bool)
    for k, lo, hi in query.qi:
        col = table.qi_columns[k]
        mask &= (col >= lo) & (col <= hi)
    return mask


def exact_count(table: Table, query: AggregateQuery) -> int:
    """Rows satisfying every predicate, SA included."""
    mask = _qi_mask(table, query)
    mask &= (table.sa_codes >= query.sa_lo) & (table.sa_codes <= query.sa_hi)
    return int(mask.sum())


class _ReleaseArrays:
    """Per-release arrays shared by all queries of a workload."""

    def __init__(self, release: Release) -> None:
        self.counts = np.stack([ec.sa_counts for ec in release.ecs]).astype(float)
        self.cum = np.concatenate(
            [np.zeros((len(release.ecs), 1)), np.cumsum(self.counts, axis=1)], axis=1
        )
        self.extents = []
        for k, attr in enumerate(release.schema.qi_attributes):
            if attr.kind == CATEGORICAL:
                lo = np.asarray([ec.extents[k].leaf_lo for ec in release.ecs], dtype=float)
                hi = np.asarray([ec.extents[k].leaf_hi for ec in release.ecs], dtype=float)
                self.extents.append(("cat", lo, hi))
            else:
                lo = np.asarray([ec.extents[k].lo for ec in release.ecs])
                hi = np.asarray([ec.extents[k].hi for ec in release.ecs])
                self.extents.append(("num", lo, hi))


def _overlap_fractions(kind: str, lo: np.ndarray, hi: np.ndarray, q_lo: float, q_hi: float) -> np.ndarray:
    if kind == "cat":
        inter = np.minimum(hi, q_hi) - np.maximum(lo, q_lo) + 1.0
        return np.clip(inter, 0.0, None) / (hi - lo + 1.0)
    width = hi - lo
    point = width == 0.0
    inter = np.clip(np.minimum(hi, q_hi) - np.maximum(lo, q_lo), 0.0, None)
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(point, ((lo >= q_lo) & (lo <= q_hi)).astype(float), inter / width)
    return frac


def estimate_generalized(release: Release, query: AggregateQuery, _arrays: _ReleaseArrays | None = None) -> float:
    """Uniform-spread estimate: per class, SA-matching count times the
    product of per-axis overlap fractions with the class extent."""
    arrays = _arrays or _ReleaseArrays(release)
    sa_match = arrays.cum[:, query.sa_hi + 1] - arrays.cum[:, query.sa_lo]
    frac = np.ones(len(release.ecs))
    for k, q_lo, q_hi in query.qi:
        kind, lo, hi = arrays.extents[k]
        frac *= _overlap_fractions(kind, lo, hi, q_lo, q_hi)
    return float(np.dot(sa_match, frac))


def estimate_perturbed(
    perturbed: Table, model: PerturbationModel, query: AggregateQuery
) -> float:
    """Filter on exact QI values, reconstruct the subset's SA counts, and sum
    the queried range of the clamped reconstruction."""
    mask = _qi_mask(perturbed, query)
    observed = np.bincount(perturbed.sa_codes[mask], minlength=model.m)
    estimate = reconstruct_nonnegative(observed, model)
    return float(estimate[query.sa_lo : query.sa_hi + 1].sum())


def baseline_estimate(table: Table, dist: Distribution, query: AggregateQuery) -> float:
    """Anatomy-style baseline: exact QI plus only the global SA distribution."""
    mask = _qi_mask(table, query)
    p = dist.freqs()
    return float(mask.sum() * p[query.sa_lo : query.sa_hi + 1].sum())


@dataclass(frozen=True)
class WorkloadReport:
    """Per-query precision/estimate pairs and the workload's median error."""

    prec: np.ndarray
    est: np.ndarray
    errors: np.ndarray           # relative errors of the kept queries
    dropped: int                 # queries with zero precise count

    @property
    def median_error(self) -> float | None:
        return float(np.median(self.errors)) if len(self.errors) else None

    @property
    def n_queries(self) -> int:
        return len(self.prec)


def evaluate_workload(
    table: Table,
    estimator: Callable[[AggregateQuery], float],
    workload: Sequence[AggregateQuery],
) -> WorkloadReport:
    """Relative error per query against the original table; zero-precision
    queries are dropped and the median is over the rest."""
    prec = np.asarray([exact_count(table, q) for q in workload], dtype=float)
    est = np.asarray([estimator(q) for q in workload], dtype=float)
    kept = prec > 0
    errors = np.abs(est[kept] - prec[kept]) / prec[kept]
    return WorkloadReport(prec, est, errors, int((~kept).sum()))


def save_workload(workload: Sequence[AggregateQuery], path) -> None:
    """One query per line: `k:lo:hi` QI predicates separated by semicolons,
    then the SA code range."""
    lines = ["qi_predicates,sa_lo,sa_hi"]
    for q in workload:
        preds = ";".join(f"{k}:{lo!r}:{hi!r}" for k, lo, hi in q.qi)
        lines.append(f"{preds},{q.sa_lo},{q.sa_hi}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_workload(path) -> list[AggregateQuery]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "qi_predicates,sa_lo,sa_hi":
        raise DataError(f"{path}: not a workload file")
    out = []
    for line in lines[1:]:
        if not line:
            continue
        preds_txt, sa_lo, sa_hi = line.rsplit(",", 2)
        preds = []
        for item in preds_txt.split(";"):
            k, lo, hi = item.split(":")
            preds.append((int(k), float(lo), float(hi)))
        out.append(AggregateQuery(tuple(preds), int(sa_lo), int(sa_hi)))
    return out


def save_report(report: WorkloadReport, path) -> None:
    """Per query: precise count, estimate, relative error (blank when the
    query was dropped for zero precision)."""
    lines = ["query,prec,est,relative_error"]
    kept = iter(report.errors)
    for i, (prec, est) in enumerate(zip(report.prec, report.est)):
        err = "" if prec == 0 else repr(float(next(kept)))
        lines.append(f"{i},{prec:g},{est!r},{err}")
    med = report.median_error
    lines.append(f"# median_relative_error={'undefined' if med is None else repr(med)} "
                 f"dropped={report.dropped}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def workload_report_generalized(table: Table, release: Release, workload) -> WorkloadReport:
    arrays = _ReleaseArrays(release)
    return evaluate_workload(table, lambda q: estimate_generalized(release, q, arrays), workload)


def workload_report_perturbed(table: Table, perturbed: Table, model: PerturbationModel, workload) -> WorkloadReport:
    return evaluate_workload(table, lambda q: estimate_perturbed(perturbed, model, q), workload)


def workload_report_baseline(table: Table, dist: Distribution, workload) -> WorkloadReport:
    return evaluate_workload(table, lambda q: baseline_estimate(table, dist, q), workload)
