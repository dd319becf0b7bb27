"""Release auditors.

achieved_beta inverts the privacy model in closed form: per class and value
with a positive gain, the needed budget is the relative gain itself, unless
the gain exceeds the logarithmic cap that no finite budget relaxes. The
classifier-bound audit measures, per (QI value, SA value), how far apart the
conditional and unconditional value probabilities are in the published
classes, and runs the naive-Bayes predictor those conditionals support.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import CATEGORICAL, DataError, Table
from .likeness import Distribution, required_beta
from .release import Release


def achieved_beta(release: Release, dist: Distribution | None = None) -> float:
    """Smallest budget under which every class passes the enhanced check.

    Returns math.inf ("unbounded") when some class frequency exceeds the
    p * (1 - ln p) cap.
    """
    dist = dist or release.dist
    if not release.ecs:
        raise DataError("release has no classes")
    worst = 0.0
    for ec in release.ecs:
        worst = max(worst, required_beta(dist, ec.sa_counts))
        if math.isinf(worst):
            return math.inf
    return worst


def ec_audit_lines(release: Release, dist: Distribution | None = None) -> list[str]:
    """One line per class: size, worst value, worst gain, pass/fail."""
    dist = dist or release.dist
    p = dist.freqs()
    lines = []
    for k, ec in enumerate(release.ecs):
        q = ec.sa_counts / ec.size
        gains = np.where(ec.sa_counts > 0, (q - p) / p, -np.inf)
        worst = int(np.argmax(gains))
        need = required_beta(dist, ec.sa_counts)
        status = "PASS" if need <= release.beta + 1e-9 else "FAIL"
        need_txt = "unbounded" if math.isinf(need) else f"{need:.6f}"
        lines.append(
            f"ec={k} size={ec.size} worst_value={dist.values[worst]} "
            f"worst_gain={gains[worst]:.6f} required_beta={need_txt} {status}"
        )
    return lines


@dataclass(frozen=True, eq=False)
class NbAuditReport:
    """Conditional-probability ratios and classifier accuracy on a release."""

    beta: float
    bounds: np.ndarray                 # per SA value: 1 + min(beta, -ln p)
    max_ratio: np.ndarray              # per SA value: worst observed ratio
    worst: tuple[str, object, str, float]  # attribute, QI value, SA value, ratio
    worst_bound: float
    violations: int
    pairs: int
    accuracy: float
    top_frequency: float

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def lines(self) -> list[str]:
        attr, value, sa, ratio = self.worst
        return [
            f"pairs={self.pairs} violations={self.violations}",
            f"worst_ratio={ratio:.6f} at ({attr}={value}, {sa}) bound={self.worst_bound:.6f}",
            f"classifier_accuracy={self.accuracy:.6f} top_value_frequency={self.top_frequency:.6f}",
        ]


def nb_bound_audit(release: Release, table: Table) -> NbAuditReport:
    """Check Pr[qi value | sa value] <= bound * Pr[qi value] over the release.

    A class "contains" a QI value when its generalized extent covers it. The
    naive-Bayes predictor built from those conditionals is evaluated over the
    original rows; under the model's bound its accuracy should sit near the
    top value's global frequency.
    """
    dist = release.dist
    if dist.total != table.n_rows:
        raise DataError("release and table disagree on row count")
    m = dist.m
    p = dist.freqs()
    counts = np.stack([ec.sa_counts for ec in release.ecs])        # (E, m)
    sizes = counts.sum(axis=1).astype(float)
    n_i = np.asarray(dist.counts, dtype=float)
    bounds = 1.0 + np.minimum(release.beta, -np.log(p))

    max_ratio = np.zeros(m)
    worst = ("", 0.0, "", 0.0)
    worst_bound = float(bounds[0])
    violations = 0
    pairs = 0
    log_scores = np.tile(np.log(p), (table.n_rows, 1))
    for attr, col, extents in zip(
        table.schema.qi_attributes,
        table.qi_columns,
        zip(*(ec.extents for ec in release.ecs)),
    ):
        if attr.kind == CATEGORICAL:
            lo = np.asarray([e.leaf_lo for e in extents], dtype=float)
            hi = np.asarray([e.leaf_hi for e in extents], dtype=float)
        else:
            lo = np.asarray([e.lo for e in extents])
            hi = np.asarray([e.hi for e in extents])
        values, value_idx = np.unique(col, return_inverse=True)
        covers = (lo[None, :] <= values[:, None]) & (values[:, None] <= hi[None, :])
        cond = (covers @ counts) / n_i[None, :]                    # Pr[t | v_i]
        marginal = (covers @ sizes) / dist.total                   # Pr[t]
        ratio = cond / marginal[:, None]
        pairs += ratio.size
        violations += int((ratio > bounds[None, :] + 1e-9).sum())
        flat = int(np.argmax(ratio))
        vi, si = divmod(flat, m)
        if ratio[vi, si] > worst[3]:
            shown = attr.hierarchy.leaves[int(values[vi])] if attr.kind == CATEGORICAL else float(values[vi])
            worst = (attr.name, shown, dist.values[si], float(ratio[vi, si]))
            worst_bound = float(bounds[si])
        max_ratio = np.maximum(max_ratio, ratio.max(axis=0))
        with np.errstate(divide="ignore"):
            log_scores += np.log(cond)[value_idx]

    # Among ties prefer the more frequent value (highest code).
    predictions = m - 1 - np.argmax(log_scores[:, ::-1], axis=1)
    accuracy = float(np.mean(predictions == table.sa_codes))
    return NbAuditReport(
        beta=release.beta,
        bounds=bounds,
        max_ratio=max_ratio,
        worst=worst,
        worst_bound=worst_bound,
        violations=violations,
        pairs=pairs,
        accuracy=accuracy,
        top_frequency=float(p[-1]),
    )
