"""Per-value randomized response over the sensitive attribute.

Each row keeps its SA value with a per-value retention probability and
otherwise replaces it with a uniform draw over the whole domain (possibly the
original value again). Retention probabilities are the largest ones for which
the ratio of any two transition probabilities into the same published value
stays within each value's bound, so the adversary's posterior confidence in
value i never exceeds frequency_bound(p_i, beta). The column-stochastic
transition matrix is published with the data; true counts are recovered by a
dense pivoted solve against observed counts.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .data import DataError, Table, save_table, load_table
from .likeness import Distribution, frequency_bound


class PerturbationError(ValueError):
    pass


COND_LIMIT = 1e12


def ratio_bound(p: float, beta: float) -> float:
    """Largest allowed ratio Pr(v_i -> v) / Pr(v_j -> v) protecting value i.

    Derived from the prior/posterior pair (p, frequency_bound(p, beta));
    always > 1 for p < 1.
    """
    rho2 = frequency_bound(p, beta)
    if rho2 >= 1.0:
        raise PerturbationError(
            f"value with frequency {p} cannot be protected by perturbation"
        )
    return (rho2 / p) * (1.0 - p) / (1.0 - rho2)


@dataclass(frozen=True, eq=False)
class PerturbationModel:
    """Published randomization: retention vector and transition matrix.

    matrix[r, c] = Pr(value c is published as value r); columns sum to 1.
    """

    dist: Distribution
    beta: float
    ratio_bounds: np.ndarray
    floor_prob: float
    retention: np.ndarray
    matrix: np.ndarray
    cond: float

    @property
    def m(self) -> int:
        return self.dist.m


def build_model(dist: Distribution, beta: float) -> PerturbationModel:
    """Derive retention probabilities and the transition matrix for `dist`.

    Raises when the domain is too small or when heterogeneous ratio bounds
    push some retention probability to zero or below, in which case no
    uniform-replacement scheme of this form exists.
    """
    m = dist.m
    if m < 2:
        raise PerturbationError("perturbation needs at least two SA values")
    p = dist.freqs()
    gammas = np.asarray([ratio_bound(pi, beta) for pi in p])
    floor_prob = 1.0 / (gammas.max() + m - 1)
    retention = (m * gammas * floor_prob - 1.0) / (m - 1)
    if (retention <= 0.0).any():
        worst = dist.values[int(np.argmin(retention))]
        raise PerturbationError(
            f"no feasible retention probability for {worst!r}: the ratio bounds "
            "are too heterogeneous for uniform replacement at this beta"
        )
    if (retention > 1.0).any():
        raise PerturbationError("retention probability above 1; inconsistent model")
    off = (1.0 - retention) / m
    matrix = np.tile(off, (m, 1))
    matrix[np.diag_indices(m)] = retention + off
    cond = float(np.linalg.cond(matrix))

    model = PerturbationModel(dist, beta, gammas, floor_prob, retention, matrix, cond)
    _check_model(model)
    return model


def _check_model(model: PerturbationModel) -> None:
    m = model.m
    matrix = model.matrix
    col_sums = matrix.sum(axis=0)
    if np.abs(col_sums - 1.0).max() > 1e-12:
        raise PerturbationError("transition matrix columns must sum to 1")
    # Diagonal dominance: staying on any value is strictly likelier than any
    # cross transition, whichever pair is compared.
    diag = np.diag(matrix)
    off_max = float(np.where(np.eye(m, dtype=bool), -np.inf, matrix).max())
    if not diag.min() > off_max - 1e-15:
        raise PerturbationError("diagonal transition probabilities must dominate")
    # Worst-case transition ratio per protected value i, over all (j, v):
    # matrix[v, i] / matrix[v, j] maximized by the smallest entry of row v.
    scaled = matrix / matrix.min(axis=1)[:, None]
    if (scaled.max(axis=0) > model.ratio_bounds + 1e-9).any():
        raise PerturbationError("transition ratio bound violated")
    post = posterior(model)
    caps = np.asarray([frequency_bound(pi, model.beta) for pi in model.dist.freqs()])
    if (post.max(axis=1) > caps + 1e-9).any():
        raise PerturbationError("posterior confidence exceeds the frequency bound")


def perturb(table: Table, model: PerturbationModel, seed: int = 0) -> Table:
    """Randomize the SA column; QI values are returned untouched.

    The output table keeps the input's SA code order (the published one), so
    its codes stay aligned with the model's matrix.
    """
    if tuple(model.dist.values) != tuple(table.sa_values):
        raise PerturbationError("model was built for a different SA domain")
    rng = np.random.default_rng(seed)
    codes = table.sa_codes
    keep = rng.random(table.n_rows) < model.retention[codes]
    replacement = rng.integers(0, model.m, size=table.n_rows)
    return replace(table, sa_codes=np.where(keep, codes, replacement))


def posterior(model: PerturbationModel) -> np.ndarray:
    """posterior[i, v] = confidence that a row published as v originally held i."""
    p = model.dist.freqs()
    joint = model.matrix * p[None, :]          # [v, i] = p_i * Pr(i -> v)
    return (joint / joint.sum(axis=1, keepdims=True)).T


def reconstruct(observed, model: PerturbationModel) -> np.ndarray:
    """Estimate true counts from observed ones by inverting the transitions.

    The result is real-valued and may have negative components; see
    reconstruct_nonnegative for the clamped variant used in estimation.
    """
    obs = np.asarray(observed, dtype=float)
    if obs.shape != (model.m,) or (obs < 0).any():
        raise PerturbationError(f"observed counts must be {model.m} nonnegative values")
    if model.cond > COND_LIMIT:
        raise PerturbationError(f"transition matrix is numerically singular (cond={model.cond:.3g})")
    return np.linalg.solve(model.matrix, obs)


def reconstruct_nonnegative(observed, model: PerturbationModel) -> np.ndarray:
    """Clamp negative reconstructed counts to zero, preserving the total."""
    raw = reconstruct(observed, model)
    clamped = np.clip(raw, 0.0, None)
    total = clamped.sum()
    target = float(np.asarray(observed, dtype=float).sum())
    if total <= 0.0:
        return np.zeros_like(raw)
    return clamped * (target / total)


# ---------------------------------------------------------------------------
# Published artifact: perturbed table + transition matrix + overall P.

_TABLE_FILE = "perturbed.csv"
_MATRIX_FILE = "pm.txt"
_DIST_FILE = "distribution.json"


def save_perturbation(outdir, perturbed: Table, model: PerturbationModel, seed: int) -> None:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    save_table(perturbed, outdir / _TABLE_FILE)
    lines = [" ".join(repr(float(x)) for x in row) for row in model.matrix]
    (outdir / _MATRIX_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8")
    obj = {
        "kind": "perturbed-release",
        "beta": model.beta,
        "seed": seed,
        "attribute": perturbed.schema.sa_attribute.name,
        "values": list(model.dist.values),
        "counts": list(model.dist.counts),
        "total": model.dist.total,
    }
    (outdir / _DIST_FILE).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")


def load_perturbation(outdir, schema) -> tuple[Table, PerturbationModel]:
    """Read a published artifact back; rebuilds the model from matrix + P."""
    outdir = Path(outdir)
    try:
        obj = json.loads((outdir / _DIST_FILE).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DataError(f"{outdir}: not a perturbation artifact (missing {_DIST_FILE})") from None
    dist = Distribution(tuple(obj["values"]), tuple(obj["counts"]), obj["total"])
    matrix = np.loadtxt(outdir / _MATRIX_FILE, ndmin=2)
    if matrix.shape != (dist.m, dist.m):
        raise DataError(f"{outdir}: transition matrix shape {matrix.shape} does not match m={dist.m}")
    table = load_table(outdir / _TABLE_FILE, schema, sa_order=dist.values)
    beta = float(obj["beta"])
    p = dist.freqs()
    gammas = np.asarray([ratio_bound(pi, beta) for pi in p])
    # Invert the diagonal: Pr(keep as-is) = retention + (1 - retention) / m.
    retention = (np.diag(matrix) * dist.m - 1.0) / (dist.m - 1)
    model = PerturbationModel(
        dist, beta, gammas, 1.0 / (gammas.max() + dist.m - 1), retention, matrix,
        float(np.linalg.cond(matrix)),
    )
    return table, model
