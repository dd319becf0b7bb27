"""Published form of a generalized table.

Each equivalence class carries a generalized QI description (a closed range
per numeric attribute, the lowest common ancestor per categorical attribute)
plus its exact SA multiset. The overall SA distribution and the run
parameters are embedded so a release file is auditable on its own.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import NUMERIC, DataError, DatasetSchema, Table
from .likeness import Distribution


@dataclass(frozen=True)
class NumericExtent:
    lo: float
    hi: float


@dataclass(frozen=True)
class CategoricalExtent:
    """LCA node of the member leaves; the span is the node's full leaf range."""

    label: str
    leaf_lo: int
    leaf_hi: int

    @property
    def leaf_count(self) -> int:
        return self.leaf_hi - self.leaf_lo + 1


Extent = NumericExtent | CategoricalExtent


@dataclass(frozen=True, eq=False)
class EquivalenceClass:
    extents: tuple[Extent, ...]
    sa_counts: np.ndarray
    rows: np.ndarray | None = None

    @property
    def size(self) -> int:
        return int(self.sa_counts.sum())


@dataclass(frozen=True, eq=False)
class Release:
    schema: DatasetSchema
    dist: Distribution
    beta: float
    seed: int
    curve_order: int
    ecs: tuple[EquivalenceClass, ...]

    @property
    def n_rows(self) -> int:
        return sum(ec.size for ec in self.ecs)


def generalize_ec(table: Table, rows: np.ndarray) -> tuple[Extent, ...]:
    """Tight generalized QI description of the given member rows."""
    if len(rows) == 0:
        raise DataError("cannot generalize an empty class")
    extents: list[Extent] = []
    for attr, col in zip(table.schema.qi_attributes, table.qi_columns):
        member = col[rows]
        if attr.kind == NUMERIC:
            extents.append(NumericExtent(float(member.min()), float(member.max())))
        else:
            node = attr.hierarchy.lca(int(member.min()), int(member.max()))
            extents.append(CategoricalExtent(node.label, node.leaf_lo, node.leaf_hi))
    return tuple(extents)


def build_ec(table: Table, rows: np.ndarray) -> EquivalenceClass:
    counts = np.bincount(table.sa_codes[rows], minlength=table.m)
    return EquivalenceClass(generalize_ec(table, rows), counts, rows)


# ---------------------------------------------------------------------------
# Serialization

def _num(x: float):
    return int(x) if float(x).is_integer() else float(x)


def release_to_obj(release: Release) -> dict:
    classes = []
    for ec in release.ecs:
        extents = []
        for attr, ext in zip(release.schema.qi_attributes, ec.extents):
            if attr.kind == NUMERIC:
                extents.append({"lo": _num(ext.lo), "hi": _num(ext.hi)})
            else:
                extents.append({"label": ext.label, "leaf_lo": ext.leaf_lo, "leaf_hi": ext.leaf_hi})
        sa = {
            release.dist.values[i]: int(c)
            for i, c in enumerate(ec.sa_counts)
            if c > 0
        }
        classes.append({"size": ec.size, "extents": extents, "sa": sa})
    return {
        "kind": "generalized-release",
        "beta": release.beta,
        "seed": release.seed,
        "curve_order": release.curve_order,
        "qi": [a.name for a in release.schema.qi_attributes],
        "sa": {
            "attribute": release.schema.sa_attribute.name,
            "values": list(release.dist.values),
            "counts": list(release.dist.counts),
            "total": release.dist.total,
        },
        "classes": classes,
    }


def save_release(release: Release, path) -> None:
    Path(path).write_text(json.dumps(release_to_obj(release), indent=1) + "\n", encoding="utf-8")


def load_release(path, schema: DatasetSchema) -> Release:
    """Read a release file back into an auditable object (no member rows)."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from None
    if obj.get("kind") != "generalized-release":
        raise DataError(f"{path}: not a generalized release file")
    sa = obj["sa"]
    dist = Distribution(tuple(sa["values"]), tuple(sa["counts"]), sa["total"])
    if [a.name for a in schema.qi_attributes] != obj["qi"]:
        raise DataError(f"{path}: QI attributes do not match the schema")
    index = {v: i for i, v in enumerate(dist.values)}
    ecs = []
    for cls in obj["classes"]:
        extents: list[Extent] = []
        for attr, ext in zip(schema.qi_attributes, cls["extents"]):
            if attr.kind == NUMERIC:
                extents.append(NumericExtent(float(ext["lo"]), float(ext["hi"])))
            else:
                extents.append(CategoricalExtent(ext["label"], ext["leaf_lo"], ext["leaf_hi"]))
        counts = np.zeros(dist.m, dtype=np.int64)
        for value, c in cls["sa"].items():
            if value not in index:
                raise DataError(f"{path}: class references unknown SA value {value!r}")
            counts[index[value]] = int(c)
        if counts.sum() != cls["size"]:
            raise DataError(f"{path}: class size does not match its SA counts")
        ecs.append(EquivalenceClass(tuple(extents), counts, None))
    return Release(schema, dist, obj["beta"], obj["seed"], obj["curve_order"], tuple(ecs))
