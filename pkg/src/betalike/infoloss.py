"""Information loss of generalized QI descriptions.

Per attribute the loss is the normalized spread of the recoded value: range
width over domain width for numeric attributes, the LCA's leaf share for
categorical ones (zero when the LCA is itself a leaf). Class loss is the
weighted sum over QI attributes; a release is scored by the size-weighted
mean over its classes.
"""
from __future__ import annotations

import numpy as np

from .data import Attribute, DataError, NUMERIC
from .release import CategoricalExtent, EquivalenceClass, NumericExtent, Release


def il_numeric(extent: NumericExtent, attr: Attribute) -> float:
    if attr.hi == attr.lo:
        raise DataError(f"attribute {attr.name!r} has a degenerate domain")
    return (extent.hi - extent.lo) / (attr.hi - attr.lo)


def il_categorical(extent: CategoricalExtent, attr: Attribute) -> float:
    if extent.leaf_count == 1:
        return 0.0
    return extent.leaf_count / attr.hierarchy.n_leaves


def il_ec(ec: EquivalenceClass, schema, weights: np.ndarray | None = None) -> float:
    """Weighted total loss of one class; weights default to the schema's."""
    qi = schema.qi_attributes
    if weights is None:
        weights = schema.qi_weights()
    total = 0.0
    for w, attr, extent in zip(weights, qi, ec.extents):
        part = il_numeric(extent, attr) if attr.kind == NUMERIC else il_categorical(extent, attr)
        total += w * part
    return total


def ail(release: Release, weights: np.ndarray | None = None) -> float:
    """Average information loss: class losses weighted by class size."""
    if not release.ecs:
        raise DataError("release has no classes")
    total = sum(ec.size * il_ec(ec, release.schema, weights) for ec in release.ecs)
    return total / release.n_rows
