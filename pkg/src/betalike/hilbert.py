"""Space-filling curve keys for QI points.

Rows are quantized to a grid of 2**order cells per dimension and mapped to
one integer along a Hilbert curve, so rows close in QI space tend to get
nearby keys. The encoding is the classic bit-transposition algorithm,
vectorized over rows; in one dimension it degenerates to the identity.
"""
from __future__ import annotations

import numpy as np

from .data import CATEGORICAL, DatasetSchema, Table


def hilbert_indices(cells: np.ndarray, order: int):
    """Map (n, d) grid coordinates in [0, 2**order) to curve positions.

    Returns an int64 array when d * order fits in 63 bits, otherwise a list
    of Python ints.
    """
    cells = np.asarray(cells)
    if cells.ndim != 2:
        raise ValueError("cells must be an (n, d) array")
    n, d = cells.shape
    if not 1 <= order <= 31:
        raise ValueError(f"order must be in [1, 31], got {order}")
    if n and (cells.min() < 0 or float(cells.max()) >= float(1 << order)):
        raise ValueError(f"cell coordinates must lie in [0, 2**{order})")
    if d == 1:
        return cells[:, 0].astype(np.int64)

    x = cells.astype(np.uint64).copy()
    m_top = np.uint64(1 << (order - 1))
    q = int(m_top)
    while q > 1:
        p = np.uint64(q - 1)
        qq = np.uint64(q)
        for i in range(d):
            high = (x[:, i] & qq) != 0
            if i == 0:
                x[:, 0] = np.where(high, x[:, 0] ^ p, x[:, 0])
            else:
                # Bit set: invert the low bits of dim 0. Bit clear: exchange
                # the low bits of dim 0 and dim i.
                t = np.where(high, np.uint64(0), (x[:, 0] ^ x[:, i]) & p)
                x[:, 0] = np.where(high, x[:, 0] ^ p, x[:, 0] ^ t)
                x[:, i] ^= t
        q >>= 1
    for i in range(1, d):
        x[:, i] ^= x[:, i - 1]
    t = np.zeros(n, dtype=np.uint64)
    q = int(m_top)
    while q > 1:
        high = (x[:, d - 1] & np.uint64(q)) != 0
        t ^= np.where(high, np.uint64(q - 1), np.uint64(0))
        q >>= 1
    x ^= t[:, None]

    # Interleave bit planes, most significant first, dimension 0 first.
    bit_positions = [(b, i) for b in range(order - 1, -1, -1) for i in range(d)]
    if d * order <= 63:
        key = np.zeros(n, dtype=np.uint64)
        for b, i in bit_positions:
            key = (key << np.uint64(1)) | ((x[:, i] >> np.uint64(b)) & np.uint64(1))
        return key.astype(np.int64)
    # Wide keys: assemble <=63-bit chunks, then combine as Python ints.
    chunks = []
    for lo in range(0, len(bit_positions), 63):
        part = bit_positions[lo : lo + 63]
        acc = np.zeros(n, dtype=np.uint64)
        for b, i in part:
            acc = (acc << np.uint64(1)) | ((x[:, i] >> np.uint64(b)) & np.uint64(1))
        chunks.append((acc, len(part)))
    keys = [0] * n
    for acc, width in chunks:
        acc_list = acc.tolist()
        keys = [(k << width) | v for k, v in zip(keys, acc_list)]
    return keys


def quantize_table(table: Table, order: int) -> np.ndarray:
    """Grid coordinates of every row: numeric values scaled into the grid,
    categorical values placed by pre-order leaf rank."""
    top = (1 << order) - 1
    cols = []
    for attr, col in zip(table.schema.qi_attributes, table.qi_columns):
        if attr.kind == CATEGORICAL:
            span = attr.hierarchy.n_leaves - 1
            scaled = col.astype(float) / span * top if span > 0 else np.zeros(len(col))
        else:
            scaled = (col - attr.lo) / (attr.hi - attr.lo) * top
        cols.append(np.clip(np.floor(scaled + 0.5), 0, top).astype(np.uint64))
    return np.column_stack(cols)


def table_keys(table: Table, order: int):
    return hilbert_indices(quantize_table(table, order), order)


def hilbert_key(qi_values, schema: DatasetSchema, order: int) -> int:
    """Curve key of a single record given its QI values in schema order."""
    cells = []
    top = (1 << order) - 1
    for attr, value in zip(schema.qi_attributes, qi_values):
        if attr.kind == CATEGORICAL:
            idx = attr.hierarchy.leaf_index(value) if isinstance(value, str) else int(value)
            span = attr.hierarchy.n_leaves - 1
            scaled = idx / span * top if span > 0 else 0.0
        else:
            scaled = (float(value) - attr.lo) / (attr.hi - attr.lo) * top
        cells.append(min(max(int(np.floor(scaled + 0.5)), 0), top))
    out = hilbert_indices(np.asarray([cells], dtype=np.uint64), order)
    return int(out[0])
