"""Synthetic paired data ``(X, Z)`` for tests and demonstrations."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .io import write_matrix_csv
from .tables import ElementaryTable, IndicatorMatrix, parse_blocks


def generate_synthetic(seed: int, rows: int, cols: int, blocks: str | Sequence[int],
                       effect: float = 0.5, noise: float = 0.25) -> tuple[ElementaryTable, IndicatorMatrix]:
    """Draw a positive elementary table and a matching indicator matrix.

    Each covariate level is drawn uniformly per observation, and every level
    occurs at least once when ``rows`` allows it.  Amounts follow
    ``x_ij = base_j * exp(sum_k z_ik theta_kj + e_ij)`` with
    ``theta ~ N(0, effect^2)`` and ``e ~ N(0, noise^2)``, so every cell is
    strictly positive and ``effect=0`` gives a table without covariate
    structure.
    """
    blocks = parse_blocks(blocks)
    rng = np.random.default_rng(seed)
    k = sum(blocks)
    z = np.zeros((rows, k))
    offset = 0
    for size in blocks:
        codes = rng.integers(0, size, rows)
        if rows >= size:
            # keep every level observed so marginal weights stay positive
            codes[rng.choice(rows, size, replace=False)] = rng.permutation(size)
        z[np.arange(rows), offset + codes] = 1.0
        offset += size
    base = np.exp(rng.normal(4.0, 0.5, cols))
    theta = rng.normal(0.0, effect, (k, cols)) if effect > 0 else np.zeros((k, cols))
    eps = rng.normal(0.0, noise, (rows, cols)) if noise > 0 else np.zeros((rows, cols))
    x = base[None, :] * np.exp(z @ theta + eps)

    row_labels = [f"obs{i + 1:03d}" for i in range(rows)]
    cat_labels = [f"V{q + 1}L{lv + 1}" for q, size in enumerate(blocks) for lv in range(size)]
    col_labels = [f"item{j + 1}" for j in range(cols)]
    return (ElementaryTable(x, row_labels, col_labels),
            IndicatorMatrix(z, cat_labels, blocks, row_labels))


def write_synthetic(out_dir, seed: int, rows: int, cols: int, blocks, effect: float = 0.5,
                    noise: float = 0.25) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    x, z = generate_synthetic(seed, rows, cols, blocks, effect, noise)
    xp, zp = out / "X.csv", out / "Z.csv"
    write_matrix_csv(xp, x.values, x.row_labels, x.col_labels, corner="id")
    write_matrix_csv(zp, z.values, z.row_labels, z.category_labels, corner="id")
    return xp, zp
