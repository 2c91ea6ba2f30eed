"""Shared test data builders."""

from pathlib import Path

import numpy as np

from aggcoda import ElementaryTable, IndicatorMatrix, WeightVector


def random_weights(rng, n):
    w = rng.uniform(0.2, 1.0, n)
    return WeightVector(w / w.sum())


def random_paired(rng, n=12, cols=4, blocks=(2, 3)):
    z = np.zeros((n, sum(blocks)))
    off = 0
    for b in blocks:
        codes = rng.integers(0, b, n)
        codes[:b] = rng.permutation(b)  # every category observed at least once
        z[np.arange(n), off + codes] = 1
        off += b
    x = rng.uniform(0.5, 10.0, (n, cols))
    return ElementaryTable(x), IndicatorMatrix(z, blocks=blocks)


def write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(str(c) for c in r) for r in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
