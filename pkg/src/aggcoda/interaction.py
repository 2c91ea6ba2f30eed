"""Weighted log interactions and their first-order approximations.

For a positive table with proportions ``p`` and probability weights ``w_r``
on rows and ``w_c`` on columns, the weighted log interaction is the
weighted double-centering of ``G = log p``::

    lambda_rc = G_rc - G_r+ - G_+c + G_++

with ``G_r+ = sum_c w_c G_rc``, ``G_+c = sum_r w_r G_rc`` and
``G_++ = sum_rc w_r w_c G_rc``.  Linearising around the independence table
``p = w_r w_c`` gives::

    lambda_rc ~ p_rc / (w_r w_c) - p_r+ / w_r - p_+c / w_c + 1

which accepts zero cells.  Logarithms are natural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, MissingPairing, NonPositiveCell, ZeroTotal
from .tables import (
    AggregateTable,
    ElementaryTable,
    IndicatorMatrix,
    WeightVector,
    aggregate,
)

KINDS = (
    "aggregate-exact",
    "elementary-exact",
    "aggregate-of-elementary",
    "approx-aggregate",
    "approx-elementary",
    "approx-aggregate-of-elementary",
)


@dataclass(frozen=True)
class InteractionMatrix:
    """A double-centered interaction matrix together with its weights.

    ``q`` is the number of covariates for matrices derived from an indicator
    matrix, ``None`` otherwise.
    """

    values: np.ndarray
    row_weights: WeightVector
    col_weights: WeightVector
    kind: str
    q: int | None = None
    row_labels: tuple[str, ...] = field(default=None)
    col_labels: tuple[str, ...] = field(default=None)

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True)
        v.setflags(write=False)
        if v.shape != (len(self.row_weights), len(self.col_weights)):
            raise DimensionMismatch(
                f"values of shape {v.shape} do not match weights "
                f"({len(self.row_weights)}, {len(self.col_weights)})"
            )
        if self.kind not in KINDS:
            raise ValueError(f"unknown interaction kind {self.kind!r}")
        object.__setattr__(self, "values", v)
        if self.row_labels is None:
            object.__setattr__(self, "row_labels", self.row_weights.labels)
        if self.col_labels is None:
            object.__setattr__(self, "col_labels", self.col_weights.labels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def centering_error(self) -> float:
        """Largest absolute weighted row or column sum."""
        wr, wc = self.row_weights.weights, self.col_weights.weights
        rows = (self.values * wc[None, :]).sum(axis=1)
        cols = (self.values * wr[:, None]).sum(axis=0)
        return float(max(np.abs(rows).max(), np.abs(cols).max()))


def _table_parts(table):
    if isinstance(table, (ElementaryTable, AggregateTable)):
        return table.values, table.row_labels, table.col_labels
    v = np.asarray(table, dtype=float)
    return v, None, None


def _check_weights(shape, row_weights: WeightVector, col_weights: WeightVector) -> None:
    if len(row_weights) != shape[0] or len(col_weights) != shape[1]:
        raise DimensionMismatch(
            f"table of shape {shape} with {len(row_weights)} row and {len(col_weights)} column weights"
        )


def _relabel(w: WeightVector, labels) -> WeightVector:
    if labels is None or tuple(labels) == w.labels:
        return w
    return WeightVector(w.weights, labels)


def _default_kind(table, exact: bool) -> str:
    elementary = isinstance(table, ElementaryTable)
    if exact:
        return "elementary-exact" if elementary else "aggregate-exact"
    return "approx-elementary" if elementary else "approx-aggregate"


def log_interaction(table, row_weights: WeightVector, col_weights: WeightVector, *,
                    pseudocount: float | None = None, kind: str | None = None,
                    q: int | None = None) -> InteractionMatrix:
    """Exact weighted log interaction of a strictly positive table.

    Raises :class:`NonPositiveCell` on any zero cell unless ``pseudocount``
    is given, in which case it is added to every cell first.
    """
    values, rlab, clab = _table_parts(table)
    _check_weights(values.shape, row_weights, col_weights)
    if pseudocount is not None:
        values = values + float(pseudocount)
    bad = np.argwhere(~(values > 0))
    if bad.size:
        i, j = bad[0]
        raise NonPositiveCell(int(i), int(j), float(values[i, j]))

    wr, wc = row_weights.weights, col_weights.weights
    g = np.log(values / values.sum())
    g_row = (g * wc[None, :]).sum(axis=1)
    g_col = (g * wr[:, None]).sum(axis=0)
    g_all = (g_row * wr).sum()
    lam = g - g_row[:, None] - g_col[None, :] + g_all
    if q is None and isinstance(table, AggregateTable) and table.paired:
        q = table.q
    return InteractionMatrix(lam, _relabel(row_weights, rlab), _relabel(col_weights, clab),
                             kind or _default_kind(table, True), q)


def approx_log_interaction(table, row_weights: WeightVector, col_weights: WeightVector, *,
                           kind: str | None = None, q: int | None = None) -> InteractionMatrix:
    """First-order approximation of the weighted log interaction.

    Zero cells are allowed.  With marginal weights ``w_r = p_r+`` and
    ``w_c = p_+c`` the result is the correspondence analysis interaction
    ``p_rc / (p_r+ p_+c) - 1``; the evaluation order below keeps that
    reduction exact in floating point.
    """
    values, rlab, clab = _table_parts(table)
    _check_weights(values.shape, row_weights, col_weights)
    total = values.sum()
    if total == 0:
        raise ZeroTotal("grand total is zero")
    wr, wc = row_weights.weights, col_weights.weights
    p = values / total
    p_row = p.sum(axis=1)
    p_col = p.sum(axis=0)
    lam = (p / (wr[:, None] * wc[None, :]) - (p_row / wr)[:, None]) + (1.0 - p_col / wc)[None, :]
    if q is None and isinstance(table, AggregateTable) and table.paired:
        q = table.q
    return InteractionMatrix(lam, _relabel(row_weights, rlab), _relabel(col_weights, clab),
                             kind or _default_kind(table, False), q)


def aggregate_of_log_interactions(x: ElementaryTable, z: IndicatorMatrix,
                                  row_weights: WeightVector | None = None,
                                  col_weights: WeightVector | None = None, *,
                                  category_weights: WeightVector | None = None,
                                  pseudocount: float | None = None) -> InteractionMatrix:
    """Aggregate the elementary log interactions within categories.

    Computes ``alpha = Z' diag(w_i) Lambda`` where ``Lambda`` is the
    ``(w_i, w_j)`` log interaction of ``x``.  The result carries uniform
    category weights ``1/K`` unless ``category_weights`` says otherwise; the
    category sizes already enter through the summation.
    """
    if z.n_obs != x.shape[0]:
        raise DimensionMismatch(f"X has {x.shape[0]} rows but Z has {z.n_obs}")
    if row_weights is None:
        row_weights = WeightVector.uniform(x.shape[0])
    if col_weights is None:
        col_weights = WeightVector.uniform(x.shape[1])
    lam = log_interaction(x, row_weights, col_weights, pseudocount=pseudocount)
    alpha = z.values.T @ (row_weights.weights[:, None] * lam.values)
    if category_weights is None:
        category_weights = WeightVector.uniform(z.n_categories, z.category_labels)
    return InteractionMatrix(alpha, _relabel(category_weights, z.category_labels),
                             _relabel(col_weights, x.col_labels),
                             "aggregate-of-elementary", z.q)


def approx_aggregate_of_log_interactions(source, z: IndicatorMatrix | None = None,
                                         col_weights: WeightVector | None = None, *,
                                         category_weights: WeightVector | None = None) -> InteractionMatrix:
    """Closed-form first-order approximation of the aggregated log interactions.

    ``source`` is either the elementary table (aggregated here with uniform
    observation weights) or an aggregate table built from ``z``.  With
    aggregate proportions ``p`` and column weights ``w_j``::

        a_kj = Q (p_kj / w_j - p_k+) - (p_+j / w_j - 1) z_+k / I

    Zero cells are allowed.  ``Q``, ``z_+k`` and ``I`` always come from the
    indicator matrix.
    """
    if isinstance(source, ElementaryTable):
        if z is None:
            raise MissingPairing("the indicator matrix is required")
        t = aggregate(source, z)
    elif isinstance(source, AggregateTable):
        t = source
        z = z if z is not None else source.indicator
        if z is None:
            raise MissingPairing(
                "aggregate table has no paired indicator matrix; Q and z_+k are unknown"
            )
    else:
        raise TypeError("source must be an ElementaryTable or AggregateTable")
    if z.n_categories != t.shape[0]:
        raise DimensionMismatch(f"T has {t.shape[0]} rows but Z has {z.n_categories} categories")

    total = t.values.sum()
    if total == 0:
        raise ZeroTotal("grand total is zero")
    if col_weights is None:
        col_weights = WeightVector.uniform(t.shape[1])
    if len(col_weights) != t.shape[1]:
        raise DimensionMismatch(f"{len(col_weights)} column weights for {t.shape[1]} columns")
    w = col_weights.weights
    p = t.values / total
    p_row = p.sum(axis=1)
    p_col = p.sum(axis=0)
    share = z.category_counts / z.n_obs
    a = z.q * (p / w[None, :] - p_row[:, None]) - (p_col / w - 1.0)[None, :] * share[:, None]
    if category_weights is None:
        category_weights = WeightVector.uniform(z.n_categories, z.category_labels)
    return InteractionMatrix(a, _relabel(category_weights, z.category_labels),
                             _relabel(col_weights, t.col_labels),
                             "approx-aggregate-of-elementary", z.q)


class GapReport(NamedTuple):
    max_abs: float
    weighted_rms: float


def approximation_gap(exact: InteractionMatrix, approx: InteractionMatrix) -> GapReport:
    """Elementwise distance between an exact matrix and its approximation.

    ``weighted_rms`` is ``sqrt(sum w_r w_c (exact - approx)^2)``.
    """
    if exact.shape != approx.shape:
        raise DimensionMismatch(f"shapes {exact.shape} and {approx.shape} differ")
    wr, wc = exact.row_weights.weights, exact.col_weights.weights
    if not (np.allclose(wr, approx.row_weights.weights, rtol=0, atol=1e-12)
            and np.allclose(wc, approx.col_weights.weights, rtol=0, atol=1e-12)):
        raise DimensionMismatch("the two matrices carry different weights")
    d = exact.values - approx.values
    return GapReport(float(np.abs(d).max()),
                     float(np.sqrt((wr[:, None] * wc[None, :] * d * d).sum())))
