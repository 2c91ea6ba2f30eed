"""Weighted taxicab factorization of a double-centered interaction matrix.

The interaction ``y`` with row weights ``m_r`` and column weights ``m_c``
is rescaled to ``X = m_r y m_c`` (plain row and column sums vanish), ``X`` is
decomposed by TSVD, and the contribution scores ``a``, ``b`` are turned
into principal factor scores ``f = a / m_r`` and ``g = b / m_c`` so that::

    y_ij = sum_alpha f_alpha(i) g_alpha(j) / delta_alpha
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AxisOutOfRange, CenteringViolation
from .interaction import InteractionMatrix
from .tsvd import DEFAULT_SEED, Mode, TaxicabDecomposition, decompose

DEFAULT_AXES = 4
CENTERING_TOL = 1e-10


@dataclass(frozen=True)
class WeightedFactorization:
    source: InteractionMatrix
    centered: np.ndarray
    decomposition: TaxicabDecomposition
    row_scores: np.ndarray  # I x rank, column alpha holds f_alpha
    col_scores: np.ndarray  # J x rank, column alpha holds g_alpha

    @property
    def rank(self) -> int:
        return self.decomposition.rank

    @property
    def deltas(self) -> np.ndarray:
        return self.decomposition.deltas

    @property
    def row_labels(self) -> tuple[str, ...]:
        return self.source.row_labels

    @property
    def col_labels(self) -> tuple[str, ...]:
        return self.source.col_labels

    def f(self, alpha: int) -> np.ndarray:
        """Row factor scores of axis ``alpha`` (1-based)."""
        return self.row_scores[:, self._col(alpha)]

    def g(self, alpha: int) -> np.ndarray:
        """Column factor scores of axis ``alpha`` (1-based)."""
        return self.col_scores[:, self._col(alpha)]

    def _col(self, alpha: int) -> int:
        if not 1 <= alpha <= self.rank:
            raise AxisOutOfRange(f"axis {alpha} not available (rank {self.rank})")
        return alpha - 1

    def reconstruct(self, n_axes: int | None = None) -> np.ndarray:
        k = self.rank if n_axes is None else min(n_axes, self.rank)
        return (self.row_scores[:, :k] / self.deltas[:k]) @ self.col_scores[:, :k].T


def factorize(interaction: InteractionMatrix, n_axes: int | None = DEFAULT_AXES,
              mode: Mode = "auto", *, seed: int = DEFAULT_SEED,
              tol: float = CENTERING_TOL) -> WeightedFactorization:
    """Factorize a weighted interaction matrix.

    The rescaled matrix must already have vanishing row and column sums; this
    holds for every interaction kind paired with its own weights.  A larger
    deviation than ``tol`` (relative to ``max(1, sum |X|)``) raises
    :class:`CenteringViolation` instead of being silently re-centered.
    ``n_axes=None`` factorizes to full rank.
    """
    mr = interaction.row_weights.weights
    mc = interaction.col_weights.weights
    x = interaction.values * mr[:, None] * mc[None, :]
    scale = max(1.0, float(np.abs(x).sum()))
    err = max(np.abs(x.sum(axis=0)).max(), np.abs(x.sum(axis=1)).max())
    if err > tol * scale:
        raise CenteringViolation(
            f"weighted matrix is not double-centered (max margin {err:.3g}); "
            "are the weights the ones the interaction was computed with?"
        )
    x.setflags(write=False)
    dec = decompose(x, n_axes, mode, seed=seed)
    if dec.rank:
        a = np.column_stack([ax.a for ax in dec.axes])
        b = np.column_stack([ax.b for ax in dec.axes])
    else:
        a = np.zeros((x.shape[0], 0))
        b = np.zeros((x.shape[1], 0))
    return WeightedFactorization(interaction, x, dec, a / mr[:, None], b / mc[:, None])


class MapPoints(NamedTuple):
    labels: tuple[str, ...]
    coords: np.ndarray  # n x 2


class PrincipalMap(NamedTuple):
    axes: tuple[int, int]
    rows: MapPoints
    cols: MapPoints
    deltas: tuple[float, float]


def principal_map(fact: WeightedFactorization, axis_pair: tuple[int, int] = (1, 2)) -> PrincipalMap:
    """Row points ``(f_alpha(i), f_beta(i))`` and column points ``(g_alpha(j), g_beta(j))``."""
    alpha, beta = axis_pair
    rows = np.column_stack([fact.f(alpha), fact.f(beta)])
    cols = np.column_stack([fact.g(alpha), fact.g(beta)])
    d = fact.deltas
    return PrincipalMap((alpha, beta), MapPoints(fact.row_labels, rows),
                        MapPoints(fact.col_labels, cols), (float(d[alpha - 1]), float(d[beta - 1])))


def partitions(fact_or_dec, alpha: int) -> tuple[np.ndarray, np.ndarray]:
    """Boolean masks of ``S`` (rows) and ``T`` (columns) for axis ``alpha``.

    Membership follows the sign vectors, ``S = {i : v_alpha(i) = +1}``, which
    by ``v = sign(a)`` and ``sign(0) = -1`` is ``{i : a_alpha(i) > 0}``.
    """
    dec = fact_or_dec.decomposition if isinstance(fact_or_dec, WeightedFactorization) else fact_or_dec
    if not 1 <= alpha <= dec.rank:
        raise AxisOutOfRange(f"axis {alpha} not available (rank {dec.rank})")
    ax = dec.axes[alpha - 1]
    return ax.v > 0, ax.u > 0
