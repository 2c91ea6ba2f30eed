"""Quality of signed residuals (QSR).

For axis ``alpha`` with residual matrix ``X_alpha``::

    QSR_alpha = delta_alpha / sum |X_alpha(i, j)|

and for each of the four quadrants ``E x F`` cut out by the sign vectors
``v_alpha`` (rows, ``S = {v = +1}``) and ``u_alpha`` (columns,
``T = {u = +1}``)::

    QSR_alpha(E, F) = sum_{E x F} X_alpha(i, j) / sum_{E x F} |X_alpha(i, j)|

Because ``X_alpha`` is double-centered the numerator is ``+delta/4`` on
``S x T`` and ``S' x T'`` and ``-delta/4`` on the two off-diagonal
quadrants, which is how it is evaluated here.  Its magnitude equals
``sum v X u / sum |X|`` on every quadrant.  A quadrant without L1 mass has
no defined index and is reported as ``None``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import AxisOutOfRange
from .factorization import WeightedFactorization, partitions

QUADRANTS = ("S,T", "Sbar,Tbar", "Sbar,T", "S,Tbar")
_SIGN = {"S,T": 1.0, "Sbar,Tbar": 1.0, "Sbar,T": -1.0, "S,Tbar": -1.0}
DASH = "—"


@dataclass(frozen=True)
class QsrAxis:
    alpha: int
    delta: float
    qsr: float
    quadrants: dict
    rows_s: tuple[str, ...] = field(default=())
    cols_t: tuple[str, ...] = field(default=())

    @property
    def percent(self) -> float:
        return 100.0 * self.qsr

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "delta": self.delta,
            "qsr": self.qsr,
            "qsr_percent": self.percent,
            "quadrants": dict(self.quadrants),
            "S": list(self.rows_s),
            "T": list(self.cols_t),
        }


def qsr(fact: WeightedFactorization, alpha: int) -> QsrAxis:
    """Global and quadrant QSR of axis ``alpha`` (1-based)."""
    dec = fact.decomposition
    if not 1 <= alpha <= dec.rank:
        raise AxisOutOfRange(f"axis {alpha} not available (rank {dec.rank})")
    delta = dec.axes[alpha - 1].delta
    resid = np.abs(dec.residuals[alpha - 1])
    s, t = partitions(dec, alpha)
    masks = {"S,T": (s, t), "Sbar,Tbar": (~s, ~t), "Sbar,T": (~s, t), "S,Tbar": (s, ~t)}
    quadrants = {}
    for name, (e, f) in masks.items():
        mass = resid[np.ix_(e, f)].sum()
        quadrants[name] = float(_SIGN[name] * delta / 4.0 / mass) if mass > 0 else None
    rows = tuple(lab for lab, m in zip(fact.row_labels, s) if m)
    cols = tuple(lab for lab, m in zip(fact.col_labels, t) if m)
    return QsrAxis(alpha, float(delta), float(delta / resid.sum()), quadrants, rows, cols)


def qsr_report(fact: WeightedFactorization, n_axes: int | None = None) -> list[QsrAxis]:
    k = fact.rank if n_axes is None else min(n_axes, fact.rank)
    return [qsr(fact, alpha) for alpha in range(1, k + 1)]


# ---------------------------------------------------------------------------
# comparison table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MethodBlock:
    name: str
    axes: tuple[QsrAxis, ...]
    requested: int

    @property
    def truncated(self) -> bool:
        return len(self.axes) < self.requested

    @property
    def score(self) -> float:
        """``QSR_1 + QSR_2`` in percent, over the axes that exist."""
        return float(sum(ax.percent for ax in self.axes[:2]))


@dataclass(frozen=True)
class QsrTable:
    blocks: tuple[MethodBlock, ...]

    def ranking(self) -> list[MethodBlock]:
        return sorted(self.blocks, key=lambda b: (-b.score, b.name))

    def to_text(self) -> str:
        return format_table(self)

    def to_csv(self) -> str:
        return table_csv(self)

    def to_dict(self) -> dict:
        return {
            "methods": [
                {"name": b.name, "score": b.score, "truncated": b.truncated,
                 "axes": [ax.to_dict() for ax in b.axes]}
                for b in self.blocks
            ],
            "ranking": [b.name for b in self.ranking()],
        }


def qsr_table(facts: Sequence[WeightedFactorization], names: Sequence[str], n_axes: int = 4) -> QsrTable:
    """Collect per-axis QSR statistics of several factorizations."""
    if len(facts) != len(names):
        raise ValueError("one name per factorization")
    return QsrTable(tuple(MethodBlock(name, tuple(qsr_report(f, n_axes)), n_axes)
                          for f, name in zip(facts, names)))


def _pct(x) -> str:
    return DASH if x is None else f"{100.0 * x:.1f}"


def format_table(table: QsrTable) -> str:
    """Plain-text rendering laid out like a published QSR table."""
    head = ("Axis", "QSR(V+U+, V-U-)", "QSR(V-U+, V+U-)", "QSR", "delta")
    widths = (5, 18, 18, 7, 12)
    rule = "=" * (sum(widths) + len(widths) - 1)

    def line(cells):
        return " ".join(str(c).ljust(w) for c, w in zip(cells, widths)).rstrip()

    out = ["QSR (%) per axis", rule]
    for block in table.blocks:
        out.append(block.name.center(len(rule)).rstrip())
        out.append(line(head))
        out.append("-" * len(rule))
        for ax in block.axes:
            q = ax.quadrants
            out.append(line((
                ax.alpha,
                f"({_pct(q['S,T'])}, {_pct(q['Sbar,Tbar'])})",
                f"({_pct(q['Sbar,T'])}, {_pct(q['S,Tbar'])})",
                f"{ax.percent:.1f}",
                f"{ax.delta:.4g}",
            )))
        terms = "+".join(f"{ax.percent:.1f}" for ax in block.axes[:2])
        note = ""
        if len(block.axes) < 2:
            note = f"  (truncated: only {len(block.axes)} axis available)"
        elif block.truncated:
            note = f"  (truncated: {len(block.axes)} of {block.requested} axes)"
        out.append(f"QSR1+QSR2 = {terms} = {block.score:.1f}{note}")
        out.append(rule)
    ranked = table.ranking()
    out.append("Preference by QSR1+QSR2: " + " > ".join(f"{b.name} ({b.score:.1f})" for b in ranked))
    return "\n".join(out) + "\n"


def table_csv(table: QsrTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "axis", "qsr_S_T", "qsr_Sbar_Tbar", "qsr_Sbar_T", "qsr_S_Tbar",
                "qsr", "delta", "score"])
    for block in table.blocks:
        for ax in block.axes:
            q = ax.quadrants
            w.writerow([block.name, ax.alpha] + ["" if q[k] is None else repr(q[k]) for k in QUADRANTS]
                       + [repr(ax.qsr), repr(ax.delta), repr(block.score)])
    return buf.getvalue()
