"""Data model for elementary and aggregate compositional tables.

An elementary table ``X`` (I x J) holds one row per observation.  Pairing it
with a 0/1 indicator matrix ``Z`` (I x K) whose columns are the categories of
Q qualitative covariates yields the aggregate table ``T = Z' D_I X`` (K x J),
``D_I`` being the diagonal matrix of observation weights.

All containers are frozen dataclasses over read-only numpy arrays.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import (
    BlockSpecMismatch,
    BlockViolation,
    DimensionMismatch,
    InvalidWeights,
    MissingPairing,
    NegativeEntry,
    NonBinaryEntry,
    ParseError,
    UnknownLevel,
    ZeroTotal,
)

WEIGHT_TOL = 1e-10

PathLike = Union[str, "os.PathLike[str]"]


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def _labels(labels, n: int, prefix: str) -> tuple[str, ...]:
    if labels is None:
        return tuple(f"{prefix}{i + 1}" for i in range(n))
    labels = tuple(str(s) for s in labels)
    if len(labels) != n:
        raise DimensionMismatch(f"expected {n} labels, got {len(labels)}")
    return labels


# ---------------------------------------------------------------------------
# containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightVector:
    """Strictly positive probability weights attached to one table axis."""

    weights: np.ndarray
    labels: tuple[str, ...] = None

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 1 or w.size == 0:
            raise InvalidWeights("weights must be a non-empty 1-d vector")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InvalidWeights("weights must be finite and strictly positive")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise InvalidWeights(f"weights sum to {w.sum()!r}, not 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "labels", _labels(self.labels, w.size, "w"))

    def __len__(self) -> int:
        return self.weights.size

    def __array__(self, dtype=None, copy=None):
        return self.weights if dtype is None else self.weights.astype(dtype)

    @classmethod
    def uniform(cls, n: int, labels=None) -> "WeightVector":
        return cls(np.full(n, 1.0 / n), labels)


@dataclass(frozen=True)
class ElementaryTable:
    """Observation-by-part table of nonnegative amounts.

    Zeros are accepted; ``positive`` records whether every cell is strictly
    positive, which is what exact log interaction requires.
    """

    values: np.ndarray
    row_labels: tuple[str, ...] = None
    col_labels: tuple[str, ...] = None

    def __post_init__(self):
        x = _frozen(self.values)
        if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
            raise DimensionMismatch(f"need an I x J table with I, J >= 2, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ParseError("table contains non-finite values")
        _check_nonnegative(x)
        object.__setattr__(self, "values", x)
        object.__setattr__(self, "row_labels", _labels(self.row_labels, x.shape[0], "r"))
        object.__setattr__(self, "col_labels", _labels(self.col_labels, x.shape[1], "c"))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def positive(self) -> bool:
        return bool(np.all(self.values > 0))


@dataclass(frozen=True)
class IndicatorMatrix:
    """Complete disjunctive coding of Q qualitative covariates.

    Columns are grouped into contiguous blocks, one per covariate; within a
    block every row holds exactly one 1, so every row sums to Q.
    """

    values: np.ndarray
    category_labels: tuple[str, ...] = None
    blocks: tuple[int, ...] = None
    row_labels: tuple[str, ...] = None

    def __post_init__(self):
        z = np.asarray(self.values, dtype=float)
        if z.ndim != 2 or z.shape[0] < 1 or z.shape[1] < 1:
            raise DimensionMismatch(f"indicator matrix must be 2-d, got shape {z.shape}")
        bad = np.argwhere((z != 0) & (z != 1))
        if bad.size:
            i, k = bad[0]
            raise NonBinaryEntry(f"entry ({i}, {k}) = {z[i, k]!r} is not 0 or 1")
        blocks = (z.shape[1],) if self.blocks is None else tuple(int(b) for b in self.blocks)
        if any(b <= 0 for b in blocks) or sum(blocks) != z.shape[1]:
            raise BlockSpecMismatch(
                f"block sizes {list(blocks)} do not partition K={z.shape[1]} columns"
            )
        start = 0
        for q, size in enumerate(blocks):
            counts = z[:, start:start + size].sum(axis=1)
            rows = np.flatnonzero(counts != 1)
            if rows.size:
                raise BlockViolation(int(rows[0]), q, int(counts[rows[0]]))
            start += size
        object.__setattr__(self, "values", _frozen(z))
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "category_labels", _labels(self.category_labels, z.shape[1], "k"))
        object.__setattr__(self, "row_labels", _labels(self.row_labels, z.shape[0], "r"))

    @property
    def n_obs(self) -> int:
        return self.values.shape[0]

    @property
    def n_categories(self) -> int:
        return self.values.shape[1]

    @property
    def q(self) -> int:
        return len(self.blocks)

    @property
    def category_counts(self) -> np.ndarray:
        """Column marginals ``z_{+k}``."""
        return self.values.sum(axis=0)

    def block_slices(self) -> list[slice]:
        edges = np.concatenate([[0], np.cumsum(self.blocks)])
        return [slice(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:])]


@dataclass(frozen=True)
class AggregateTable:
    """Category-by-part table.

    ``q`` is the number of covariates behind the rows and ``indicator`` the
    matrix the table was built from; a table read directly from disk has
    ``q=1`` and no indicator, and operations that need the pairing refuse it.
    """

    values: np.ndarray
    row_labels: tuple[str, ...] = None
    col_labels: tuple[str, ...] = None
    q: int = 1
    indicator: IndicatorMatrix | None = field(default=None, repr=False)

    def __post_init__(self):
        t = _frozen(self.values)
        if t.ndim != 2:
            raise DimensionMismatch(f"aggregate table must be 2-d, got shape {t.shape}")
        if not np.all(np.isfinite(t)):
            raise ParseError("table contains non-finite values")
        _check_nonnegative(t)
        object.__setattr__(self, "values", t)
        object.__setattr__(self, "row_labels", _labels(self.row_labels, t.shape[0], "k"))
        object.__setattr__(self, "col_labels", _labels(self.col_labels, t.shape[1], "c"))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def positive(self) -> bool:
        return bool(np.all(self.values > 0))

    @property
    def paired(self) -> bool:
        return self.indicator is not None


Table = Union[ElementaryTable, AggregateTable]


def _check_nonnegative(values: np.ndarray) -> None:
    neg = np.argwhere(values < 0)
    if neg.size:
        i, j = neg[0]
        raise NegativeEntry(int(i), int(j), float(values[i, j]))


def _values(table) -> np.ndarray:
    if isinstance(table, (ElementaryTable, AggregateTable, IndicatorMatrix)):
        return table.values
    return np.asarray(table, dtype=float)


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------


def _read_labelled_csv(source, *, delimiter: str = ",", encoding: str = "utf-8"):
    if isinstance(source, io.TextIOBase):
        rows = list(csv.reader(source, delimiter=delimiter))
        name = getattr(source, "name", "<stream>")
    else:
        name = os.fspath(source)
        try:
            with open(name, newline="", encoding=encoding) as fh:
                rows = list(csv.reader(fh, delimiter=delimiter))
        except OSError as exc:
            raise ParseError(f"{name}: {exc.strerror or exc}") from None
        except UnicodeDecodeError:
            raise ParseError(f"{name}: not valid {encoding}") from None

    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise ParseError(f"{name}: need a header row and at least one data row")
    header, body = rows[0], rows[1:]
    width = len(header)
    col_labels = [h.strip() for h in header[1:]]
    row_labels, data = [], []
    for n, row in enumerate(body, start=2):
        if len(row) != width:
            raise ParseError(f"{name}: line {n} has {len(row)} fields, expected {width}")
        row_labels.append(row[0].strip())
        parsed = []
        for m, cell in enumerate(row[1:], start=2):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise ParseError(f"{name}: line {n}, field {m}: cannot parse {cell!r}") from None
        data.append(parsed)
    values = np.array(data, dtype=float).reshape(len(data), width - 1)
    if not np.all(np.isfinite(values)):
        raise ParseError(f"{name}: non-finite value")
    return values, row_labels, col_labels


def load_elementary(path: PathLike, *, delimiter: str = ",", encoding: str = "utf-8") -> ElementaryTable:
    """Read an elementary table from CSV.

    The first row holds column labels and the first column row labels.
    Negative cells raise :class:`NegativeEntry`; zero cells are accepted and
    reflected in ``ElementaryTable.positive``.
    """
    values, rows, cols = _read_labelled_csv(path, delimiter=delimiter, encoding=encoding)
    return ElementaryTable(values, rows, cols)


def load_aggregate(path: PathLike, *, delimiter: str = ",", encoding: str = "utf-8") -> AggregateTable:
    values, rows, cols = _read_labelled_csv(path, delimiter=delimiter, encoding=encoding)
    return AggregateTable(values, rows, cols, q=1)


def parse_blocks(spec: str | Sequence[int]) -> tuple[int, ...]:
    """Parse a block specification such as ``"2,3,3,3"``."""
    if isinstance(spec, str):
        try:
            blocks = tuple(int(s) for s in spec.split(",") if s.strip())
        except ValueError:
            raise BlockSpecMismatch(f"cannot parse block spec {spec!r}") from None
    else:
        blocks = tuple(int(s) for s in spec)
    if not blocks or any(b <= 0 for b in blocks):
        raise BlockSpecMismatch(f"block sizes must be positive integers, got {spec!r}")
    return blocks


def load_indicator(path: PathLike, blocks: str | Sequence[int], *, delimiter: str = ",",
                   encoding: str = "utf-8") -> IndicatorMatrix:
    values, rows, cols = _read_labelled_csv(path, delimiter=delimiter, encoding=encoding)
    return IndicatorMatrix(values, cols, parse_blocks(blocks), rows)


def indicator_from_categorical(codes, levels: Sequence[Sequence], *, names: Sequence[str] | None = None,
                               row_labels=None) -> IndicatorMatrix:
    """One-hot encode an I x Q table of category codes.

    Columns follow the covariates in order and, inside each covariate, the
    levels in the order given.
    """
    codes = np.asarray(codes, dtype=object)
    if codes.ndim == 1:
        codes = codes[:, None]
    n, q = codes.shape
    if len(levels) != q:
        raise DimensionMismatch(f"{q} covariates but {len(levels)} level sets")
    names = [f"V{c + 1}" for c in range(q)] if names is None else list(names)
    z = np.zeros((n, sum(len(lv) for lv in levels)))
    labels = []
    offset = 0
    for c, lv in enumerate(levels):
        index = {level: pos for pos, level in enumerate(lv)}
        for i in range(n):
            try:
                z[i, offset + index[codes[i, c]]] = 1.0
            except KeyError:
                raise UnknownLevel(f"row {i}: code {codes[i, c]!r} not a level of {names[c]}") from None
        labels.extend(f"{names[c]}={level}" for level in lv)
        offset += len(lv)
    return IndicatorMatrix(z, labels, tuple(len(lv) for lv in levels), row_labels)


# ---------------------------------------------------------------------------
# aggregation and marginals
# ---------------------------------------------------------------------------


def aggregate(x: ElementaryTable, z: IndicatorMatrix, row_weights: WeightVector | None = None) -> AggregateTable:
    """Build ``T = Z' diag(w) X``; with ``w = 1/I`` this is ``Z'X / I``."""
    if z.n_obs != x.shape[0]:
        raise DimensionMismatch(f"X has {x.shape[0]} rows but Z has {z.n_obs}")
    if row_weights is None:
        row_weights = WeightVector.uniform(x.shape[0], x.row_labels)
    if len(row_weights) != x.shape[0]:
        raise DimensionMismatch(f"{len(row_weights)} row weights for {x.shape[0]} rows")
    t = z.values.T @ (row_weights.weights[:, None] * x.values)
    return AggregateTable(t, z.category_labels, x.col_labels, q=z.q, indicator=z)


class Marginals(NamedTuple):
    rows: np.ndarray
    cols: np.ndarray
    total: float
    proportions: np.ndarray


def marginals(table) -> Marginals:
    """Row sums, column sums, grand total and the proportion table."""
    v = _values(table)
    total = float(v.sum())
    if total == 0:
        raise ZeroTotal("grand total is zero")
    p = v / total
    return Marginals(v.sum(axis=1), v.sum(axis=0), total, p)


# ---------------------------------------------------------------------------
# weight schemes
# ---------------------------------------------------------------------------

SCHEMES = (
    "elementary-uniform",
    "aggregate-marginal",
    "aggregate-uniform",
    "column-marginal",
    "marginal",
    "custom",
)


def weight_scheme(name: str, table=None, indicator: IndicatorMatrix | None = None, *,
                  row_weights=None, col_weights=None) -> tuple[WeightVector, WeightVector]:
    """Row and column weights for one of the standard schemes.

    ``elementary-uniform``
        ``(1/I, 1/J)`` for an elementary table.
    ``aggregate-marginal``
        ``(z_{+k}/z_{++}, 1/J)``; needs the indicator matrix.
    ``aggregate-uniform``
        ``(1/K, 1/J)``.
    ``column-marginal``
        uniform rows, ``p_{+j}`` columns.
    ``marginal``
        ``(p_{k+}, p_{+j})``, the correspondence analysis choice.
    ``custom``
        ``row_weights`` and ``col_weights`` validated as given.
    """
    if name not in SCHEMES:
        raise InvalidWeights(f"unknown weight scheme {name!r}; choose from {', '.join(SCHEMES)}")
    if name == "custom":
        if row_weights is None or col_weights is None:
            raise InvalidWeights("custom scheme needs both row_weights and col_weights")
        rw = row_weights if isinstance(row_weights, WeightVector) else WeightVector(row_weights)
        cw = col_weights if isinstance(col_weights, WeightVector) else WeightVector(col_weights)
        return rw, cw

    if name == "aggregate-marginal":
        if indicator is None:
            if isinstance(table, AggregateTable) and table.paired:
                indicator = table.indicator
            else:
                raise MissingPairing("aggregate-marginal weights need the indicator matrix")
        counts = indicator.category_counts
        rw = WeightVector(counts / counts.sum(), indicator.category_labels)
        n_cols = _values(table).shape[1] if table is not None else None
        if n_cols is None:
            raise InvalidWeights("aggregate-marginal weights need the table for its columns")
        return rw, WeightVector.uniform(n_cols, _col_labels(table))

    if table is None:
        raise InvalidWeights(f"scheme {name!r} needs a table")
    v = _values(table)
    if name == "aggregate-uniform" and indicator is not None:
        n_rows = indicator.n_categories
    else:
        n_rows = v.shape[0]
    rows_l = _row_labels(table) if n_rows == v.shape[0] else indicator.category_labels
    if name in ("elementary-uniform", "aggregate-uniform"):
        return WeightVector.uniform(n_rows, rows_l), WeightVector.uniform(v.shape[1], _col_labels(table))

    m = marginals(v)
    cw = WeightVector(m.proportions.sum(axis=0), _col_labels(table))
    if name == "column-marginal":
        return WeightVector.uniform(v.shape[0], rows_l), cw
    return WeightVector(m.proportions.sum(axis=1), rows_l), cw


def _row_labels(table):
    return getattr(table, "row_labels", None)


def _col_labels(table):
    return getattr(table, "col_labels", None)
