"""Taxicab singular value decomposition.

Each step finds the sign vectors ``u`` (columns) and ``v`` (rows)
maximising ``v' X u``, which equals ``max ||X u||_1`` over
``u in {-1, +1}^J``.  With ``a = X u`` and ``b = X' v`` the dispersion is
``delta = ||a||_1 = ||b||_1`` and the residual is deflated by the rank-one
term ``a b' / delta``.  The score vectors of different steps are conjugate
rather than orthogonal: ``a_alpha' sign(a_beta) = 0`` for ``alpha > beta``.

The combinatorial maximisation is solved by enumeration over the smaller
dimension when it has at most :data:`EXHAUSTIVE_LIMIT` entries and by a
multi-start alternating ascent otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import ZeroMatrix

EXHAUSTIVE_LIMIT = 20
DEFAULT_SEED = 0x5EED_7A81_CAB5_0001
N_RANDOM_STARTS = 32
MAX_ASCENT_ITER = 1000
_CHUNK = 1 << 14
_TIE_RTOL = 1e-12

Mode = Literal["auto", "exhaustive", "ascent"]


def sign(x: np.ndarray) -> np.ndarray:
    """Coordinatewise sign with ``sign(0) = -1``."""
    return np.where(np.asarray(x) > 0, 1.0, -1.0)


@dataclass(frozen=True)
class SolverTrace:
    method: str
    starts: int
    iterations: int

    def to_dict(self) -> dict:
        return {"method": self.method, "starts": self.starts, "iterations": self.iterations}


@dataclass(frozen=True)
class TaxicabAxis:
    delta: float
    u: np.ndarray
    v: np.ndarray
    a: np.ndarray
    b: np.ndarray
    trace: SolverTrace = field(default=None, compare=False)

    def flipped(self) -> "TaxicabAxis":
        return TaxicabAxis(self.delta, -self.u, -self.v, -self.a, -self.b, self.trace)

    def rank_one(self) -> np.ndarray:
        return np.outer(self.a, self.b) / self.delta

    def to_dict(self) -> dict:
        d = {
            "delta": float(self.delta),
            "u": self.u.astype(int).tolist(),
            "v": self.v.astype(int).tolist(),
            "a": self.a.tolist(),
            "b": self.b.tolist(),
        }
        if self.trace is not None:
            d["solver"] = self.trace.to_dict()
        return d


@dataclass(frozen=True)
class TaxicabDecomposition:
    """Result of :func:`decompose`.

    ``residuals[alpha]`` is the matrix the axis ``alpha`` was extracted from
    (``residuals[0]`` is the input); ``residuals[rank]`` is what is left.
    ``residual_l1_norms`` holds the entrywise L1 norm of each of them.
    """

    axes: tuple[TaxicabAxis, ...]
    residuals: tuple[np.ndarray, ...]
    residual_l1_norms: tuple[float, ...]

    @property
    def rank(self) -> int:
        return len(self.axes)

    @property
    def deltas(self) -> np.ndarray:
        return np.array([ax.delta for ax in self.axes])

    @property
    def solver_trace(self) -> list[SolverTrace]:
        return [ax.trace for ax in self.axes]

    def reconstruct(self, n_axes: int | None = None) -> np.ndarray:
        out = np.zeros_like(self.residuals[0])
        for ax in self.axes[:n_axes]:
            out += ax.rank_one()
        return out

    def to_dict(self) -> dict:
        return {
            "shape": list(self.residuals[0].shape),
            "rank": self.rank,
            "axes": [ax.to_dict() for ax in self.axes],
            "residual_l1_norms": [float(n) for n in self.residual_l1_norms],
        }


# ---------------------------------------------------------------------------
# single step
# ---------------------------------------------------------------------------


def _sign_block(start: int, stop: int, m: int) -> np.ndarray:
    """Sign vectors ``start..stop-1`` of length ``m`` with leading +1.

    Vector ``n`` reads the binary digits of ``n`` most significant first,
    0 -> -1 and 1 -> +1, so increasing ``n`` is increasing lexicographic
    order.
    """
    n = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(m - 2, -1, -1, dtype=np.int64)
    bits = (n[None, :] >> shifts[:, None]) & 1
    return np.vstack([np.ones((1, n.size)), 2.0 * bits - 1.0])


def _enumerate(x: np.ndarray) -> tuple[np.ndarray, int]:
    """Global maximiser of ``||x u||_1`` over ``u`` with ``u[0] = +1``."""
    m = x.shape[1]
    total = 1 << (m - 1)
    best_val, best_u = -np.inf, None
    for start in range(0, total, _CHUNK):
        block = _sign_block(start, min(start + _CHUNK, total), m)
        obj = np.abs(x @ block).sum(axis=0)
        top = obj.max()
        if best_u is None or top > best_val * (1.0 + _TIE_RTOL):
            # earliest vector within tolerance of the maximum wins
            k = int(np.flatnonzero(obj >= top * (1.0 - _TIE_RTOL))[0])
            best_val, best_u = obj[k], block[:, k].copy()
    return best_u, total


def _ascend(x: np.ndarray, u: np.ndarray, history: list | None = None):
    """Alternate ``v = sign(x u)``, ``u = sign(x' v)`` to a fixed point."""
    a = x @ u
    value = np.abs(a).sum()
    if history is not None:
        history.append(value)
    stalls = 0
    for it in range(1, MAX_ASCENT_ITER + 1):
        v = sign(a)
        b = x.T @ v
        u_new = sign(b)
        if np.array_equal(u_new, u):
            return u, v, a, b, it
        a_new = x @ u_new
        new_value = np.abs(a_new).sum()
        if history is not None:
            history.append(new_value)
        stalls = stalls + 1 if new_value <= value else 0
        u, a, value = u_new, a_new, new_value
        if stalls >= 3:
            break
    v = sign(a)
    return u, v, a, x.T @ v, it


@dataclass(frozen=True)
class L1Solution:
    delta: float
    u: np.ndarray
    v: np.ndarray
    a: np.ndarray
    b: np.ndarray
    trace: SolverTrace

    def as_axis(self) -> TaxicabAxis:
        return TaxicabAxis(self.delta, self.u, self.v, self.a, self.b, self.trace)


def _solution(u, v, a, b, trace) -> L1Solution:
    return L1Solution(float(v @ a), u, v, a, b, trace)


def _maximize_exhaustive(x: np.ndarray) -> L1Solution:
    transposed = x.shape[1] > x.shape[0]
    y = x.T if transposed else x
    u0, count = _enumerate(y)
    u, v, a, b, it = _ascend(y, u0)
    trace = SolverTrace("exhaustive", count, it)
    if transposed:
        return _solution(v, u, b, a, trace)
    return _solution(u, v, a, b, trace)


def _maximize_ascent(x: np.ndarray, seed: int, n_random: int) -> L1Solution:
    rng = np.random.default_rng(seed)
    starts = [sign(x[:, j]) for j in range(x.shape[1])]
    starts += list(rng.choice([-1.0, 1.0], size=(n_random, x.shape[0])))
    best, best_val, iters = None, -np.inf, 0
    for v0 in starts:
        u, v, a, b, it = _ascend(x, sign(x.T @ v0))
        iters += it
        val = v @ a
        if best is None or val > best_val * (1.0 + _TIE_RTOL):
            best, best_val = (u, v, a, b), val
    return _solution(*best, SolverTrace("ascent", len(starts), iters))


def maximize_l1(matrix, mode: Mode = "auto", *, seed: int = DEFAULT_SEED,
                n_random: int = N_RANDOM_STARTS) -> L1Solution:
    """One taxicab step: maximise ``||X u||_1`` over sign vectors ``u``.

    Parameters
    ----------
    matrix : array_like, shape (I, J)
    mode : {"auto", "exhaustive", "ascent"}
        ``exhaustive`` enumerates the ``2^(m-1)`` sign vectors of the smaller
        dimension ``m`` and is exact; ties go to the lexicographically
        smallest vector.  ``ascent`` runs the alternating fixed-point
        iteration from every column sign pattern plus ``n_random`` seeded
        random starts.  ``auto`` is exhaustive when ``m <= 20``.

    Returns
    -------
    L1Solution
        ``delta``, ``u``, ``v``, ``a = X u``, ``b = X' v`` with
        ``delta = v' X u = ||a||_1``.
    """
    x = np.asarray(matrix, dtype=float)
    if x.ndim != 2:
        raise ValueError("matrix must be 2-d")
    if not np.any(x):
        raise ZeroMatrix("cannot extract an axis from the zero matrix")
    if mode == "auto":
        mode = "exhaustive" if min(x.shape) <= EXHAUSTIVE_LIMIT else "ascent"
    if mode == "exhaustive":
        return _maximize_exhaustive(x)
    if mode == "ascent":
        return _maximize_ascent(x, seed, n_random)
    raise ValueError(f"unknown mode {mode!r}")


def orient_axis(axis: TaxicabAxis) -> TaxicabAxis:
    """Fix the sign so that the largest ``|b_j|`` is positive (first on ties)."""
    k = int(np.argmax(np.abs(axis.b)))
    return axis.flipped() if axis.b[k] < 0 else axis


# ---------------------------------------------------------------------------
# full decomposition
# ---------------------------------------------------------------------------


def decompose(matrix, n_axes: int | None = None, mode: Mode = "auto", *,
              seed: int = DEFAULT_SEED, orient: bool = True, rtol: float = 1e-10) -> TaxicabDecomposition:
    """Stepwise taxicab decomposition with rank-one deflation.

    ``n_axes=None`` runs to full rank.  Extraction stops early once the
    residual L1 norm drops below ``rtol`` times that of the input.
    """
    x = np.array(matrix, dtype=float, copy=True)
    if x.ndim != 2:
        raise ValueError("matrix must be 2-d")
    if not np.all(np.isfinite(x)):
        raise ValueError("matrix has non-finite entries")
    limit = min(x.shape) if n_axes is None else min(int(n_axes), min(x.shape))
    norm0 = float(np.abs(x).sum())
    axes, residuals, norms = [], [x], [norm0]
    current = x
    for _ in range(limit):
        if norms[-1] == 0 or norms[-1] < rtol * norm0:
            break
        axis = maximize_l1(current, mode, seed=seed).as_axis()
        if orient:
            axis = orient_axis(axis)
        axes.append(axis)
        current = current - axis.rank_one()
        residuals.append(current)
        norms.append(float(np.abs(current).sum()))
    for r in residuals:
        r.setflags(write=False)
    return TaxicabDecomposition(tuple(axes), tuple(residuals), tuple(norms))
