"""Serialisation of tables, interactions, decompositions and scores.

CSV files carry a header row and a label column; floats are written with
``repr`` so that a round trip is lossless and reruns are byte-identical.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import numpy as np

from .factorization import PrincipalMap, WeightedFactorization
from .interaction import InteractionMatrix
from .tables import WeightVector, _read_labelled_csv


def _fmt(x) -> str:
    x = float(x)
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def write_matrix_csv(path, values, row_labels, col_labels, corner: str = "") -> None:
    values = np.asarray(values)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([corner, *col_labels])
        for label, row in zip(row_labels, values):
            w.writerow([label, *(_fmt(v) for v in row)])


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def interaction_sidecar(m: InteractionMatrix) -> dict:
    return {
        "kind": m.kind,
        "row_weights": m.row_weights.weights.tolist(),
        "col_weights": m.col_weights.weights.tolist(),
        "Q": m.q,
    }


def save_interaction(m: InteractionMatrix, path) -> tuple[Path, Path]:
    """Write values to ``path`` (CSV) and metadata to ``path`` with ``.json``."""
    path = Path(path)
    sidecar = path.with_suffix(".json")
    write_matrix_csv(path, m.values, m.row_labels, m.col_labels)
    write_json(sidecar, interaction_sidecar(m))
    return path, sidecar


def load_interaction(path) -> InteractionMatrix:
    path = Path(path)
    values, rows, cols = _read_labelled_csv(os.fspath(path))
    with open(path.with_suffix(".json"), encoding="utf-8") as fh:
        meta = json.load(fh)
    return InteractionMatrix(values, WeightVector(meta["row_weights"], rows),
                             WeightVector(meta["col_weights"], cols), meta["kind"], meta["Q"],
                             tuple(rows), tuple(cols))


def factorization_dict(fact: WeightedFactorization) -> dict:
    d = fact.decomposition.to_dict()
    d["kind"] = fact.source.kind
    d["row_labels"] = list(fact.row_labels)
    d["col_labels"] = list(fact.col_labels)
    d["row_weights"] = fact.source.row_weights.weights.tolist()
    d["col_weights"] = fact.source.col_weights.weights.tolist()
    return d


def save_factor_scores(fact: WeightedFactorization, rows_path, cols_path) -> None:
    header = [f"axis{a}" for a in range(1, fact.rank + 1)]
    write_matrix_csv(rows_path, fact.row_scores, fact.row_labels, header)
    write_matrix_csv(cols_path, fact.col_scores, fact.col_labels, header)


def map_dict(pm: PrincipalMap) -> dict:
    def pts(p, role):
        return [{"label": lab, "role": role, "x": float(x), "y": float(y)}
                for lab, (x, y) in zip(p.labels, p.coords)]

    return {"axes": list(pm.axes), "deltas": list(pm.deltas),
            "points": pts(pm.rows, "row") + pts(pm.cols, "column")}
