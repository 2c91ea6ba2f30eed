"""End-to-end analysis of paired data with one or more methods.

Methods
-------
``t-tlra``
    log interaction of the aggregate table ``T``, rows weighted by the
    category shares ``z_+k / z_++``.
``a-tlra``
    aggregate of the elementary log interactions, rows weighted ``1/K``.
``a-approx``
    closed-form first-order approximation of ``a-tlra``.
"""

from __future__ import annotations

import hashlib
import platform
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, DimensionMismatch, InputError
from .factorization import DEFAULT_AXES, WeightedFactorization, factorize, principal_map
from .interaction import (
    InteractionMatrix,
    aggregate_of_log_interactions,
    approx_aggregate_of_log_interactions,
    log_interaction,
)
from .io import factorization_dict, map_dict, save_factor_scores, save_interaction, write_json
from .plotting import map_svg
from .qsr import QsrTable, qsr_report, qsr_table
from .tables import (
    AggregateTable,
    ElementaryTable,
    IndicatorMatrix,
    WeightVector,
    _read_labelled_csv,
    aggregate,
    load_aggregate,
    load_elementary,
    load_indicator,
    marginals,
)
from .tsvd import DEFAULT_SEED

METHODS = ("t-tlra", "a-tlra", "a-approx")
TITLES = {"t-tlra": "T-TLRA", "a-tlra": "A-TLRA", "a-approx": "A-1st order TSVD"}
PAIRED_ONLY = ("a-tlra", "a-approx")


@dataclass(frozen=True)
class AnalysisConfig:
    methods: tuple[str, ...] = METHODS
    n_axes: int = DEFAULT_AXES
    mode: str = "auto"
    seed: int = DEFAULT_SEED
    out_dir: str = "out"
    plots: bool = True
    col_weights: str = "uniform"
    pseudocount: float | None = None
    workers: int = 3

    def __post_init__(self):
        methods = tuple(self.methods)
        if not methods:
            raise ConfigError("at least one method is required")
        unknown = [m for m in methods if m not in METHODS]
        if unknown:
            raise ConfigError(f"unknown method(s) {', '.join(unknown)}; choose from {', '.join(METHODS)}")
        if len(set(methods)) != len(methods):
            raise ConfigError("methods listed twice")
        object.__setattr__(self, "methods", methods)
        if int(self.n_axes) < 1:
            raise ConfigError("n_axes must be at least 1")
        if self.mode not in ("auto", "exhaustive", "ascent"):
            raise ConfigError(f"unknown solver mode {self.mode!r}")


@dataclass
class MethodResult:
    name: str
    interaction: InteractionMatrix
    factorization: WeightedFactorization
    files: list[Path] = field(default_factory=list)


@dataclass
class AnalysisResult:
    config: AnalysisConfig
    methods: dict[str, MethodResult]
    table: QsrTable
    files: list[Path]


@dataclass(frozen=True)
class Inputs:
    x: ElementaryTable | None
    z: IndicatorMatrix | None
    t: AggregateTable


def load_inputs(x_path=None, z_path=None, blocks=None, t_path=None) -> Inputs:
    if t_path is not None and (x_path is not None or z_path is not None):
        raise ConfigError("give either --t or --x/--z, not both")
    if t_path is not None:
        return Inputs(None, None, load_aggregate(t_path))
    if x_path is None or z_path is None:
        raise ConfigError("need --x and --z (paired data) or --t (aggregate table)")
    if blocks is None:
        raise ConfigError("--blocks is required with --z")
    x = load_elementary(x_path)
    z = load_indicator(z_path, blocks)
    if z.n_obs != x.shape[0]:
        raise DimensionMismatch(f"X has {x.shape[0]} rows but Z has {z.n_obs}")
    return Inputs(x, z, aggregate(x, z))


def _column_weights(spec: str, t: AggregateTable) -> WeightVector:
    if spec == "uniform":
        return WeightVector.uniform(t.shape[1], t.col_labels)
    if spec == "marginal":
        return WeightVector(marginals(t).proportions.sum(axis=0), t.col_labels)
    values, labels, _ = _read_labelled_csv(spec)
    if values.shape[1] != 1 or values.shape[0] != t.shape[1]:
        raise InputError(f"{spec}: expected {t.shape[1]} rows of one weight each")
    if list(labels) != list(t.col_labels):
        raise InputError(f"{spec}: weight labels do not match the table columns")
    return WeightVector(values[:, 0], t.col_labels)


def build_interaction(method: str, data: Inputs, col_weights: WeightVector,
                      pseudocount: float | None = None) -> InteractionMatrix:
    if method == "t-tlra":
        t = data.t
        if data.z is not None:
            counts = data.z.category_counts
            rows = WeightVector(counts / counts.sum(), t.row_labels)
        else:
            rows = WeightVector.uniform(t.shape[0], t.row_labels)
        return log_interaction(t, rows, col_weights, pseudocount=pseudocount)
    if data.z is None:
        raise ConfigError(f"method {method} needs paired data (--x and --z)")
    if method == "a-tlra":
        return aggregate_of_log_interactions(data.x, data.z, None, col_weights, pseudocount=pseudocount)
    if method == "a-approx":
        return approx_aggregate_of_log_interactions(data.t, data.z, col_weights)
    raise ConfigError(f"unknown method {method!r}")


def map_pairs(rank: int, n_axes: int) -> list[tuple[int, int]]:
    k = min(rank, n_axes)
    return [(a, a + 1) for a in range(1, k, 2)]


def _run_method(method: str, data: Inputs, cw: WeightVector, config: AnalysisConfig, root: Path) -> MethodResult:
    inter = build_interaction(method, data, cw, config.pseudocount)
    fact = factorize(inter, config.n_axes, config.mode, seed=config.seed)
    res = MethodResult(method, inter, fact)
    d = root / method
    d.mkdir(parents=True, exist_ok=True)
    res.files.extend(save_interaction(inter, d / "interaction.csv"))
    write_json(d / "factorization.json", factorization_dict(fact))
    save_factor_scores(fact, d / "row_scores.csv", d / "col_scores.csv")
    single = qsr_table([fact], [TITLES[method]], config.n_axes)
    (d / "qsr.txt").write_text(single.to_text(), encoding="utf-8")
    (d / "qsr.csv").write_text(single.to_csv(), encoding="utf-8")
    write_json(d / "qsr.json", [ax.to_dict() for ax in qsr_report(fact, config.n_axes)])
    res.files += [d / n for n in ("factorization.json", "row_scores.csv", "col_scores.csv",
                                  "qsr.txt", "qsr.csv", "qsr.json")]
    for a, b in map_pairs(fact.rank, config.n_axes):
        pm = principal_map(fact, (a, b))
        stem = d / f"map_{a}_{b}"
        write_json(stem.with_suffix(".json"), map_dict(pm))
        res.files.append(stem.with_suffix(".json"))
        if config.plots:
            stem.with_suffix(".svg").write_text(
                map_svg(pm, title=f"{TITLES[method]}: axes {a} and {b}"), encoding="utf-8")
            res.files.append(stem.with_suffix(".svg"))
    return res


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_analysis(config: AnalysisConfig, x_path=None, z_path=None, blocks=None, t_path=None) -> AnalysisResult:
    """Run every configured method and write all artifacts under ``config.out_dir``."""
    data = load_inputs(x_path, z_path, blocks, t_path)
    if data.z is None:
        refused = [m for m in config.methods if m in PAIRED_ONLY]
        if refused:
            raise ConfigError(
                f"{', '.join(refused)} need paired data (--x, --z); an aggregate table alone has no Q or z_+k"
            )
    cw = _column_weights(config.col_weights, data.t)
    root = Path(config.out_dir)
    root.mkdir(parents=True, exist_ok=True)

    with ThreadPoolExecutor(max_workers=max(1, config.workers)) as pool:
        futures = [pool.submit(_run_method, m, data, cw, config, root) for m in config.methods]
        results = [f.result() for f in futures]
    methods = {r.name: r for r in results}

    table = qsr_table([r.factorization for r in results], [TITLES[r.name] for r in results], config.n_axes)
    (root / "comparison.txt").write_text(table.to_text(), encoding="utf-8")
    (root / "comparison.csv").write_text(table.to_csv(), encoding="utf-8")
    write_json(root / "comparison.json", table.to_dict())
    files = [f for r in results for f in r.files]
    files += [root / "comparison.txt", root / "comparison.csv", root / "comparison.json"]

    cfg = asdict(config)
    cfg.pop("out_dir")
    cfg.pop("workers")
    inputs = {name: str(p) for name, p in (("x", x_path), ("z", z_path), ("t", t_path)) if p is not None}
    manifest = {
        "config": cfg,
        "blocks": None if data.z is None else list(data.z.blocks),
        "seed": config.seed,
        "inputs": {k: {"path": v, "sha256": _sha256(Path(v))} for k, v in inputs.items()},
        "versions": {"aggcoda": __version__, "numpy": np.__version__, "python": platform.python_version()},
        "files": {f.relative_to(root).as_posix(): _sha256(f) for f in sorted(files)},
    }
    write_json(root / "manifest.json", manifest)
    files.append(root / "manifest.json")
    return AnalysisResult(config, methods, table, files)
