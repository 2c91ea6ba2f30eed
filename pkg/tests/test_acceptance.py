"""Acceptance criteria.

Each test records one ``PASS``/``FAIL`` line, printed in the terminal
summary (see ``conftest.py``).
"""

import time

import numpy as np
import pytest

from aggcoda import (
    InteractionMatrix,
    WeightVector,
    aggregate,
    aggregate_of_log_interactions,
    approx_aggregate_of_log_interactions,
    approx_log_interaction,
    approximation_gap,
    decompose,
    factorize,
    log_interaction,
    qsr_report,
    weight_scheme,
)
from aggcoda.cli import main
from aggcoda.factorization import partitions
from aggcoda.qsr import QUADRANTS
from aggcoda.tsvd import sign
from helpers import random_paired, random_weights
from oracles import brute_force_l1

RESULTS = []


def record(number, title, ok, detail=""):
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else ""))
    assert ok, detail


# -- shared suites ---------------------------------------------------------------

@pytest.fixture(scope="module")
def matrix_suite():
    """100 random matrices up to 12 x 10, decomposed to full rank."""
    rng = np.random.default_rng(2)
    out = []
    for _ in range(100):
        x = rng.normal(size=(int(rng.integers(2, 13)), int(rng.integers(2, 11))))
        out.append((x, decompose(x)))
    return out


@pytest.fixture(scope="module")
def factor_suite():
    """100 random weighted interactions up to 12 x 10, factorized to full rank."""
    rng = np.random.default_rng(3)
    out = []
    for _ in range(100):
        r, c = int(rng.integers(2, 13)), int(rng.integers(2, 11))
        wr, wc = random_weights(rng, r), random_weights(rng, c)
        y = log_interaction(rng.uniform(0.05, 10.0, (r, c)), wr, wc)
        out.append(factorize(y, None))
    return out


# -- 1 -----------------------------------------------------------------------------

def test_c01_tsvd_oracle_equivalence():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    matches = exceed = brute_mismatch = 0
    n = 200
    for _ in range(n):
        x = rng.normal(size=(int(rng.integers(2, 11)), int(rng.integers(2, 9))))
        ex = decompose(x, 1, "exhaustive").axes[0].delta
        asc = decompose(x, 1, "ascent").axes[0].delta
        brute = brute_force_l1(x.tolist())
        exceed += asc > ex * (1 + 1e-12)
        matches += asc >= ex * (1 - 1e-12)
        brute_mismatch += abs(ex - brute) > 1e-12 * brute
    elapsed = time.perf_counter() - start
    ok = exceed == 0 and matches >= 0.95 * n and brute_mismatch == 0 and elapsed < 30
    record(1, "TSVD ascent vs exhaustive vs brute force", ok,
           f"ascent matched {matches}/{n}, exceeded {exceed}, brute-force mismatches {brute_mismatch}, "
           f"{elapsed:.1f}s")


# -- 2 -----------------------------------------------------------------------------

def test_c02_reconstruction(matrix_suite, factor_suite):
    worst = 0.0
    for x, dec in matrix_suite:
        worst = max(worst, np.abs(dec.reconstruct() - x).max() / np.abs(x).max())
    worst_y = 0.0
    for f in factor_suite:
        y = f.source.values
        worst_y = max(worst_y, np.abs(f.reconstruct() - y).max() / np.abs(y).max())
    record(2, "full-rank reconstruction of X and of weighted y", worst <= 1e-8 and worst_y <= 1e-8,
           f"max rel error {worst:.1e} (TSVD), {worst_y:.1e} (factorization)")


# -- 3 -----------------------------------------------------------------------------

def test_c03_balance(factor_suite):
    worst = 0.0
    axes = 0
    for f in factor_suite:
        dec = f.decomposition
        for k, ax in enumerate(dec.axes, start=1):
            s, t = partitions(f, k)
            resid = dec.residuals[k - 1]
            d = ax.delta
            errs = [
                ax.a[s].sum() - d / 2, -ax.a[~s].sum() - d / 2,
                ax.b[t].sum() - d / 2, -ax.b[~t].sum() - d / 2,
                resid[np.ix_(s, t)].sum() - d / 4, resid[np.ix_(~s, ~t)].sum() - d / 4,
                -resid[np.ix_(~s, t)].sum() - d / 4, -resid[np.ix_(s, ~t)].sum() - d / 4,
            ]
            worst = max(worst, max(abs(e) for e in errs) / d)
            axes += 1
    record(3, "score balance delta/2 and quadrant balance delta/4", worst <= 1e-9,
           f"{axes} axes, max error {worst:.1e} * delta")


# -- 4 -----------------------------------------------------------------------------

def test_c04_conjugacy(matrix_suite, factor_suite):
    decs = [d for _, d in matrix_suite] + [f.decomposition for f in factor_suite]
    worst, pairs = 0.0, 0
    for dec in decs:
        for al in range(dec.rank):
            for be in range(al):
                a, b = dec.axes[al], dec.axes[be]
                err = max(abs(a.a @ sign(b.a)), abs(a.b @ sign(b.b))) / b.delta
                worst = max(worst, err)
                pairs += 1
    record(4, "conjugacy for alpha > beta", worst <= 1e-9, f"{pairs} pairs, max {worst:.1e} * delta_beta")


# -- 5 -----------------------------------------------------------------------------

def test_c05_scale_invariance():
    rng = np.random.default_rng(5)
    worst = {"a": 0.0, "b": 0.0, "c": 0.0}
    for _ in range(100):
        x, z = random_paired(rng, n=int(rng.integers(8, 30)), cols=int(rng.integers(2, 8)), blocks=(2, 3, 3))
        t = aggregate(x, z)
        cases = {
            "a": (x.values, *weight_scheme("elementary-uniform", x)),
            "b": (t.values, *weight_scheme("aggregate-marginal", t)),
            "c": (t.values, *weight_scheme("aggregate-uniform", t)),
        }
        for name, (v, rw, cw) in cases.items():
            a = rng.uniform(0.01, 100.0, v.shape[0])
            b = rng.uniform(0.01, 100.0, v.shape[1])
            d = log_interaction(v, rw, cw).values - log_interaction(a[:, None] * v * b[None, :], rw, cw).values
            worst[name] = max(worst[name], np.abs(d).max())
    ok = max(worst.values()) <= 1e-10
    record(5, "scale invariance under each weight scheme", ok,
           ", ".join(f"scheme ({k}) {v:.1e}" for k, v in worst.items()))


# -- 6 -----------------------------------------------------------------------------

def test_c06_double_centering():
    rng = np.random.default_rng(6)
    worst = {}
    for _ in range(50):
        x, z = random_paired(rng, n=int(rng.integers(6, 40)), cols=int(rng.integers(2, 9)), blocks=(2, 3, 3, 3))
        n, J = x.shape
        wi, wj = WeightVector.uniform(n), random_weights(rng, J)
        t = aggregate(x, z)
        rw = weight_scheme("aggregate-marginal", t)[0]
        for m in (log_interaction(t, rw, wj), approx_log_interaction(t, rw, wj),
                  log_interaction(x, wi, wj), approx_log_interaction(x, wi, wj),
                  aggregate_of_log_interactions(x, z, wi, wj), approx_aggregate_of_log_interactions(x, z, wj)):
            worst[m.kind] = max(worst.get(m.kind, 0.0), m.centering_error())
    ok = len(worst) == 6 and max(worst.values()) <= 1e-10
    record(6, "weighted double-centering of all six interaction kinds", ok,
           f"max {max(worst.values()):.1e} over {len(worst)} kinds")


# -- 7 -----------------------------------------------------------------------------

def test_c07_closed_form_specialisations():
    rng = np.random.default_rng(7)
    ca_bad = nsca_bad = 0
    for _ in range(100):
        t = rng.uniform(0.0, 5.0, (int(rng.integers(2, 10)), int(rng.integers(2, 10))))
        rw, cw = weight_scheme("marginal", t)
        p = t / t.sum()
        ca = p / np.outer(p.sum(1), p.sum(0)) - 1
        ca_bad += not np.array_equal(approx_log_interaction(t, rw, cw).values, ca)

        x, z = random_paired(rng, n=int(rng.integers(6, 30)), cols=int(rng.integers(2, 8)), blocks=(2, 3))
        tt = aggregate(x, z)
        pk = tt.values / tt.values.sum()
        nsca = z.q * (pk / pk.sum(0) - pk.sum(1)[:, None])
        got = approx_aggregate_of_log_interactions(tt, col_weights=WeightVector(pk.sum(0)))
        nsca_bad += not np.array_equal(got.values, nsca)
    record(7, "CA and Q x NSCA forms reproduced exactly", ca_bad == 0 and nsca_bad == 0,
           f"CA mismatches {ca_bad}/100, NSCA mismatches {nsca_bad}/100")


# -- 8 -----------------------------------------------------------------------------

def test_c08_closed_form_derivation():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        x, z = random_paired(rng, n=int(rng.integers(6, 40)), cols=int(rng.integers(2, 9)), blocks=(2, 3, 3))
        n, J = x.shape
        wj = random_weights(rng, J)
        per_cell = approx_log_interaction(x, WeightVector.uniform(n), wj).values
        chained = z.values.T @ per_cell / n
        closed = approx_aggregate_of_log_interactions(x, z, wj).values
        worst = max(worst, np.abs(chained - closed).max())
    record(8, "aggregated per-cell approximation equals closed form", worst <= 1e-10, f"max {worst:.1e}")


# -- 9 -----------------------------------------------------------------------------

def test_c09_second_order_convergence():
    rng = np.random.default_rng(9)
    ratios = []
    for _ in range(20):
        r, c = int(rng.integers(2, 9)), int(rng.integers(2, 9))
        wr, wc = random_weights(rng, r), random_weights(rng, c)
        e = rng.uniform(-1.0, 1.0, (r, c))
        gaps = []
        for eps in (1e-2, 5e-3, 2.5e-3):
            p = np.outer(wr.weights, wc.weights) * (1 + eps * e)
            gaps.append(approximation_gap(log_interaction(p, wr, wc), approx_log_interaction(p, wr, wc)).max_abs)
        ratios += [gaps[0] / gaps[1], gaps[1] / gaps[2]]
    ok = all(3.2 <= q <= 4.8 for q in ratios)
    record(9, "first-order gap shrinks by 4 when epsilon halves", ok,
           f"ratios in [{min(ratios):.3f}, {max(ratios):.3f}]")


# -- 10 ----------------------------------------------------------------------------

def test_c10_qsr_lemma(factor_suite):
    last_bad = range_bad = 0
    for f in factor_suite:
        reps = qsr_report(f)
        last_bad += abs(reps[-1].qsr - 1) > 1e-9
        for r in reps:
            range_bad += not (0 < r.qsr <= 1 + 1e-12)
            range_bad += sum(not (-1 - 1e-12 <= v <= 1 + 1e-12) for v in r.quadrants.values() if v is not None)

    rng = np.random.default_rng(10)
    pattern_bad = 0
    expected = {"S,T": 1, "Sbar,Tbar": 1, "Sbar,T": -1, "S,Tbar": -1}
    for _ in range(50):
        r, c = int(rng.integers(2, 9)), int(rng.integers(2, 9))
        a, b = rng.normal(size=r), rng.normal(size=c)
        a -= a.mean()
        b -= b.mean()
        y = InteractionMatrix(np.outer(a, b) * r * c, WeightVector.uniform(r), WeightVector.uniform(c),
                              "aggregate-exact")
        rep = qsr_report(factorize(y, None))
        pattern_bad += len(rep) != 1 or abs(rep[0].qsr - 1) > 1e-12
        pattern_bad += sum(abs(rep[0].quadrants[k] - expected[k]) > 1e-9 for k in QUADRANTS)
    ok = last_bad == 0 and range_bad == 0 and pattern_bad == 0
    record(10, "QSR lemma", ok,
           f"last-axis failures {last_bad}, out-of-range {range_bad}, rank-1 pattern failures {pattern_bad}")


# -- 11 ----------------------------------------------------------------------------

def _tree(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_c11_end_to_end(tmp_path, capsys):
    data = tmp_path / "data"
    assert main(["synth", "--seed", "2023", "--rows", "166", "--cols", "9", "--blocks", "2,3,3,3",
                 "--out", str(data)]) == 0
    args = ["analyze", "--method", "t-tlra,a-tlra,a-approx", "--x", str(data / "X.csv"),
            "--z", str(data / "Z.csv"), "--blocks", "2,3,3,3", "--axes", "4", "--mode", "auto", "--plots"]
    start = time.perf_counter()
    rc1 = main(args + ["--out", str(tmp_path / "run1")])
    elapsed = time.perf_counter() - start
    rc2 = main(args + ["--out", str(tmp_path / "run2")])
    capsys.readouterr()

    run1, run2 = tmp_path / "run1", tmp_path / "run2"
    text = (run1 / "comparison.txt").read_text(encoding="utf-8")
    blocks_ok = all(name in text for name in ("T-TLRA", "A-TLRA", "A-1st order TSVD"))
    cols_ok = all(h in text for h in ("QSR(V+U+, V-U-)", "QSR(V-U+, V+U-)", "QSR", "delta"))
    rows = (run1 / "comparison.csv").read_text().splitlines()[1:]
    axes_ok = sorted(r.split(",")[1] for r in rows) == sorted(["1", "2", "3", "4"] * 3)
    svgs = sorted(run1.rglob("*.svg"))
    scores = all((run1 / m / f).exists() for m in ("t-tlra", "a-tlra", "a-approx")
                 for f in ("row_scores.csv", "col_scores.csv"))
    identical = _tree(run1) == _tree(run2)
    ok = (rc1 == rc2 == 0 and elapsed < 60 and blocks_ok and cols_ok and axes_ok and len(svgs) == 6
          and scores and identical)
    record(11, "end-to-end synthetic 166x9 / 166x11 run", ok,
           f"{elapsed:.2f}s, {len(rows)} table rows, {len(svgs)} SVGs, byte-identical rerun: {identical}")
