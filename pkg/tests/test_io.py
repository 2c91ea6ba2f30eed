import json
import xml.etree.ElementTree as ET

import numpy as np

from aggcoda import aggregate_of_log_interactions, factorize, generate_synthetic, principal_map
from aggcoda.io import factorization_dict, load_interaction, map_dict, save_factor_scores, save_interaction
from aggcoda.plotting import map_svg
from aggcoda.tables import IndicatorMatrix, load_elementary, load_indicator
from aggcoda.synth import write_synthetic


def _fact(seed=3):
    x, z = generate_synthetic(seed, 40, 5, "2,3")
    return aggregate_of_log_interactions(x, z), x, z


def test_interaction_round_trip(tmp_path):
    alpha, _, _ = _fact()
    csv_path, sidecar = save_interaction(alpha, tmp_path / "alpha.csv")
    meta = json.loads(sidecar.read_text())
    assert meta["kind"] == "aggregate-of-elementary" and meta["Q"] == 2
    back = load_interaction(csv_path)
    np.testing.assert_array_equal(back.values, alpha.values)
    np.testing.assert_array_equal(back.col_weights.weights, alpha.col_weights.weights)
    assert back.row_labels == alpha.row_labels


def test_factor_scores_csv(tmp_path):
    alpha, _, _ = _fact()
    f = factorize(alpha)
    save_factor_scores(f, tmp_path / "r.csv", tmp_path / "c.csv")
    rows = (tmp_path / "r.csv").read_text().splitlines()
    # alpha is centered within each covariate block: rank <= K - Q = 3
    assert f.rank == 3
    assert rows[0] == ",axis1,axis2,axis3"
    assert len(rows) == 1 + 5
    assert float(rows[1].split(",")[1]) == f.row_scores[0, 0]


def test_factorization_json(tmp_path):
    alpha, _, _ = _fact()
    d = factorization_dict(factorize(alpha))
    s = json.dumps(d)
    assert json.loads(s)["axes"][0]["delta"] == d["axes"][0]["delta"]
    assert len(d["residual_l1_norms"]) == d["rank"] + 1


def test_svg_map():
    alpha, x, z = _fact()
    pm = principal_map(factorize(alpha), (1, 2))
    svg = map_svg(pm, title="demo")
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    circles = root.findall(f"{ns}circle")
    assert len(circles) == len(z.category_labels) + len(x.col_labels)
    filled = [c for c in circles if c.get("fill") != "none"]
    assert len(filled) == len(z.category_labels)
    texts = [t.text for t in root.findall(f"{ns}text")]
    assert set(x.col_labels) <= set(texts)
    assert map_svg(pm, title="demo") == svg
    d = map_dict(pm)
    assert sum(p["role"] == "row" for p in d["points"]) == 5


def test_synthetic_deterministic(tmp_path):
    a = write_synthetic(tmp_path / "a", 11, 30, 4, "2,3,3")
    b = write_synthetic(tmp_path / "b", 11, 30, 4, "2,3,3")
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()
    x = load_elementary(a[0])
    z = load_indicator(a[1], "2,3,3")
    assert x.positive and z.q == 3


def test_synthetic_indicator_valid_over_seeds():
    for seed in range(100):
        _, z = generate_synthetic(seed, 20, 3, "2,3,3,3")
        IndicatorMatrix(z.values, blocks=z.blocks)
        np.testing.assert_array_equal(z.values.sum(axis=1), 4)


def test_null_effect_shrinks():
    sizes = []
    for n in (50, 800):
        x, z = generate_synthetic(0, n, 5, "2,3", effect=0.0)
        alpha = aggregate_of_log_interactions(x, z)
        sizes.append(np.abs(alpha.values).max())
    assert sizes[1] < sizes[0]
