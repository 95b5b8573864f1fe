"""Acceptance criteria P1-P8, one test (and one printed verdict line) each.

Everything runs offline with the mock provider and no UI.  The bundled
corpus is the 500-doc synthetic set: 5 planted topic groups, dates
2010-2024, pipeline seed 42.
"""

import datetime as dt
import json
import math
import os
import random
import struct
import time

import numpy as np
import pytest
from scipy.optimize import minimize
from scipy.spatial import Delaunay

from atlas.carto import DensityField, Viewport, contours, density_grid, place_labels
from atlas.corpus import MapPoint, TopicLabel
from atlas.datasets import GROUP_VOCAB, synthetic_records, write_synthetic_corpus
from atlas.errors import BadMagic, UnsupportedVersion
from atlas.gateway import MockGateway
from atlas.pipeline import run_pipeline
from atlas.reducer import (
    ReducerParams,
    attractive_gradient,
    attractive_log_likelihood,
    fit_curve_params,
    knn_graph,
    load_model,
    save_model,
    smooth_knn_sigma,
    transform,
)
from atlas.service import load_state
from atlas.synthesis import Recipe, RecipeItem, assemble_prompt, extract_aspect

from test_service import assert_ranking_matches_oracle

SEED = 42
N_DOCS = 500


def verdict(name, ok=True):
    print(f"{'PASS' if ok else 'FAIL'} {name}")
    assert ok


@pytest.fixture(scope="module")
def bundled(tmp_path_factory):
    """P1 artifacts: two identical pipeline runs plus the elapsed time."""
    root = tmp_path_factory.mktemp("acceptance")
    raw = os.path.join(root, "corpus.json")
    write_synthetic_corpus(raw, n=N_DOCS, seed=7)
    out1 = os.path.join(root, "run1")
    out2 = os.path.join(root, "run2")
    params = ReducerParams(seed=SEED)
    t0 = time.perf_counter()
    run_pipeline(raw, out1, MockGateway(), params=params)
    elapsed = time.perf_counter() - t0
    run_pipeline(raw, out2, MockGateway(), params=params)
    return {"raw": raw, "out1": out1, "out2": out2, "elapsed": elapsed}


@pytest.fixture(scope="module")
def state(bundled):
    return load_state(bundled["out1"], MockGateway())


@pytest.fixture(scope="module")
def client(state):
    from fastapi.testclient import TestClient

    from atlas.service import create_app

    return TestClient(create_app(state))


def test_p1_pipeline_end_to_end(bundled):
    assert bundled["elapsed"] < 60.0, f"pipeline took {bundled['elapsed']:.1f}s"
    for name in ("projects.json", "topics.json", "reducer.model"):
        p1 = os.path.join(bundled["out1"], name)
        p2 = os.path.join(bundled["out2"], name)
        assert os.path.exists(p1)
        assert open(p1, "rb").read() == open(p2, "rb").read(), f"{name} not byte-identical"
    projects = json.load(open(os.path.join(bundled["out1"], "projects.json")))
    assert len(projects) == N_DOCS
    assert all(math.isfinite(p["x"]) and math.isfinite(p["y"]) for p in projects)
    verdict(f"P1 — pipeline end-to-end ({bundled['elapsed']:.1f}s, byte-identical re-run)")


def test_p2_cluster_recovery(bundled):
    projects = json.load(open(os.path.join(bundled["out1"], "projects.json")))
    topics = json.load(open(os.path.join(bundled["out1"], "topics.json")))
    by_group = {}
    for p in projects:
        by_group.setdefault(p["group"], []).append((p["x"], p["y"]))
    groups = {g: np.array(v) for g, v in by_group.items()}
    assert len(groups) == 5

    intra = np.mean([
        np.mean(np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2))
        for pts in groups.values()
    ])
    names = list(groups)
    inter = np.mean([
        np.mean(np.linalg.norm(groups[a][:, None, :] - groups[b][None, :, :], axis=2))
        for i, a in enumerate(names) for b in names[i + 1:]
    ])
    assert inter > 2.0 * intra, f"inter {inter:.2f} vs intra {intra:.2f}"

    # most-common label per group: count label occurrences among group members
    members = {g: {p["id"] for p in projects if p["group"] == g} for g in names}
    inside_count = 0
    for g in names:
        best = max(
            topics,
            key=lambda t: (len(set(t["project_ids"]) & members[g]), -topics.index(t)),
        )
        hull = Delaunay(groups[g])
        if hull.find_simplex([best["x"], best["y"]]) >= 0:
            inside_count += 1
    assert inside_count >= 4, f"only {inside_count}/5 centroids inside hulls"
    verdict(f"P2 — cluster recovery (ratio {inter / intra:.1f}x, {inside_count}/5 hulls)")


def _independent_neighbors(vectors, k, metric):
    # per-point scan, written separately from the pairwise-matrix implementation
    n = len(vectors)
    sets = []
    for i in range(n):
        if metric == "euclidean":
            dists = np.sqrt(((vectors - vectors[i]) ** 2).sum(axis=1))
        else:
            norms = np.sqrt((vectors**2).sum(axis=1))
            dists = 1.0 - (vectors @ vectors[i]) / (norms * norms[i])
        order = sorted(range(n), key=lambda j: (dists[j], j))
        sets.append([j for j in order if j != i][:k])
    return sets


def test_p3_reducer_correctness(bundled):
    rng = np.random.RandomState(123)
    # kNN vs brute force on 100 random instances (n up to 500)
    for trial in range(100):
        n = int(rng.randint(300, 501)) if trial < 5 else int(rng.randint(20, 160))
        d = int(rng.randint(2, 12))
        k = int(rng.randint(2, min(10, n - 1)))
        metric = "euclidean" if trial % 2 else "cosine"
        vectors = rng.normal(size=(n, d))
        idx, dists = knn_graph(vectors, k, metric)
        expected = _independent_neighbors(vectors, k, metric)
        for i in range(n):
            assert set(idx[i].tolist()) == set(expected[i]), f"trial {trial} node {i}"

    # sigma equation residual < 1e-3 per node
    vectors = rng.normal(size=(120, 8))
    idx, dists = knn_graph(vectors, 15, "euclidean")
    target = math.log2(15)
    for i in range(120):
        rho = dists[i, 0]
        sigma = smooth_knn_sigma(dists[i], rho, target)
        total = sum(math.exp(-max(0.0, d_ - rho) / sigma) for d_ in dists[i])
        assert abs(total - target) < 1e-3

    # attractive gradient vs central finite differences, 1e-4 relative
    a, b = fit_curve_params(0.1, 1.0)
    for _ in range(50):
        yi, yj = rng.uniform(-5, 5, 2), rng.uniform(-5, 5, 2)
        grad = attractive_gradient(a, b, yi, yj)
        for d_ in range(2):
            step = np.zeros(2)
            step[d_] = 1e-6
            numeric = (attractive_log_likelihood(a, b, yi + step, yj)
                       - attractive_log_likelihood(a, b, yi - step, yj)) / 2e-6
            assert abs(grad[d_] - numeric) <= 1e-4 * max(1.0, abs(numeric))

    # transform(training vector, k=1) within 1e-6 of its fitted coordinate
    model = load_model(os.path.join(bundled["out1"], "reducer.model"))
    for i in (0, 100, 250, 499):
        x, y = transform(model, model.training_vectors[i].astype(np.float64), k=1)
        assert abs(x - float(model.coords[i, 0])) < 1e-6
        assert abs(y - float(model.coords[i, 1])) < 1e-6

    # (a, b) within 1% of an independent least-squares oracle
    xv = np.linspace(0.0, 3.0, 300)
    yv = np.where(xv < 0.1, 1.0, np.exp(-(xv - 0.1)))

    def sse(p):
        return float(np.sum((1.0 / (1.0 + p[0] * xv ** (2 * p[1])) - yv) ** 2))

    oracle = minimize(sse, x0=[1.0, 1.0], method="Nelder-Mead",
                      options={"xatol": 1e-10, "fatol": 1e-12}).x
    assert abs(a - oracle[0]) <= 0.01 * abs(oracle[0])
    assert abs(b - oracle[1]) <= 0.01 * abs(oracle[1])
    verdict("P3 — reducer correctness (kNN, sigma, gradient, transform, curve)")


def test_p4_search_fidelity(bundled, state, client):
    projects = json.load(open(os.path.join(bundled["out1"], "projects.json")))
    embeddings = {p["id"]: np.array(p["embedding"]) for p in projects}
    gw = MockGateway()
    vocab = [w for words in GROUP_VOCAB.values() for w in words]
    rng = random.Random(99)
    for _ in range(50):
        query = " ".join(rng.sample(vocab, 3))
        resp = client.get("/api/search", params={"q": query, "k": 10})
        assert resp.status_code == 200
        hits = [(h["id"], h["score"]) for h in resp.json()["hits"]]
        q = np.array(gw.embed_text(query))
        qn = np.linalg.norm(q)
        oracle = {
            pid: float(e @ q / (np.linalg.norm(e) * qn))
            for pid, e in embeddings.items()
        }
        assert_ranking_matches_oracle(hits, oracle)

    # a query equal to a document's embedded text ranks that document first
    doc = projects[17]
    result = state.search(doc["title"] + "\n" + doc["description"], k=5)
    assert result.hits[0][0] == doc["id"]
    assert abs(result.hits[0][1] - 1.0) <= 1e-6
    verdict("P4 — search fidelity (50 queries vs cosine oracle, self-query at 1.0)")


def test_p5_cartography():
    # KDE Riemann sum within 2% of 1.0
    rng = np.random.RandomState(4)
    pts = [MapPoint(x, y) for x, y in rng.normal(0, 3, size=(200, 2))]
    field = density_grid(pts, resolution=(256, 256), bandwidth=1.0)
    xmin, ymin, xmax, ymax = field.bounds
    cell_area = (xmax - xmin) / 256 * (ymax - ymin) / 256
    assert abs(float(field.grid.sum()) * cell_area - 1.0) < 0.02

    # marching-squares circle within one cell diagonal of the analytic radius
    xs = np.linspace(-3.0, 3.0, 128)
    radial = DensityField(
        grid=np.exp(-(xs[:, None] ** 2 + xs[None, :] ** 2)),
        bounds=(-3.0, -3.0, 3.0, 3.0), bandwidth=1.0,
    )
    (loop,) = contours(radial, [math.exp(-1.0)]).polylines[0]
    diag = math.hypot(6.0 / 128, 6.0 / 128)
    assert loop[0] == loop[-1]
    assert all(abs(math.hypot(x, y) - 1.0) < diag for x, y in loop)

    # zero pairwise bbox overlap across 1000 randomized label sets
    view = Viewport(-10, -10, 10, 10, zoom=1.0)
    rng2 = random.Random(5)
    for _ in range(1000):
        labels = [
            TopicLabel(
                text="".join(rng2.choices("abcdefgh", k=rng2.randint(1, 12))) + str(i),
                count=rng2.randint(1, 50),
                project_ids=frozenset({f"p{i}"}),
                position=MapPoint(rng2.uniform(-11, 11), rng2.uniform(-11, 11)),
            )
            for i in range(rng2.randint(0, 20))
        ]
        placed = place_labels(labels, view)
        for i, first in enumerate(placed):
            for second in placed[i + 1:]:
                assert not first.bbox.intersects(second.bbox)
    verdict("P5 — cartography (KDE mass, contour circle, occlusion)")


def test_p6_timeline(bundled, state):
    from atlas.service import TimeWindow

    lo, hi = state.corpus.date_range
    ids = set(state.filter_timeline(TimeWindow(dt.date(2018, 1, 1), hi)))
    raw = json.load(open(os.path.join(bundled["out1"], "projects.json")))
    expected = {
        p["id"] for p in raw
        if p["date"] and dt.date.fromisoformat(p["date"]) >= dt.date(2018, 1, 1)
    }
    assert ids == expected
    assert 0 < len(ids) < N_DOCS
    verdict(f"P6 — timeline filter 2018→max ({len(ids)} of {N_DOCS} projects)")


def test_p7_provenance(state, client):
    from atlas.synthesis import ASPECTS

    corpus = state.corpus
    ids = [p.id for p in corpus.projects]
    rng = random.Random(2024)
    for _ in range(100):
        size = rng.randint(1, 8)
        pairs = set()
        while len(pairs) < size:
            pairs.add((rng.choice(ids), rng.choice(ASPECTS)))
        recipe = Recipe(items=tuple(RecipeItem(pid, asp) for pid, asp in sorted(pairs)))
        prompt = assemble_prompt(recipe, corpus)
        for item in recipe.items:
            text = extract_aspect(corpus.by_id(item.project_id), item.aspect)
            assert text in prompt, "element text not verbatim in prompt"
        resp = client.post("/api/generate", json={
            "items": [{"project_id": it.project_id, "aspect": it.aspect}
                      for it in recipe.items]
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["title"] and body["description"]
        assert body["prompt_used"] == prompt
    verdict("P7 — provenance (100 recipes, verbatim prompts, parseable replies)")


def test_p8_artifact_formats(bundled, tmp_path):
    model = load_model(os.path.join(bundled["out1"], "reducer.model"))
    path = str(tmp_path / "copy.model")
    save_model(model, path)
    assert open(path, "rb").read() == \
        open(os.path.join(bundled["out1"], "reducer.model"), "rb").read()
    reloaded = load_model(path)
    assert np.array_equal(reloaded.coords, model.coords)
    assert np.array_equal(reloaded.training_vectors, model.training_vectors)
    assert reloaded.params == model.params

    bad_magic = tmp_path / "bad.model"
    bad_magic.write_bytes(b"XXXX" + open(path, "rb").read()[4:])
    with pytest.raises(BadMagic):
        load_model(str(bad_magic))

    bad_version = tmp_path / "v999.model"
    blob = open(path, "rb").read()
    bad_version.write_bytes(blob[:4] + struct.pack("<I", 999) + blob[8:])
    with pytest.raises(UnsupportedVersion):
        load_model(str(bad_version))
    verdict("P8 — artifact formats (bit-exact round trip, magic/version rejection)")
