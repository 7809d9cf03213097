"""Acceptance criteria, each at its stated tolerance.

Every test records a result line in ``conftest.ACCEPTANCE_RESULTS``; the
terminal summary prints one ``[PASS]``/``[FAIL]`` line per criterion.
"""

import csv
import io
import time
from itertools import combinations, permutations

import numpy as np
import pytest

from conftest import ACCEPTANCE_ARTIFACTS, ACCEPTANCE_RESULTS
from homgraph.graph import Permutation, edit_distance, permute
from homgraph.graphon import (
    StepGraphon,
    cut_distance,
    cut_norm,
    density,
    monte_carlo_density,
)
from homgraph.hom import hom, hom_brute, hom_labeled, hom_labeled_brute
from homgraph.model import Dataset, fit, predict, residual_curve, separate
from homgraph.patterns import (
    LabeledPattern,
    Pattern,
    disjoint_union,
    enumerate_labeled_patterns,
    enumerate_patterns,
    glued_union,
    singleton,
)

pytestmark = pytest.mark.acceptance

SEED = 20240611


def rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def record(number, name, ok, detail, started):
    detail = f"{detail}; {time.perf_counter() - started:.1f}s"
    ACCEPTANCE_RESULTS.append((number, name, bool(ok), detail))
    assert ok, detail


def test_criterion_1_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    graphs = [rng.uniform(-1, 1, (6, 6)) for _ in range(20)]
    atlas = enumerate_patterns(4)
    assert len(atlas) == 1 + 3 + 16 + 218
    worst, count = 0.0, 0
    for W in graphs:
        for p in atlas:
            worst = max(worst, rel(hom(p, W), hom_brute(p, W)))
            count += 1
    for k in (1, 2):
        for W in graphs:
            x = tuple(int(v) for v in rng.choice(6, size=k, replace=False))
            for p in enumerate_labeled_patterns(4, k):
                worst = max(worst, rel(hom_labeled(p, W, x), hom_labeled_brute(p, W, x)))
                count += 1
    record("1", "DP equals brute force on the m<=4 atlas (k=0,1,2)", worst <= 1e-9,
           f"{count} comparisons, max rel err {worst:.2e} <= 1e-9", t0)


def test_criterion_2_invariance_equivariance():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 2)
    atlas = {k: enumerate_labeled_patterns(4, k) for k in (0, 1, 2, 3)}
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(3, 7))
        k = int(rng.integers(0, 4))
        p = atlas[k][rng.integers(len(atlas[k]))]
        W = rng.uniform(-1, 1, (n, n))
        s = Permutation.random(n, rng)
        Ws = permute(W, s)
        worst = max(worst, rel(hom(p.pattern, Ws), hom(p.pattern, W)))
        x = tuple(int(v) for v in rng.choice(n, size=k, replace=False))
        xs = tuple(s(i) for i in x)
        worst = max(worst, rel(hom_labeled(p, Ws, xs), hom_labeled(p, W, x)))
    record("2", "invariance and equivariance under relabeling", worst <= 1e-9,
           f"1000 triples, max rel err {worst:.2e} <= 1e-9", t0)


def test_criterion_3a_product_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 3)
    atlas = enumerate_patterns(3)
    worst = 0.0
    for _ in range(500):
        p1, p2 = (atlas[i] for i in rng.integers(len(atlas), size=2))
        W = rng.uniform(-1, 1, (5, 5))
        worst = max(worst, rel(hom(p1, W) * hom(p2, W), hom(disjoint_union(p1, p2), W)))
    record("3a", "product identity hom(F1)hom(F2) = hom(F1 + F2)", worst <= 1e-9,
           f"500 pairs, max rel err {worst:.2e} <= 1e-9", t0)


def labeled_edges(p):
    return {(i, j) for i, j in p.edges if i < p.k and j < p.k}


def test_criterion_3b_glued_identity():
    # The literal identity, without any diagonal correction. Under the
    # hom definition used throughout (a diagonal factor for every pattern
    # vertex, labeled ones included) the left side carries each labeled
    # vertex's diagonal weight twice, so this fails unless W(x_i, x_i) = 1.
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 4)
    atlas = {k: enumerate_labeled_patterns(3, k) for k in (1, 2)}
    worst, ratio_gap, done = 0.0, 0.0, 0
    while done < 500:
        k = int(rng.integers(1, 3))
        p1, p2 = (atlas[k][i] for i in rng.integers(len(atlas[k]), size=2))
        if labeled_edges(p1) & labeled_edges(p2):
            continue
        W = rng.uniform(-1, 1, (5, 5))
        x = tuple(int(v) for v in rng.choice(5, size=k, replace=False))
        lhs = hom_labeled(p1, W, x) * hom_labeled(p2, W, x)
        glued = hom_labeled(glued_union(p1, p2), W, x)
        worst = max(worst, rel(lhs, glued))
        corrected = glued * np.prod([W[v, v] for v in x])
        ratio_gap = max(ratio_gap, rel(lhs, corrected))
        done += 1
    record("3b", "glued identity hom_x(F1)hom_x(F2) = hom_x(F1 +' F2)", worst <= 1e-9,
           f"500 edge-disjoint pairs, max rel err {worst:.2e}; with the factor "
           f"prod W(x_i,x_i) on the right: {ratio_gap:.2e}", t0)


def test_criterion_4_bounded_away_from_zero():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 5)
    n = 8
    ok, low_unlabeled, low_labeled = True, np.inf, np.inf
    for _ in range(100):
        A = rng.uniform(-1, 1, (n, n)) + 2 * np.eye(n)
        h = hom(singleton(), A)
        low_unlabeled = min(low_unlabeled, h)
        ok &= h >= n
        for k in (1, 2, 3):
            iso = LabeledPattern(Pattern(k), k)
            x = tuple(int(v) for v in rng.choice(n, size=k, replace=False))
            h = hom_labeled(iso, A, x)
            low_labeled = min(low_labeled, h)
            ok &= h >= 1
    record("4", "hom(o, W+2I) >= n and hom_x(isolated labels, W+2I) >= 1", ok,
           f"min hom(o)={low_unlabeled:.4g} (n={n}), min labeled={low_labeled:.4g}", t0)


def adjacency(p):
    A = np.zeros((p.m, p.m))
    for i, j in p.edges:
        A[i, j] = 1.0
    return A


def test_criterion_5_separation():
    t0 = time.perf_counter()
    classes = [adjacency(p) for p in enumerate_patterns(3) if p.m == 3]
    assert len(classes) == 16
    missed = [(a, b) for a, b in combinations(range(16), 2)
              if not separate(classes[a], classes[b], 3).separated]
    false_hits = 0
    for A in classes:
        for s in permutations(range(3)):
            false_hits += separate(A, permute(A, s), 3).separated
    record("5", "3-vertex classes separated with max_m=3, self-pairs never",
           not missed and false_hits == 0,
           f"{120 - len(missed)}/120 pairs separated, {false_hits}/96 self-pairs separated", t0)


def test_criterion_6_universality_proxy():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 6)
    graphs = [rng.uniform(-1, 1, (8, 8)) for _ in range(200)]
    f0 = Pattern(3, {(0, 1), (1, 2), (2, 0)})
    y = [hom(f0, W + 2 * np.eye(8)) for W in graphs]
    data = Dataset(graphs, y)
    model = fit(data, max_m=3)
    pred = np.array([predict(model, W) for W in graphs])
    in_span = float(np.linalg.norm(pred - y) / np.linalg.norm(y))

    radius = [float(np.max(np.abs(np.linalg.eigvals(np.abs(W))))) for W in graphs]
    rows = residual_curve(Dataset(graphs, radius), 4)
    scale = float(np.dot(radius, radius))
    sse = [r["sse"] for r in rows]
    monotone = all(b <= a + 1e-9 * scale for a, b in zip(sse, sse[1:]))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["max_m", "n_patterns", "sse", "relative_residual"])
    for r in rows:
        writer.writerow([r["max_m"], r["n_patterns"], f"{r['sse']:.15g}",
                         f"{r['relative_residual']:.15g}"])
    ACCEPTANCE_ARTIFACTS["criterion 6 residual curve (CSV)"] = buf.getvalue()
    record("6", "in-span recovery and non-increasing out-of-span SSE",
           in_span <= 1e-6 and monotone and [r["max_m"] for r in rows] == [1, 2, 3, 4],
           f"in-span rel residual {in_span:.2e} <= 1e-6; SSE "
           + " > ".join(f"{v:.3g}" for v in sse), t0)


def test_criterion_7_graphon():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 7)
    atlas = enumerate_patterns(3)
    worst_z, checks = 0.0, 0
    for g in range(5):
        w = StepGraphon.random(3, rng)
        for i, p in enumerate(atlas):
            exact = density(p, w)
            est, se = monte_carlo_density(p, w, 100_000, seed=1000 * g + i)
            gap = abs(est - exact)
            z = gap / se if se > 0 else (0.0 if gap <= 1e-12 else np.inf)
            worst_z = max(worst_z, z)
            checks += 1
    two_block = StepGraphon([[1.0, -1.0], [-1.0, 1.0]], [0.5, 0.5], signed=True)
    cn = cut_norm(two_block)
    dist = []
    for _ in range(5):
        w = StepGraphon.random(3, rng, uniform_blocks=True)
        for perm in permutations(range(3)):
            dist.append(cut_distance(w, w.permute_blocks(perm)))
    ok = worst_z <= 4 and cn == 0.25 and max(dist) == 0.0
    record("7", "graphon densities vs Monte Carlo, cut norm, cut distance", ok,
           f"{checks} densities, max |z| {worst_z:.2f} <= 4; cut_norm {cn!r} == 0.25; "
           f"max cut_distance to block permutations {max(dist)!r}", t0)


def test_criterion_8_edit_distance():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 8)
    tol = 1e-12
    bad = 0
    for _ in range(100):
        A, B, C = (rng.uniform(-1, 1, (4, 4)) for _ in range(3))
        s = Permutation.random(4, rng)
        ab, ba = edit_distance(A, B), edit_distance(B, A)
        bc, ac = edit_distance(B, C), edit_distance(A, C)
        laws = [
            abs(edit_distance(A, A)) <= tol,
            abs(edit_distance(A, permute(A, s))) <= tol,
            ab >= 0,
            abs(ab - ba) <= tol,
            ac <= ab + bc + tol,
            abs(edit_distance(permute(A, s), B) - ab) <= tol,
        ]
        bad += not all(laws)
    record("8", "edit distance pseudo-metric laws and permutation invariance", bad == 0,
           f"{100 - bad}/100 instances satisfy all laws to 1e-12", t0)
