import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from homgraph.exceptions import CapExceededError
from homgraph.graph import LabeledGraph, Permutation, permute, permute_labeled, shift
from homgraph.hom import (
    hom,
    hom_brute,
    hom_exact,
    hom_labeled,
    hom_labeled_brute,
    hom_matrix,
    hom_shifted,
)
from homgraph.patterns import (
    LabeledPattern,
    Pattern,
    disjoint_union,
    enumerate_labeled_patterns,
    enumerate_patterns,
    glued_union,
    singleton,
)

from conftest import random_weights, rel_err

ATLAS3 = enumerate_patterns(3)
ATLAS4 = enumerate_patterns(4)


def loop_hom(p, W, pins=()):
    # plain nested-loop oracle, straight from the definition
    n = len(W)
    total = 0.0
    for pi in product(range(n), repeat=p.m):
        if any(pi[i] != x for i, x in enumerate(pins)):
            continue
        term = 1.0
        for i in range(p.m):
            term *= W[pi[i]][pi[i]]
        for i, j in p.edges:
            term *= W[pi[i]][pi[j]]
        total += term
    return total


def test_singleton_is_trace():
    assert hom(singleton(), np.eye(3)) == 3.0
    assert hom_brute(singleton(), np.eye(3)) == 3.0


def test_arc_counts_non_injective_maps():
    arc = Pattern(2, {(0, 1)})
    assert hom(arc, np.ones((2, 2))) == 4.0
    assert hom_brute(arc, np.ones((2, 2))) == 4.0


def test_two_cycle_double_loop(rng):
    W = random_weights(rng, 3)
    want = sum(W[u, u] * W[v, v] * W[u, v] * W[v, u] for u in range(3) for v in range(3))
    cyc = Pattern(2, {(0, 1), (1, 0)})
    assert rel_err(hom_brute(cyc, W), want) < 1e-12
    assert rel_err(hom(cyc, W), want) < 1e-12


def test_brute_matches_loop_oracle(rng):
    W = random_weights(rng, 4, -3, 3)
    for p in ATLAS3:
        want = loop_hom(p, W.tolist())
        assert rel_err(hom_brute(p, W), want) < 1e-12
        assert rel_err(hom(p, W), want) < 1e-9


def test_dp_matches_brute_on_m4_atlas(rng):
    for _ in range(3):
        W = random_weights(rng, 6, -3, 3)
        for p in ATLAS4:
            assert rel_err(hom(p, W), hom_brute(p, W)) <= 1e-9


def test_dp_matches_brute_on_sampled_m5(rng):
    W = random_weights(rng, 5)
    for p in enumerate_patterns(5)[238::401]:
        assert rel_err(hom(p, W), hom_brute(p, W)) <= 1e-9


def test_singleton_bounded_away(rng):
    for _ in range(20):
        W = random_weights(rng, 6)
        assert hom(singleton(), shift(W, 2)) >= 6


def test_invariance(rng):
    for p in ATLAS3:
        W = random_weights(rng, 5)
        s = Permutation.random(5, rng)
        assert rel_err(hom(p, permute(W, s)), hom(p, W)) <= 1e-9


def test_brute_cap():
    with pytest.raises(CapExceededError) as info:
        hom_brute(Pattern(4), np.zeros((200, 200)))
    assert info.value.cost > info.value.cap
    assert hom_brute(Pattern(2), np.eye(3), cap=100) == 9.0


def test_hom_rejects_bad_input():
    with pytest.raises(ValueError):
        hom(singleton(), np.zeros((2, 3)))
    with pytest.raises(TypeError):
        hom("not a pattern", np.zeros((2, 2)))


def test_hom_shifted():
    assert hom_shifted(singleton(), np.zeros((3, 3)), 2) == 6.0
    W = np.arange(9.0).reshape(3, 3) / 10
    p = Pattern(3, {(0, 1), (1, 2)})
    assert hom_shifted(p, W, 0) == hom(p, W)
    assert rel_err(hom_shifted(p, W, 2), hom_brute(p, W + 2 * np.eye(3))) < 1e-12


def test_labeled_k0_reduces_to_hom(rng):
    W = random_weights(rng, 4)
    for p in ATLAS3:
        assert hom_labeled(LabeledPattern(p, 0), W, ()) == hom(p, W)


def test_labeled_single_vertex():
    one = LabeledPattern(Pattern(1), 1)
    assert hom_labeled(one, 2 * np.eye(3), (0,)) == 2.0
    assert hom_labeled(one, LabeledGraph(2 * np.eye(3), (0,))) == 2.0


def test_labeled_isolated_vertices_product(rng):
    W = random_weights(rng, 6)
    p = LabeledPattern(Pattern(3), 3)
    x = (4, 0, 2)
    Ws = shift(W, 2)
    want = math.prod(W[v, v] + 2 for v in x)
    assert rel_err(hom_labeled(p, Ws, x), want) < 1e-12
    assert hom_labeled(p, Ws, x) >= 1


def test_labeled_matches_loop_oracle(rng):
    W = random_weights(rng, 4, -3, 3)
    for k in (1, 2):
        for p in enumerate_labeled_patterns(3, k):
            x = tuple(rng.choice(4, size=k, replace=False).tolist())
            want = loop_hom(p.pattern, W.tolist(), x)
            assert rel_err(hom_labeled_brute(p, W, x), want) < 1e-12
            assert rel_err(hom_labeled(p, W, x), want) < 1e-9


def test_labeled_arity_mismatch():
    with pytest.raises(ValueError):
        hom_labeled(LabeledPattern(Pattern(2), 2), np.eye(3), (0,))
    with pytest.raises(ValueError):
        hom_labeled(LabeledPattern(Pattern(2), 2), np.eye(3), (0, 0))


def test_equivariance(rng):
    for p in enumerate_labeled_patterns(3, 2):
        g = LabeledGraph(random_weights(rng, 5), (3, 1))
        s = Permutation.random(5, rng)
        assert rel_err(hom_labeled(p, permute_labeled(g, s)), hom_labeled(p, g)) <= 1e-9


@given(st.sampled_from(ATLAS3), st.sampled_from(ATLAS3), st.integers(0, 2**32 - 1))
def test_product_identity(a, b, seed):
    W = random_weights(np.random.default_rng(seed), 4)
    lhs = hom(a, W) * hom(b, W)
    assert rel_err(lhs, hom(disjoint_union(a, b), W)) <= 1e-9


def labeled_edges(p):
    return {(i, j) for i, j in p.edges if i < p.k and j < p.k}


LAB3 = enumerate_labeled_patterns(3, 2)


@given(st.sampled_from(LAB3), st.sampled_from(LAB3), st.integers(0, 2**32 - 1))
def test_glued_product_identity_with_diagonal_correction(a, b, seed):
    # each labeled vertex contributes W(x_i, x_i) once per factor on the left
    if labeled_edges(a) & labeled_edges(b):
        return
    rng = np.random.default_rng(seed)
    W = random_weights(rng, 5)
    x = tuple(rng.choice(5, size=2, replace=False).tolist())
    lhs = hom_labeled(a, W, x) * hom_labeled(b, W, x)
    rhs = hom_labeled(glued_union(a, b), W, x) * math.prod(W[v, v] for v in x)
    assert rel_err(lhs, rhs) <= 1e-9


def test_glued_identity_without_correction_fails_off_unit_diagonal(rng):
    a = LabeledPattern(Pattern(3, {(0, 2)}), 2)
    b = LabeledPattern(Pattern(3, {(2, 1)}), 2)
    W = shift(random_weights(rng, 5), 2)
    lhs = hom_labeled(a, W, (1, 3)) * hom_labeled(b, W, (1, 3))
    assert rel_err(lhs, hom_labeled(glued_union(a, b), W, (1, 3))) > 1e-3
    # on a unit diagonal the correction factor is 1
    np.fill_diagonal(W, 1.0)
    lhs = hom_labeled(a, W, (1, 3)) * hom_labeled(b, W, (1, 3))
    assert rel_err(lhs, hom_labeled(glued_union(a, b), W, (1, 3))) <= 1e-9


@pytest.mark.parametrize("p", [singleton(), Pattern(2, {(0, 1)}),
                               Pattern(3, {(0, 1), (1, 2), (2, 0)}), Pattern(3, {(0, 2)})])
def test_polynomial_degree_along_lines(p, rng):
    # hom(F, W + tD) has degree m + |E| in t with leading coefficient hom(F, D)
    W, D = random_weights(rng, 4), random_weights(rng, 4)
    d = p.m + p.n_edges
    h = 0.5
    vals = [hom(p, W + i * h * D) for i in range(d + 2)]
    diffs = np.diff(vals, n=d)
    lead = math.factorial(d) * h ** d * hom(p, D)
    assert np.allclose(diffs, lead, rtol=1e-7, atol=1e-9 * max(map(abs, vals)))
    assert abs(np.diff(vals, n=d + 1)[0]) <= 1e-9 * max(1.0, max(map(abs, vals)))


def test_hom_exact_integer_path(rng):
    W = rng.integers(-2, 4, (5, 5)).astype(float)
    for p in ATLAS3:
        exact = hom_exact(p, W)
        assert isinstance(exact, int)
        assert exact == round(hom_brute(p, W))
    with pytest.raises(ValueError):
        hom_exact(singleton(), np.full((2, 2), 0.5))


def test_hom_exact_large_values_stay_exact():
    W = np.full((8, 8), 3.0)
    p = Pattern(5, {(i, j) for i in range(5) for j in range(5) if i != j})
    assert hom_exact(p, W) == 8 ** 5 * 3 ** (5 + 20)


def test_hom_matrix_threads_agree(rng):
    graphs = [random_weights(rng, 5) for _ in range(6)]
    serial = hom_matrix(ATLAS3, graphs, shift=2.0)
    threaded = hom_matrix(ATLAS3, graphs, shift=2.0, n_jobs=3)
    assert np.array_equal(serial, threaded)
    assert serial[2, 5] == hom(ATLAS3[5], shift(graphs[2], 2.0))
