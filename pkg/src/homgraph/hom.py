"""Weighted homomorphism numbers.

``hom(F, W)`` sums, over every map ``pi`` from pattern vertices to graph
vertices (not necessarily injective), the product of ``W[pi(i), pi(i)]``
over pattern vertices times ``W[pi(i), pi(j)]`` over pattern edges. The
k-labeled variant restricts to maps with ``pi(i) == x[i]`` for ``i < k``.

Two engines compute the same sum:

* :func:`hom_brute` enumerates all maps (the oracle),
* :func:`hom` runs dynamic programming over a minimum-width tree
  decomposition of the pattern, in ``O(m n^(width+1))``.
"""

import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np

from homgraph._caps import get_cap
from homgraph.exceptions import CapExceededError
from homgraph.graph import LabeledGraph
from homgraph.patterns import LabeledPattern, Pattern
from homgraph.treedecomp import _cached as _decomposition
from homgraph.validation import check_labels, check_weights

_BLOCK = 1 << 16


def _as_pattern(f):
    if isinstance(f, LabeledPattern):
        return f.pattern
    if not isinstance(f, Pattern):
        raise TypeError(f"expected a Pattern, got {type(f).__name__}")
    return f


def _pinned_domains(m, n, pins):
    full = np.arange(n)
    return [np.array([pins[v]]) if v < len(pins) else full for v in range(m)]


def _total(values):
    if values.dtype == object:
        return sum(values.tolist())
    return math.fsum(values.tolist())


def contract(pattern, edge_matrix, vertex_factors, domains):
    """Tree-decomposition DP for a generic weighted hom sum.

    Computes ``sum over maps pi with pi(v) in domains[v]`` of
    ``prod_v vertex_factors[v][pi(v)] * prod_(i,j) edge_matrix[pi(i), pi(j)]``.
    Each vertex factor is applied at the node that eliminates the vertex;
    each edge factor at the node eliminating its earlier endpoint, which is
    the topmost bag holding both endpoints. The final sum over the root
    vertex is compensated (``math.fsum``) for float inputs.
    """
    td = _decomposition(pattern)
    pos = {v: t for t, v in enumerate(td.order)}
    edges_at = defaultdict(list)
    for i, j in pattern.edges:
        edges_at[min(pos[i], pos[j])].append((i, j))
    children = defaultdict(list)
    for t, p in enumerate(td.parent):
        if p is not None:
            children[p].append(t)

    messages = {}
    for t, v in enumerate(td.order):
        ops = [vertex_factors[v][domains[v]], [v]]
        for i, j in edges_at[t]:
            ops += [edge_matrix[np.ix_(domains[i], domains[j])], [i, j]]
        for c in children[t]:
            axes, table = messages.pop(c)
            ops += [table, list(axes)]
        if t == td.root:
            return _total(np.einsum(*ops, [v]))
        sep = sorted(td.bags[t] - {v})
        messages[t] = (sep, np.einsum(*ops, sep))
    raise AssertionError("unreachable: decomposition has no root")


def brute_sum(pattern, edge_matrix, vertex_factors, domains, cap=None, what="hom_brute"):
    """Enumerate every admissible map and sum its weight (the oracle path)."""
    m = pattern.m
    sizes = [len(d) for d in domains]
    n_maps = math.prod(sizes)
    cap = get_cap("brute_work", cap)
    work = n_maps * (m + pattern.n_edges)
    if work > cap:
        raise CapExceededError(what, work, cap)

    split, block = 0, n_maps
    while block > _BLOCK and split < m:
        block //= sizes[split]
        split += 1
    tail_domains = domains[split:]
    if tail_domains:
        grids = np.meshgrid(*tail_domains, indexing="ij")
        tail = np.stack([g.ravel() for g in grids], axis=1)
    else:
        tail = np.zeros((1, 0), dtype=np.intp)
    edges = pattern.edge_list
    terms = []
    for head in product(*domains[:split]):
        maps = np.concatenate(
            [np.broadcast_to(np.array(head, dtype=np.intp), (len(tail), split)), tail],
            axis=1,
        )
        term = np.ones(len(maps))
        for v in range(m):
            term = term * vertex_factors[v][maps[:, v]]
        for i, j in edges:
            term = term * edge_matrix[maps[:, i], maps[:, j]]
        terms.append(term)
    return math.fsum(np.concatenate(terms).tolist())


def _unpack_labeled(g, labels):
    if isinstance(g, LabeledGraph):
        if labels is not None:
            raise ValueError("labels given twice")
        return g.graph.weights, g.labels
    W = check_weights(g)
    return W, check_labels(labels if labels is not None else (), W.shape[0])


def hom(f, g):
    """Homomorphism number of pattern ``f`` in weighted graph ``g``.

    Examples
    --------
    >>> hom(Pattern(2, {(0, 1)}), np.ones((2, 2)))
    4.0
    """
    pattern = _as_pattern(f)
    W = check_weights(g)
    diag = np.diagonal(W).copy()
    return contract(pattern, W, [diag] * pattern.m,
                    _pinned_domains(pattern.m, W.shape[0], ()))


def hom_brute(f, g, cap=None):
    """Homomorphism number by summing over all ``n^m`` maps."""
    pattern = _as_pattern(f)
    W = check_weights(g)
    diag = np.diagonal(W).copy()
    return brute_sum(pattern, W, [diag] * pattern.m,
                     _pinned_domains(pattern.m, W.shape[0], ()), cap)


def _labeled_setup(f, g, labels):
    if not isinstance(f, LabeledPattern):
        raise TypeError(f"expected a LabeledPattern, got {type(f).__name__}")
    W, x = _unpack_labeled(g, labels)
    if len(x) != f.k:
        raise ValueError(f"pattern has {f.k} labels but {len(x)} were given")
    diag = np.diagonal(W).copy()
    return f.pattern, W, [diag] * f.m, _pinned_domains(f.m, W.shape[0], x)


def hom_labeled(f, g, labels=None):
    """k-labeled homomorphism number, with pattern vertex ``i`` pinned to ``labels[i]``.

    ``g`` is a :class:`LabeledGraph`, or a weight matrix together with
    ``labels`` (0-based, pairwise distinct).
    """
    return contract(*_labeled_setup(f, g, labels))


def hom_labeled_brute(f, g, labels=None, cap=None):
    return brute_sum(*_labeled_setup(f, g, labels), cap=cap, what="hom_labeled_brute")


def hom_shifted(f, g, c=2.0):
    """``hom(f, W + c I)``."""
    W = check_weights(g)
    return hom(f, W + c * np.eye(W.shape[0]))


def _integral(W):
    return bool(np.all(W == np.round(W)) and np.all(np.abs(W) < 2 ** 52))


def hom_exact(f, g, labels=()):
    """Exact hom number as a Python ``int`` for integer-valued ``g``.

    Runs the same DP on object arrays, so no rounding happens anywhere.
    """
    pattern = _as_pattern(f)
    W = check_weights(g)
    if not _integral(W):
        raise ValueError("hom_exact needs an integer-valued weight matrix")
    Wi = np.array([[int(w) for w in row] for row in W], dtype=object)
    diag = np.array([Wi[v, v] for v in range(W.shape[0])], dtype=object)
    x = check_labels(labels, W.shape[0])
    return int(contract(pattern, Wi, [diag] * pattern.m,
                        _pinned_domains(pattern.m, W.shape[0], x)))


def hom_matrix(patterns, graphs, shift=0.0, n_jobs=None):
    """Matrix ``H[g, p] = hom(patterns[p], graphs[g] + shift I)``.

    With ``n_jobs > 1`` graphs are processed on a thread pool; every entry is
    computed by the same deterministic routine, so the result does not
    depend on scheduling.
    """
    mats = [check_weights(g) for g in graphs]
    patterns = list(patterns)

    def row(W):
        Ws = W + shift * np.eye(W.shape[0])
        return [hom(p, Ws) for p in patterns]

    if n_jobs is not None and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            rows = list(pool.map(row, mats))
    else:
        rows = [row(W) for W in mats]
    return np.array(rows, dtype=float).reshape(len(mats), len(patterns))


__all__ = [
    "brute_sum",
    "contract",
    "hom",
    "hom_brute",
    "hom_exact",
    "hom_labeled",
    "hom_labeled_brute",
    "hom_matrix",
    "hom_shifted",
]
