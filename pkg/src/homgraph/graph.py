"""Weighted graphs, vertex permutations, norms and edit distances.

Vertices are 0-based here; the JSON file formats in :mod:`homgraph.io`
use 1-based indices.

A permutation ``s`` acts by push-forward: ``permute(W, s)[s[u], s[v]] ==
W[u, v]``.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from homgraph._caps import get_cap
from homgraph.exceptions import CapExceededError
from homgraph.validation import check_labels, check_random_state, check_weights


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """A dense weighted digraph on ``n`` vertices.

    The weight matrix is copied and made read-only on construction.
    Diagonal entries are vertex weights.
    """

    weights: np.ndarray

    def __post_init__(self):
        W = check_weights(self.weights).copy()
        W.setflags(write=False)
        object.__setattr__(self, "weights", W)

    @property
    def n(self):
        return self.weights.shape[0]

    def in_model_domain(self):
        """True if every weight lies in [-1, 1]."""
        return bool(np.all(np.abs(self.weights) <= 1.0))

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    __hash__ = None

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.weights, dtype=dtype)


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    """A weighted graph with ``k`` distinguished, pairwise-distinct vertices."""

    graph: WeightedGraph
    labels: tuple

    def __post_init__(self):
        graph = self.graph
        if not isinstance(graph, WeightedGraph):
            graph = WeightedGraph(graph)
            object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "labels", check_labels(self.labels, graph.n))

    @property
    def n(self):
        return self.graph.n

    @property
    def k(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self.labels == other.labels and self.graph == other.graph

    __hash__ = None


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{0, ..., n-1}``; ``mapping[u]`` is the image of ``u``."""

    mapping: tuple

    def __post_init__(self):
        mapping = tuple(int(i) for i in self.mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError(f"{mapping} is not a permutation of 0..{len(mapping) - 1}")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def random(cls, n, seed=None):
        return cls(check_random_state(seed).permutation(n))

    @classmethod
    def transposition(cls, n, a, b):
        mapping = list(range(n))
        mapping[a], mapping[b] = b, a
        return cls(mapping)

    @property
    def n(self):
        return len(self.mapping)

    def __call__(self, u):
        return self.mapping[u]

    def inverse(self):
        inv = [0] * self.n
        for u, su in enumerate(self.mapping):
            inv[su] = u
        return Permutation(inv)

    def compose(self, other):
        """Return ``self ∘ other``, i.e. ``u -> self(other(u))``."""
        if other.n != self.n:
            raise ValueError("cannot compose permutations of different sizes")
        return Permutation(self.mapping[v] for v in other.mapping)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mapping, dtype=dtype)


def _as_mapping(s, n):
    if not isinstance(s, Permutation):
        s = Permutation(s)
    if s.n != n:
        raise ValueError(f"permutation acts on {s.n} points, graph has {n} vertices")
    return np.asarray(s.mapping, dtype=np.intp)


def permute(g, s):
    """Relabel the vertices of ``g`` by ``s``.

    Returns an object of the same kind as ``g`` (``WeightedGraph`` or array).

    Examples
    --------
    >>> permute(np.array([[0., 1.], [0., 0.]]), Permutation((1, 0)))
    array([[0., 0.],
           [1., 0.]])
    """
    W = check_weights(g)
    p = _as_mapping(s, W.shape[0])
    out = np.empty_like(W)
    out[np.ix_(p, p)] = W
    return WeightedGraph(out) if isinstance(g, WeightedGraph) else out


def permute_labeled(g, s):
    """Relabel a :class:`LabeledGraph`; labels move along with their vertices."""
    p = _as_mapping(s, g.n)
    return LabeledGraph(permute(g.graph, s), tuple(int(p[x]) for x in g.labels))


def l1_norm(g):
    """Entrywise l1 norm of the weight matrix."""
    return float(np.abs(check_weights(g)).sum())


def shift(g, c=2.0):
    """Return ``W + c I``."""
    W = check_weights(g)
    out = W + c * np.eye(W.shape[0])
    return WeightedGraph(out) if isinstance(g, WeightedGraph) else out


def _min_l1_over(W1, W2, perms, chunk=20000):
    # perms: (P, n) push-forward maps; W2^s = W2[inv][:, inv]
    best = np.inf
    for start in range(0, len(perms), chunk):
        p = perms[start:start + chunk]
        inv = np.argsort(p, axis=1)
        moved = W2[inv[:, :, None], inv[:, None, :]]
        dist = np.abs(W1[None] - moved).sum(axis=(1, 2))
        best = min(best, float(dist.min()))
    return best


def _check_exhaustive(n, cap):
    cap = get_cap("edit_distance_n", cap)
    if n > cap:
        raise CapExceededError(f"exhaustive edit distance on n={n}", n, cap)


def edit_distance(g1, g2, cap=None):
    """Minimum l1 distance between ``g1`` and all relabelings of ``g2``.

    Exhaustive over all ``n!`` permutations, so ``n`` is capped (default 9).
    """
    W1, W2 = check_weights(g1, name="g1"), check_weights(g2, name="g2")
    n = W1.shape[0]
    if W2.shape[0] != n:
        raise ValueError(f"vertex counts differ: {n} vs {W2.shape[0]}")
    _check_exhaustive(n, cap)
    perms = np.array(list(permutations(range(n))), dtype=np.intp)
    return _min_l1_over(W1, W2, perms)


def labeled_edit_distance(g1, g2, cap=None):
    """Edit distance restricted to permutations ``s`` with ``s(x2[i]) == x1[i]``."""
    n = g1.n
    if g2.n != n:
        raise ValueError(f"vertex counts differ: {n} vs {g2.n}")
    if g1.k != g2.k:
        raise ValueError(f"label arities differ: {g1.k} vs {g2.k}")
    _check_exhaustive(n, cap)
    x1, x2 = g1.labels, g2.labels
    free_src = [u for u in range(n) if u not in x2]
    free_dst = [u for u in range(n) if u not in x1]
    rows = []
    for images in permutations(free_dst):
        p = np.empty(n, dtype=np.intp)
        p[list(x2)] = x1
        p[free_src] = images
        rows.append(p)
    perms = np.array(rows, dtype=np.intp).reshape(-1, n)
    return _min_l1_over(g1.graph.weights, g2.graph.weights, perms)
