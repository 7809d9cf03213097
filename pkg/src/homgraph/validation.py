"""Input validation helpers.

These mirror the ``sklearn.utils.validation`` idiom: each ``check_*``
function takes loosely typed user input, raises ``ValueError`` with a
readable message on bad input, and returns a normalized value.
"""

import numbers

import numpy as np


def check_weights(W, *, model_domain=False, name="W"):
    """Return ``W`` as a square float64 array.

    Parameters
    ----------
    W : array-like or WeightedGraph
    model_domain : bool, default=False
        Also require every entry to lie in [-1, 1].
    """
    W = np.asarray(getattr(W, "weights", W), dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {W.shape}")
    if W.shape[0] == 0:
        raise ValueError(f"{name} must have at least one vertex")
    if not np.all(np.isfinite(W)):
        raise ValueError(f"{name} contains non-finite entries")
    if model_domain and np.any(np.abs(W) > 1.0):
        raise ValueError(f"{name} has entries outside [-1, 1]")
    return W


def check_graph_batch(X, *, model_domain=False):
    """Stack a collection of graphs into an array of shape (n_graphs, n, n).

    All graphs must share one vertex count. Graphs with different vertex
    counts live in different connected components of the graph space; the
    step-graphon functions in :mod:`homgraph.graphon` are the tool for those.
    """
    if isinstance(X, np.ndarray) and X.ndim == 3:
        mats = [X[i] for i in range(X.shape[0])]
    else:
        mats = list(X)
    if not mats:
        raise ValueError("empty collection of graphs")
    mats = [check_weights(W, model_domain=model_domain, name=f"graph {i}")
            for i, W in enumerate(mats)]
    sizes = sorted({W.shape[0] for W in mats})
    if len(sizes) > 1:
        raise ValueError(
            f"graphs have mixed vertex counts {sizes}; a model is defined for "
            "one fixed n (see homgraph.graphon for size-free densities)"
        )
    return np.stack(mats)


def check_labels(labels, n, k=None):
    """Validate a tuple of pairwise-distinct 0-based vertex indices."""
    labels = tuple(labels)
    for x in labels:
        if not isinstance(x, numbers.Integral) or isinstance(x, bool):
            raise ValueError(f"label {x!r} is not an integer")
    labels = tuple(int(x) for x in labels)
    if k is not None and len(labels) != k:
        raise ValueError(f"expected {k} labels, got {len(labels)}")
    if len(labels) > n:
        raise ValueError(f"{len(labels)} labels on a graph with {n} vertices")
    for x in labels:
        if not 0 <= x < n:
            raise ValueError(f"label {x} outside 0..{n - 1}")
    if len(set(labels)) != len(labels):
        raise ValueError(f"labels {labels} are not pairwise distinct")
    return labels


def check_random_state(seed):
    """Turn ``seed`` into a ``numpy.random.Generator``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
