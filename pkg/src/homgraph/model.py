"""Linear models over shifted homomorphism numbers.

An invariant model is ``W -> intercept + sum_F a_F hom(F, W + c I)``; an
equivariant model replaces ``hom`` by the k-labeled ``hom_x`` and is a
single function of ``(W, x)``. Coefficients come from one deterministic
least-squares solve on standardized feature columns.
"""

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from homgraph.hom import _integral, hom, hom_exact, hom_labeled
from homgraph.patterns import (
    LabeledPattern,
    canonical_form,
    enumerate_labeled_patterns,
    enumerate_patterns,
)
from homgraph.validation import check_graph_batch, check_labels, check_weights

NORMALIZATIONS = ("none", "density")
SEPARATION_TOL = 1e-6


def distinct_tuples(n, k):
    """All k-tuples of pairwise-distinct vertices of ``range(n)``, in lexicographic order."""
    return list(permutations(range(n), k))


def _check_distinct(patterns):
    seen = {}
    for p in patterns:
        key = canonical_form(p)
        if key in seen:
            raise ValueError(f"patterns {seen[key]!r} and {p!r} are isomorphic")
        seen[key] = p


def _divisor(p, n, normalization):
    if normalization == "none":
        return 1.0
    free = p.m - (p.k if isinstance(p, LabeledPattern) else 0)
    return float(n) ** free


def featurize(g, patterns, shift=2.0, normalization="none"):
    """Vector of ``hom(F, W + shift I)`` over ``patterns``.

    With ``normalization="density"`` entry ``F`` is divided by ``n^m``.
    """
    W = check_weights(g)
    n = W.shape[0]
    Ws = W + shift * np.eye(n)
    return np.array([hom(p, Ws) / _divisor(p, n, normalization) for p in patterns])


def featurize_labeled(g, labels, patterns, shift=2.0, normalization="none"):
    """Vector of ``hom_x(F, W + shift I)`` over labeled ``patterns``.

    ``labels`` are 0-based and pairwise distinct. With density normalization
    entry ``F`` is divided by ``n^(m - k)``, the number of free maps.
    """
    W = check_weights(g)
    n = W.shape[0]
    x = check_labels(labels, n)
    Ws = W + shift * np.eye(n)
    return np.array([hom_labeled(p, Ws, x) / _divisor(p, n, normalization)
                     for p in patterns])


@dataclass(frozen=True)
class HomModel:
    """A fitted linear combination of shifted homomorphism numbers.

    ``coefficients`` multiply the (possibly density-normalized) features
    directly; ``feature_mean`` and ``feature_scale`` record the column
    standardization used while solving.
    """

    patterns: tuple
    coefficients: tuple
    intercept: float = 0.0
    shift: float = 2.0
    normalization: str = "none"
    feature_mean: tuple = None
    feature_scale: tuple = None
    k: int = None

    def __post_init__(self):
        object.__setattr__(self, "patterns", tuple(self.patterns))
        object.__setattr__(self, "coefficients", tuple(float(a) for a in self.coefficients))
        if not self.patterns:
            raise ValueError("a model needs at least one pattern")
        if len(self.patterns) != len(self.coefficients):
            raise ValueError(
                f"{len(self.patterns)} patterns but {len(self.coefficients)} coefficients")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        labeled = [isinstance(p, LabeledPattern) for p in self.patterns]
        if self.k is None and any(labeled):
            raise ValueError("labeled patterns need an equivariant model (k set)")
        if self.k is not None:
            if not all(labeled):
                raise ValueError("an equivariant model needs LabeledPattern entries")
            if any(p.k != self.k for p in self.patterns):
                raise ValueError(f"all labeled patterns must have k={self.k}")
        _check_distinct(self.patterns)

    @property
    def equivariant(self):
        return self.k is not None


@dataclass
class Dataset:
    """Graphs of one common size with invariant or equivariant targets.

    Invariant targets are reals. Equivariant targets are dicts mapping
    0-based distinct k-tuples to reals; ``k`` must then be given.
    """

    graphs: list
    targets: list
    k: int = None
    graphs_array: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.graphs_array = check_graph_batch(self.graphs, model_domain=True)
        self.graphs = list(self.graphs_array)
        if len(self.targets) != len(self.graphs):
            raise ValueError(f"{len(self.graphs)} graphs but {len(self.targets)} targets")
        n = self.n
        if self.k is None:
            self.targets = [float(y) for y in self.targets]
        else:
            clean = []
            for t in self.targets:
                if not isinstance(t, dict):
                    raise ValueError("equivariant targets must map tuples to values")
                clean.append({check_labels(x, n, self.k): float(v) for x, v in t.items()})
            self.targets = clean

    @property
    def n(self):
        return self.graphs_array.shape[1]

    def __len__(self):
        return len(self.graphs)

    def rows(self):
        """Flattened ``(graph_index, tuple, value)`` rows of an equivariant dataset."""
        return [(i, x, v) for i, t in enumerate(self.targets) for x, v in sorted(t.items())]


def solve_least_squares(X, y, ridge=0.0, fit_intercept=True):
    """Standardize columns, then solve ``min ||Z b - y||^2 + ridge ||b||^2``.

    Uses an SVD-based solver, so rank-deficient problems get the
    minimum-norm solution. Returns raw-space coefficients, intercept, and
    the column mean/scale used.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("empty design matrix")
    if ridge < 0:
        raise ValueError("ridge must be nonnegative")
    n_rows, n_cols = X.shape
    if fit_intercept:
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        y_mean = float(y.mean())
    else:
        mean = np.zeros(n_cols)
        scale = np.sqrt((X ** 2).mean(axis=0))
        y_mean = 0.0
    flat = scale <= 1e-12 * np.maximum(np.abs(mean), 1.0)
    scale = np.where(flat, 1.0, scale)
    Z = (X - mean) / scale
    Z[:, flat] = 0.0
    target = y - y_mean
    if ridge > 0:
        Z = np.vstack([Z, np.sqrt(ridge) * np.eye(n_cols)])
        target = np.concatenate([target, np.zeros(n_cols)])
    beta = np.linalg.lstsq(Z, target, rcond=None)[0]
    coef = beta / scale
    intercept = y_mean - float(coef @ mean) if fit_intercept else 0.0
    return coef, intercept, mean, scale


def _resolve_patterns(patterns, max_m, k=None, connected_only=False):
    if patterns is not None:
        return list(patterns)
    if k is None:
        return enumerate_patterns(max_m, connected_only=connected_only)
    return enumerate_labeled_patterns(max_m, k, connected_only=connected_only)


def feature_matrix(graphs, patterns, shift=2.0, normalization="none"):
    return np.array([featurize(W, patterns, shift, normalization) for W in graphs])


def fit(dataset, patterns=None, shift=2.0, ridge=0.0, fit_intercept=True,
        normalization="none", max_m=3):
    """Fit an invariant model by least squares.

    ``patterns`` defaults to the full atlas up to ``max_m`` vertices.
    """
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    if dataset.k is not None:
        raise ValueError("dataset has equivariant targets; use fit_equivariant")
    patterns = _resolve_patterns(patterns, max_m)
    X = feature_matrix(dataset.graphs, patterns, shift, normalization)
    coef, b, mean, scale = solve_least_squares(X, dataset.targets, ridge, fit_intercept)
    return HomModel(patterns, coef, b, shift, normalization,
                    tuple(mean.tolist()), tuple(scale.tolist()))


def equivariant_design(dataset, patterns, shift=2.0, normalization="none"):
    rows = dataset.rows()
    X = np.array([featurize_labeled(dataset.graphs[i], x, patterns, shift, normalization)
                  for i, x, _ in rows]).reshape(len(rows), len(patterns))
    return X, np.array([v for _, _, v in rows])


def fit_equivariant(dataset, patterns=None, shift=2.0, ridge=0.0, fit_intercept=True,
                    normalization="none", max_m=3):
    """Fit one shared coefficient vector over all (graph, tuple) rows."""
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    if dataset.k is None:
        raise ValueError("dataset has invariant targets; use fit")
    patterns = _resolve_patterns(patterns, max_m, dataset.k)
    for p in patterns:
        if not isinstance(p, LabeledPattern) or p.k != dataset.k:
            raise ValueError(f"pattern {p!r} does not have k={dataset.k} labels")
    X, y = equivariant_design(dataset, patterns, shift, normalization)
    if len(y) == 0:
        raise ValueError("dataset has no target tuples")
    coef, b, mean, scale = solve_least_squares(X, y, ridge, fit_intercept)
    return HomModel(patterns, coef, b, shift, normalization,
                    tuple(mean.tolist()), tuple(scale.tolist()), k=dataset.k)


def predict(model, g):
    """Evaluate an invariant model on one graph."""
    if model.equivariant:
        raise ValueError("equivariant model; use predict_equivariant")
    phi = featurize(g, model.patterns, model.shift, model.normalization)
    return float(model.intercept + phi @ np.asarray(model.coefficients))


def predict_labeled(model, g, labels):
    phi = featurize_labeled(g, labels, model.patterns, model.shift, model.normalization)
    return float(model.intercept + phi @ np.asarray(model.coefficients))


def predict_equivariant(model, g):
    """Evaluate an equivariant model at every distinct k-tuple of ``g``.

    Returns a dict keyed by 0-based tuples.
    """
    if not model.equivariant:
        raise ValueError("invariant model; use predict")
    W = check_weights(g)
    return {x: predict_labeled(model, W, x) for x in distinct_tuples(W.shape[0], model.k)}


def residual_curve(dataset, max_m, shift=2.0, ridge=0.0, fit_intercept=True,
                   normalization="none", connected_only=False):
    """Training error for nested pattern budgets ``m <= 1, ..., m <= max_m``.

    Returns a list of dicts with keys ``max_m``, ``n_patterns``, ``sse`` and
    ``relative_residual`` (``||residual|| / ||y||``).
    """
    k = dataset.k
    full = _resolve_patterns(None, max_m, k, connected_only)
    if k is None:
        X = feature_matrix(dataset.graphs, full, shift, normalization)
        y = np.asarray(dataset.targets)
    else:
        X, y = equivariant_design(dataset, full, shift, normalization)
    y_norm = float(np.linalg.norm(y))
    out = []
    for budget in range(max(k or 0, 1), max_m + 1):
        cols = [c for c, p in enumerate(full) if p.m <= budget]
        if not cols:
            continue
        coef, b, _, _ = solve_least_squares(X[:, cols], y, ridge, fit_intercept)
        resid = X[:, cols] @ coef + b - y
        sse = float(resid @ resid)
        out.append({
            "max_m": budget,
            "n_patterns": len(cols),
            "sse": sse,
            "relative_residual": float(np.sqrt(sse)) / y_norm if y_norm > 0 else float(np.sqrt(sse)),
        })
    return out


@dataclass(frozen=True)
class Separation:
    """Outcome of a separating-pattern search.

    ``pattern`` is ``None`` when no pattern with at most ``max_m`` vertices
    tells the graphs apart.
    """

    pattern: object
    hom1: float
    hom2: float
    max_m: int
    exact: bool

    @property
    def separated(self):
        return self.pattern is not None


def _shifted_pair(W1, W2, shift):
    n = W1.shape[0]
    if W2.shape[0] != n:
        raise ValueError(f"vertex counts differ: {n} vs {W2.shape[0]}")
    A1 = W1 + shift * np.eye(n)
    A2 = W2 + shift * np.eye(n)
    if np.any(np.diagonal(A1) <= 0) or np.any(np.diagonal(A2) <= 0):
        raise ValueError("shifted matrices must have a positive diagonal")
    return A1, A2


def _search(A1, A2, x1, x2, candidates, max_m, tol):
    exact = _integral(A1) and _integral(A2)
    for p in candidates:
        if exact:
            h1, h2 = hom_exact(p, A1, x1), hom_exact(p, A2, x2)
            differs = h1 != h2
        elif isinstance(p, LabeledPattern) and p.k:
            h1, h2 = hom_labeled(p, A1, x1), hom_labeled(p, A2, x2)
            differs = abs(h1 - h2) > tol * max(1.0, abs(h1), abs(h2))
        else:
            h1, h2 = hom(p, A1), hom(p, A2)
            differs = abs(h1 - h2) > tol * max(1.0, abs(h1), abs(h2))
        if differs:
            return Separation(p, h1, h2, max_m, exact)
    return Separation(None, None, None, max_m, exact)


def separate(g1, g2, max_m=3, shift=2.0, tol=SEPARATION_TOL):
    """Smallest atlas pattern whose shifted hom numbers differ on ``g1`` and ``g2``.

    Patterns are tried by increasing size, then canonical form. Integer-valued
    inputs are compared exactly; otherwise values must differ by more than
    ``tol * max(1, |hom1|, |hom2|)``.
    """
    A1, A2 = _shifted_pair(check_weights(g1, name="g1"), check_weights(g2, name="g2"), shift)
    return _search(A1, A2, (), (), enumerate_patterns(max_m), max_m, tol)


def separate_labeled(g1, g2, max_m=3, shift=2.0, tol=SEPARATION_TOL):
    """Labeled analogue of :func:`separate` for two :class:`LabeledGraph` inputs."""
    if g1.k != g2.k:
        raise ValueError(f"label arities differ: {g1.k} vs {g2.k}")
    A1, A2 = _shifted_pair(g1.graph.weights, g2.graph.weights, shift)
    candidates = enumerate_labeled_patterns(max_m, g1.k)
    return _search(A1, A2, g1.labels, g2.labels, candidates, max_m, tol)


__all__ = [
    "Dataset",
    "HomModel",
    "Separation",
    "distinct_tuples",
    "featurize",
    "featurize_labeled",
    "fit",
    "fit_equivariant",
    "predict",
    "predict_equivariant",
    "predict_labeled",
    "residual_curve",
    "separate",
    "separate_labeled",
    "solve_least_squares",
]
