"""scikit-learn compatible wrappers.

``X`` is always a stack of weight matrices, shape ``(n_samples, n, n)``, or
a list of equally sized matrices. All estimators support ``get_params`` /
``set_params`` and compose with ``sklearn.pipeline`` and model selection.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from homgraph.hom import hom_matrix
from homgraph.model import (
    Dataset,
    _resolve_patterns,
    distinct_tuples,
    fit,
    fit_equivariant,
    featurize_labeled,
    predict_labeled,
)
from homgraph.patterns import canonical_hex
from homgraph.validation import check_graph_batch


class HomFeaturizer(TransformerMixin, BaseEstimator):
    """Map each graph to its shifted homomorphism numbers.

    Parameters
    ----------
    patterns : list of Pattern, optional
        Feature patterns. Defaults to the atlas of all digraphs with at most
        ``max_m`` vertices.
    max_m : int, default=3
    connected_only : bool, default=False
        Restrict the default atlas to weakly connected patterns.
    shift : float, default=2.0
        Diagonal shift ``c`` in ``hom(F, W + c I)``.
    normalization : {"none", "density"}, default="none"
        ``"density"`` divides each feature by ``n ** m``.
    n_jobs : int, optional
        Threads used to featurize graphs.
    """

    def __init__(self, patterns=None, max_m=3, connected_only=False, shift=2.0,
                 normalization="none", n_jobs=None):
        self.patterns = patterns
        self.max_m = max_m
        self.connected_only = connected_only
        self.shift = shift
        self.normalization = normalization
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        X = check_graph_batch(X)
        self.n_vertices_ = X.shape[1]
        self.patterns_ = _resolve_patterns(self.patterns, self.max_m,
                                           connected_only=self.connected_only)
        return self

    def transform(self, X):
        check_is_fitted(self, "patterns_")
        X = check_graph_batch(X)
        if X.shape[1] != self.n_vertices_:
            raise ValueError(f"fitted on n={self.n_vertices_} graphs, got n={X.shape[1]}")
        H = hom_matrix(self.patterns_, X, self.shift, self.n_jobs)
        if self.normalization == "density":
            H = H / np.array([float(X.shape[1]) ** p.m for p in self.patterns_])
        elif self.normalization != "none":
            raise ValueError(f"unknown normalization {self.normalization!r}")
        return H

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "patterns_")
        return np.array([f"hom_{canonical_hex(p)}" for p in self.patterns_], dtype=object)


class HomRegressor(RegressorMixin, BaseEstimator):
    """Least-squares regression on shifted homomorphism numbers.

    Fitted attributes: ``model_`` (a :class:`~homgraph.model.HomModel`),
    ``patterns_``, ``coef_`` and ``intercept_``.
    """

    def __init__(self, patterns=None, max_m=3, connected_only=False, shift=2.0,
                 ridge=0.0, fit_intercept=True, normalization="none"):
        self.patterns = patterns
        self.max_m = max_m
        self.connected_only = connected_only
        self.shift = shift
        self.ridge = ridge
        self.fit_intercept = fit_intercept
        self.normalization = normalization

    def fit(self, X, y):
        data = Dataset(list(check_graph_batch(X, model_domain=True)), list(np.ravel(y)))
        patterns = _resolve_patterns(self.patterns, self.max_m,
                                     connected_only=self.connected_only)
        self.model_ = fit(data, patterns, self.shift, self.ridge, self.fit_intercept,
                          self.normalization)
        self.n_vertices_ = data.n
        self.patterns_ = list(self.model_.patterns)
        self.coef_ = np.array(self.model_.coefficients)
        self.intercept_ = self.model_.intercept
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        X = check_graph_batch(X)
        m = self.model_
        H = hom_matrix(m.patterns, X, m.shift)
        if m.normalization == "density":
            H = H / np.array([float(X.shape[1]) ** p.m for p in m.patterns])
        return H @ self.coef_ + self.intercept_


class EquivariantHomRegressor(RegressorMixin, BaseEstimator):
    """Regression of k-index outputs on k-labeled homomorphism numbers.

    Targets ``Y`` have shape ``(n_samples,) + (n,) * k``; only entries at
    pairwise-distinct index tuples are used (others may hold NaN). A list of
    dicts ``{tuple: value}`` is accepted as well. ``predict`` returns the
    same array layout with NaN at non-distinct tuples.
    """

    def __init__(self, k=1, patterns=None, max_m=3, connected_only=False, shift=2.0,
                 ridge=0.0, fit_intercept=True, normalization="none"):
        self.k = k
        self.patterns = patterns
        self.max_m = max_m
        self.connected_only = connected_only
        self.shift = shift
        self.ridge = ridge
        self.fit_intercept = fit_intercept
        self.normalization = normalization

    def _targets(self, Y, n):
        if isinstance(Y, (list, tuple)) and Y and isinstance(Y[0], dict):
            return list(Y)
        Y = np.asarray(Y, dtype=float)
        if Y.shape[1:] != (n,) * self.k:
            raise ValueError(f"Y must have shape (n_samples,{' n,' * self.k}), got {Y.shape}")
        tuples = distinct_tuples(n, self.k)
        return [{x: float(Yi[x]) for x in tuples} for Yi in Y]

    def fit(self, X, Y):
        X = check_graph_batch(X, model_domain=True)
        data = Dataset(list(X), self._targets(Y, X.shape[1]), k=self.k)
        patterns = _resolve_patterns(self.patterns, self.max_m, self.k, self.connected_only)
        self.model_ = fit_equivariant(data, patterns, self.shift, self.ridge,
                                      self.fit_intercept, self.normalization)
        self.n_vertices_ = data.n
        self.patterns_ = list(self.model_.patterns)
        self.coef_ = np.array(self.model_.coefficients)
        self.intercept_ = self.model_.intercept
        return self

    def transform_tuples(self, W, tuples):
        check_is_fitted(self, "model_")
        m = self.model_
        return np.array([featurize_labeled(W, x, m.patterns, m.shift, m.normalization)
                         for x in tuples])

    def predict(self, X):
        check_is_fitted(self, "model_")
        X = check_graph_batch(X)
        n = X.shape[1]
        out = np.full((X.shape[0],) + (n,) * self.k, np.nan)
        for i, W in enumerate(X):
            for x in distinct_tuples(n, self.k):
                out[(i,) + x] = predict_labeled(self.model_, W, x)
        return out

    def score(self, X, Y, sample_weight=None):
        """R^2 over the distinct-tuple entries."""
        pred = self.predict(X)
        Y = np.asarray(Y, dtype=float)
        mask = ~np.isnan(pred)
        resid = ((pred[mask] - Y[mask]) ** 2).sum()
        total = ((Y[mask] - Y[mask].mean()) ** 2).sum()
        return 1.0 - resid / total if total > 0 else float(resid == 0)
