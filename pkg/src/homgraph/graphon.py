"""Step graphons: homomorphism densities, cut norm, cut distance, sampling.

A step graphon splits [0, 1] into ``q`` intervals of lengths ``mu`` and is
constant, equal to ``B[a, b]``, on each product of intervals. All integrals
then reduce to finite sums over block assignments.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from homgraph._caps import get_cap
from homgraph.exceptions import CapExceededError
from homgraph.graph import WeightedGraph
from homgraph.hom import brute_sum, contract
from homgraph.patterns import LabeledPattern, Pattern
from homgraph.validation import check_random_state


@dataclass(frozen=True, eq=False)
class StepGraphon:
    """Block values ``B`` (q x q) with block measures ``mu`` (uniform by default).

    Values must lie in [0, 1]; with ``signed=True`` they may lie in
    [-1, 1], which is what differences of graphons need.
    """

    B: np.ndarray
    mu: np.ndarray = None
    signed: bool = False

    def __post_init__(self):
        B = np.array(self.B, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] == 0:
            raise ValueError(f"B must be a non-empty square matrix, got shape {B.shape}")
        q = B.shape[0]
        lo = -1.0 if self.signed else 0.0
        if not np.all(np.isfinite(B)) or np.any(B < lo) or np.any(B > 1.0):
            raise ValueError(f"block values must lie in [{lo:g}, 1]")
        mu = np.full(q, 1.0 / q) if self.mu is None else np.array(self.mu, dtype=float)
        if mu.shape != (q,):
            raise ValueError(f"mu must have length {q}, got shape {mu.shape}")
        if np.any(mu <= 0) or abs(mu.sum() - 1.0) > 1e-9:
            raise ValueError("block measures must be positive and sum to 1")
        B.setflags(write=False)
        mu.setflags(write=False)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "mu", mu)

    @property
    def q(self):
        return self.B.shape[0]

    @classmethod
    def constant(cls, p):
        return cls([[p]])

    @classmethod
    def random(cls, q, seed=None, uniform_blocks=False):
        rng = check_random_state(seed)
        B = rng.uniform(0.0, 1.0, (q, q))
        mu = None if uniform_blocks else rng.dirichlet(np.ones(q))
        return cls(B, mu)

    def has_uniform_blocks(self):
        return bool(np.allclose(self.mu, 1.0 / self.q, rtol=0, atol=1e-12))

    def permute_blocks(self, perm):
        """Move block ``a`` to position ``perm[a]`` (values and measures alike)."""
        perm = np.asarray(perm, dtype=np.intp)
        if sorted(perm.tolist()) != list(range(self.q)):
            raise ValueError(f"{perm.tolist()} is not a permutation of the blocks")
        inv = np.argsort(perm)
        return StepGraphon(self.B[np.ix_(inv, inv)], self.mu[inv], self.signed)

    def __sub__(self, other):
        if self.q != other.q or not np.array_equal(self.mu, other.mu):
            raise ValueError("can only subtract step graphons with identical blocks")
        return StepGraphon(self.B - other.B, self.mu, signed=True)

    def __mul__(self, c):
        if abs(c) > 1:
            raise ValueError("scaling by |c| > 1 can leave [-1, 1]")
        return StepGraphon(self.B * c, self.mu, signed=True)

    __rmul__ = __mul__


def _pattern(f):
    return f.pattern if isinstance(f, LabeledPattern) else f


def _check_pattern_cap(pattern):
    cap = get_cap("tree_decomposition_m")
    if pattern.m > cap:
        raise CapExceededError(f"density of m={pattern.m} pattern", pattern.m, cap)


def density(f, w):
    """Homomorphism density ``t(F, W)``.

    Only edges contribute factors; each vertex is integrated against the
    block measures. Unlike a homomorphism number there is no diagonal factor.

    Examples
    --------
    >>> density(Pattern(2, {(0, 1)}), StepGraphon([[1, 0], [0, 1]]))
    0.5
    """
    pattern = _pattern(f)
    _check_pattern_cap(pattern)
    full = np.arange(w.q)
    return contract(pattern, w.B, [w.mu] * pattern.m, [full] * pattern.m)


def density_brute(f, w, cap=None):
    pattern = _pattern(f)
    full = np.arange(w.q)
    return brute_sum(pattern, w.B, [w.mu] * pattern.m, [full] * pattern.m,
                     cap=get_cap("density_work", cap), what="density_brute")


def _labeled_args(f, w, blocks):
    if not isinstance(f, LabeledPattern):
        f = LabeledPattern(f, 0)
    blocks = tuple(int(b) for b in blocks)
    if len(blocks) != f.k:
        raise ValueError(f"pattern has {f.k} labels but {len(blocks)} blocks were given")
    for b in blocks:
        if not 0 <= b < w.q:
            raise ValueError(f"block index {b} outside 0..{w.q - 1}")
    full = np.arange(w.q)
    ones = np.ones(w.q)
    factors = [ones if v < f.k else w.mu for v in range(f.m)]
    domains = [np.array([blocks[v]]) if v < f.k else full for v in range(f.m)]
    return f.pattern, w.B, factors, domains


def density_labeled(f, w, blocks):
    """k-labeled density with label ``i`` placed inside block ``blocks[i]``.

    Only unlabeled vertices are integrated. Blocks are 0-based.
    """
    _check_pattern_cap(_pattern(f))
    return contract(*_labeled_args(f, w, blocks))


def density_labeled_brute(f, w, blocks, cap=None):
    return brute_sum(*_labeled_args(f, w, blocks),
                     cap=get_cap("density_work", cap), what="density_labeled_brute")


def _subset_indicators(q):
    ar = np.arange(1 << q)
    return ((ar[:, None] >> np.arange(q)[None, :]) & 1).astype(float)


def _cut_norm_blocks(B, mu):
    mass = mu[:, None] * B * mu[None, :]
    rows = _subset_indicators(len(mu)) @ mass
    pos = np.clip(rows, 0, None).sum(axis=1).max()
    neg = -np.clip(rows, None, 0).sum(axis=1).min()
    return float(max(pos, neg))


def cut_norm(w, cap=None):
    """Cut norm of a (signed) step graphon.

    The supremum over measurable ``S, T`` is attained on unions of blocks.
    For a fixed ``S`` the best ``T`` collects all blocks of one sign, so the
    search is over ``2^q`` row sets only.
    """
    cap = get_cap("cut_norm_q", cap)
    if w.q > cap:
        raise CapExceededError(f"cut norm over {w.q} blocks", w.q, cap)
    return _cut_norm_blocks(w.B, w.mu)


def cut_norm_brute(w, cap=None):
    """Cut norm by trying every pair of block sets (``4^q`` pairs)."""
    cap = get_cap("cut_norm_q", cap)
    if w.q > cap:
        raise CapExceededError(f"cut norm over {w.q} blocks", w.q, cap)
    mass = w.mu[:, None] * w.B * w.mu[None, :]
    ind = _subset_indicators(w.q)
    return float(np.abs(ind @ mass @ ind.T).max())


def cut_distance(w1, w2, cap=None):
    """Smallest cut norm of ``w1 - w2`` over block permutations of ``w2``.

    Both graphons must have the same number of uniform blocks. The true cut
    distance allows any measure-preserving bijection, including fractional
    overlays of blocks, so this value is an upper bound on it.
    """
    if w1.q != w2.q:
        raise ValueError(f"block counts differ: {w1.q} vs {w2.q}")
    if not (w1.has_uniform_blocks() and w2.has_uniform_blocks()):
        raise ValueError("cut_distance needs uniform block measures")
    cap = get_cap("cut_distance_q", cap)
    if w1.q > cap:
        raise CapExceededError(f"cut distance over {w1.q}! block permutations", w1.q, cap)
    best = np.inf
    for perm in permutations(range(w1.q)):
        inv = np.argsort(perm)
        diff = w1.B - w2.B[np.ix_(inv, inv)]
        best = min(best, _cut_norm_blocks(diff, w1.mu))
    return float(best)


def sample_blocks(w, n, seed=None):
    """Block index of ``n`` independent uniform points of [0, 1]."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = check_random_state(seed)
    return rng.choice(w.q, size=n, p=w.mu)


def sample_graph(w, n, seed=None):
    """The ``n``-vertex weighted graph ``W(u_i, u_j)`` on random points ``u``."""
    blocks = sample_blocks(w, n, seed)
    return WeightedGraph(w.B[np.ix_(blocks, blocks)])


def monte_carlo_density(f, w, n_tuples=100_000, seed=None):
    """Estimate ``t(F, W)`` from ``n_tuples`` independent injective point tuples.

    Each tuple uses ``m`` fresh sampled points, so the terms are i.i.d. and
    the returned standard error is the usual ``std / sqrt(n_tuples)``.

    Returns
    -------
    estimate, stderr : float
    """
    pattern = _pattern(f)
    blocks = sample_blocks(w, n_tuples * pattern.m, seed).reshape(n_tuples, pattern.m)
    term = np.ones(n_tuples)
    for i, j in pattern.edge_list:
        term *= w.B[blocks[:, i], blocks[:, j]]
    return float(term.mean()), float(term.std(ddof=1) / np.sqrt(n_tuples))


__all__ = [
    "StepGraphon",
    "cut_distance",
    "cut_norm",
    "cut_norm_brute",
    "density",
    "density_brute",
    "density_labeled",
    "density_labeled_brute",
    "monte_carlo_density",
    "sample_blocks",
    "sample_graph",
]
