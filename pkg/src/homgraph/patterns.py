"""Pattern digraphs: representation, canonical forms, enumeration, unions.

A pattern is a simple loop-free digraph on vertices ``0..m-1``. A labeled
pattern additionally distinguishes its first ``k`` vertices; isomorphisms of
labeled patterns must send label ``i`` to label ``i``.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from homgraph._caps import get_cap
from homgraph.exceptions import CapExceededError


@dataclass(frozen=True)
class Pattern:
    """Simple directed graph on ``m`` vertices, edges as ``(i, j)`` pairs."""

    m: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        m = int(self.m)
        if m < 1:
            raise ValueError(f"a pattern needs at least one vertex, got m={m}")
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop ({i}, {j}) not allowed in a pattern")
            if not (0 <= i < m and 0 <= j < m):
                raise ValueError(f"edge ({i}, {j}) outside vertex range 0..{m - 1}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "edges", edges)

    @property
    def edge_list(self):
        return sorted(self.edges)

    @property
    def n_edges(self):
        return len(self.edges)

    def relabel(self, perm):
        """Return the isomorphic copy with vertex ``i`` renamed ``perm[i]``."""
        perm = tuple(perm)
        if sorted(perm) != list(range(self.m)):
            raise ValueError(f"{perm} is not a permutation of 0..{self.m - 1}")
        return Pattern(self.m, {(perm[i], perm[j]) for i, j in self.edges})

    def is_weakly_connected(self):
        seen = {0}
        stack = [0]
        nbrs = {v: set() for v in range(self.m)}
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        while stack:
            for w in nbrs[stack.pop()] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == self.m

    def __repr__(self):
        return f"Pattern(m={self.m}, edges={self.edge_list})"


@dataclass(frozen=True)
class LabeledPattern:
    """A pattern whose vertices ``0..k-1`` are labels, in that order."""

    pattern: Pattern
    k: int = 0

    def __post_init__(self):
        if not 0 <= self.k <= self.pattern.m:
            raise ValueError(f"k={self.k} labels on a pattern with m={self.pattern.m}")

    @classmethod
    def from_edges(cls, m, edges, k=0):
        return cls(Pattern(m, edges), k)

    @property
    def m(self):
        return self.pattern.m

    @property
    def edges(self):
        return self.pattern.edges

    def __repr__(self):
        return f"LabeledPattern(m={self.m}, k={self.k}, edges={self.pattern.edge_list})"


def singleton():
    """The one-vertex pattern with no edges."""
    return Pattern(1)


def _split(p):
    if isinstance(p, LabeledPattern):
        return p.pattern, p.k
    return p, 0


def _code(m, edges, perm):
    top = m * m - 1
    return sum(1 << (top - (perm[i] * m + perm[j])) for i, j in edges)


def _label_fixing_perms(m, k):
    head = tuple(range(k))
    return [head + rest for rest in permutations(range(k, m))]


def _encode(m, k, code):
    nbytes = (m * m + 7) // 8
    body = (code << (8 * nbytes - m * m)).to_bytes(nbytes, "big")
    return bytes([m]) + body + (bytes([k]) if k else b"")


def _decode(m, code):
    top = m * m - 1
    return Pattern(m, {(pos // m, pos % m) for pos in range(m * m)
                       if code >> (top - pos) & 1})


def canonical_code(p, cap=None):
    """Integer form of :func:`canonical_form` (smaller means earlier)."""
    pattern, k = _split(p)
    cap = get_cap("canonical_m", cap)
    if pattern.m > cap:
        raise CapExceededError(f"canonical form of m={pattern.m} pattern", pattern.m, cap)
    return min(_code(pattern.m, pattern.edges, perm)
               for perm in _label_fixing_perms(pattern.m, k))


def canonical_form(p, cap=None):
    """Byte string identifying ``p`` up to (label-order-preserving) isomorphism.

    The body is the row-major adjacency bit-matrix, minimized lexicographically
    over all vertex orderings that fix the labels; it is prefixed by ``m`` and,
    for ``k > 0``, suffixed by ``k``.
    """
    pattern, k = _split(p)
    return _encode(pattern.m, k, canonical_code(p, cap))


def canonical_hex(p, cap=None):
    return canonical_form(p, cap).hex()


def _bit_table(weights):
    ar = np.arange(1 << len(weights), dtype=np.int64)
    table = np.zeros_like(ar)
    for b, w in enumerate(weights):
        table += ((ar >> b) & 1) * w
    return table


@lru_cache(maxsize=None)
def _class_codes(m, k):
    # Minimal code of every arc subset, vectorized over all 2^(m(m-1)) subsets
    # with a split lookup table per permutation.
    arcs = [(i, j) for i in range(m) for j in range(m) if i != j]
    n_arcs = len(arcs)
    lo = n_arcs // 2
    masks = np.arange(1 << n_arcs, dtype=np.int64)
    lo_idx = masks & ((1 << lo) - 1)
    hi_idx = masks >> lo
    canon = None
    top = m * m - 1
    for perm in _label_fixing_perms(m, k):
        weights = [1 << (top - (perm[i] * m + perm[j])) for i, j in arcs]
        code = _bit_table(weights[:lo])[lo_idx] + _bit_table(weights[lo:])[hi_idx]
        canon = code if canon is None else np.minimum(canon, code)
    return tuple(int(c) for c in np.unique(canon))


def _check_atlas_cap(max_m, cap):
    cap = get_cap("atlas_m", cap)
    if max_m > cap:
        raise CapExceededError(f"pattern atlas up to m={max_m}", max_m, cap)


def enumerate_patterns(max_m, connected_only=False, cap=None):
    """One representative per isomorphism class of digraphs on 1..max_m vertices.

    Representatives are the canonical (minimal-code) members, ordered by
    ``m`` and then by canonical form.
    """
    _check_atlas_cap(max_m, cap)
    out = []
    for m in range(1, max_m + 1):
        for code in _class_codes(m, 0):
            p = _decode(m, code)
            if not connected_only or p.is_weakly_connected():
                out.append(p)
    return out


def enumerate_labeled_patterns(max_m, k, connected_only=False, cap=None):
    """Labeled-pattern classes with ``k`` labels and ``max(k, 1)..max_m`` vertices."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > max_m:
        raise ValueError(f"k={k} exceeds max_m={max_m}")
    _check_atlas_cap(max_m, cap)
    out = []
    for m in range(max(k, 1), max_m + 1):
        for code in _class_codes(m, k):
            p = _decode(m, code)
            if not connected_only or p.is_weakly_connected():
                out.append(LabeledPattern(p, k))
    return out


def disjoint_union(p1, p2):
    """Disjoint union; vertices of ``p2`` are shifted by ``p1.m``."""
    m1 = p1.m
    edges = set(p1.edges) | {(i + m1, j + m1) for i, j in p2.edges}
    return Pattern(m1 + p2.m, edges)


def glued_union(p1, p2):
    """Disjoint union of two labeled patterns with label ``i`` of both identified.

    Parallel edges created by the identification are merged, so the result
    is again simple.
    """
    if p1.k != p2.k:
        raise ValueError(f"label arities differ: {p1.k} vs {p2.k}")
    k, m1 = p1.k, p1.m

    def move(v):
        return v if v < k else v - k + m1

    edges = set(p1.edges) | {(move(i), move(j)) for i, j in p2.edges}
    return LabeledPattern(Pattern(m1 + p2.m - k, edges), k)
