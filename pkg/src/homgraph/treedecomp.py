"""Minimum-width tree decompositions of small patterns.

The optimal elimination order is found by the exact subset recurrence

    TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|)

where ``Q(S, v)`` is the set of vertices outside ``S + v`` reachable from
``v`` through ``S``. This is an exhaustive search over elimination orders
with shared prefixes memoized, so it costs ``O(2^m m^2)`` instead of ``m!``.
"""

from dataclasses import dataclass
from functools import lru_cache

from homgraph._caps import get_cap
from homgraph.exceptions import CapExceededError
from homgraph.patterns import LabeledPattern


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree decomposition built from an elimination order.

    Node ``t`` eliminates vertex ``order[t]``; its bag holds that vertex and
    its not-yet-eliminated neighbors in the fill graph. ``parent[t] > t``
    for every non-root node and the root is the last node.
    """

    order: tuple
    bags: tuple
    parent: tuple

    @property
    def root(self):
        return len(self.order) - 1

    @property
    def width(self):
        return max(len(b) for b in self.bags) - 1

    def children(self, t):
        return [c for c, p in enumerate(self.parent) if p == t]

    def is_valid_for(self, pattern):
        """Check the vertex, edge and connectedness conditions."""
        pattern = getattr(pattern, "pattern", pattern)
        if set().union(*self.bags) != set(range(pattern.m)):
            return False
        for i, j in pattern.edges:
            if not any(i in b and j in b for b in self.bags):
                return False
        for v in range(pattern.m):
            nodes = {t for t, b in enumerate(self.bags) if v in b}
            # connected iff exactly one node's parent lies outside the set
            tops = [t for t in nodes if self.parent[t] not in nodes]
            if len(tops) != 1:
                return False
        return True


def _undirected_masks(m, edges):
    adj = [0] * m
    for i, j in edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return adj


def _reach(adj, S, v):
    # vertices outside S + v reachable from v through S
    seen = 1 << v
    frontier = [v]
    out = 0
    while frontier:
        u = frontier.pop()
        nbrs = adj[u] & ~seen
        seen |= nbrs
        inner = nbrs & S
        out |= nbrs & ~S
        w = inner
        while w:
            low = w & -w
            frontier.append(low.bit_length() - 1)
            w ^= low
    return out


@lru_cache(maxsize=None)
def _optimal_order(m, edges):
    adj = _undirected_masks(m, edges)
    full = (1 << m) - 1
    tw = {0: -1}
    choice = {}
    for S in sorted(range(1, full + 1), key=lambda s: bin(s).count("1")):
        best, arg = None, None
        w = S
        while w:
            low = w & -w
            v = low.bit_length() - 1
            w ^= low
            rest = S ^ low
            cost = max(tw[rest], bin(_reach(adj, rest, v)).count("1"))
            if best is None or cost < best:
                best, arg = cost, v
        tw[S], choice[S] = best, arg
    order = []
    S = full
    while S:
        v = choice[S]
        order.append(v)
        S ^= 1 << v
    return tuple(reversed(order))


def decomposition_from_order(pattern, order):
    """Tree decomposition induced by eliminating vertices in ``order``."""
    pattern = getattr(pattern, "pattern", pattern)
    order = tuple(order)
    if sorted(order) != list(range(pattern.m)):
        raise ValueError(f"{order} is not an ordering of the pattern's vertices")
    pos = {v: t for t, v in enumerate(order)}
    nbrs = {v: set() for v in range(pattern.m)}
    for i, j in pattern.edges:
        nbrs[i].add(j)
        nbrs[j].add(i)
    bags, parent = [], []
    last = len(order) - 1
    for t, v in enumerate(order):
        later = {u for u in nbrs[v] if pos[u] > t}
        for a in later:
            nbrs[a] |= later - {a}
        bags.append(frozenset(later | {v}))
        if later:
            parent.append(min(pos[u] for u in later))
        else:
            # component root; hang it under the global root
            parent.append(None if t == last else last)
    return TreeDecomposition(order, tuple(bags), tuple(parent))


@lru_cache(maxsize=4096)
def _cached(pattern):
    return decomposition_from_order(pattern, _optimal_order(pattern.m, pattern.edges))


def tree_decomposition(p, cap=None):
    """Minimum-width tree decomposition of a pattern (edge directions ignored)."""
    pattern = p.pattern if isinstance(p, LabeledPattern) else p
    cap = get_cap("tree_decomposition_m", cap)
    if pattern.m > cap:
        raise CapExceededError(f"tree decomposition of m={pattern.m} pattern",
                               pattern.m, cap)
    return _cached(pattern)
