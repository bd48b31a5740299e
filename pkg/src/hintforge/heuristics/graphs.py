"""Greedy MIS and MDS baselines."""

from __future__ import annotations

from ..instances import Graph, PublicInstance, VertexSet
from .base import DiagnosticTrace, MeasuredSolver


# ---------------------------------------------------------------------------
# Maximum independent set


def _greedy_is(g: Graph, order) -> set:
    adj = g.adjacency()
    chosen: set = set()
    blocked: set = set()
    for v in order:
        if v not in blocked:
            chosen.add(v)
            blocked.add(v)
            blocked |= adj[v]
    return chosen


def mis_min_degree(public: PublicInstance, rng):
    """Dynamic min-degree greedy on the residual graph."""
    g: Graph = public.data
    adj = g.adjacency()
    alive = set(range(g.n))
    deg = {v: len(adj[v]) for v in alive}
    chosen = []
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        chosen.append(v)
        dead = {v} | (adj[v] & alive)
        for u in dead:
            alive.discard(u)
        for u in dead:
            for w in adj[u]:
                if w in alive:
                    deg[w] -= 1
    return VertexSet(tuple(sorted(chosen))), DiagnosticTrace()


def mis_random_greedy(public: PublicInstance, rng):
    g: Graph = public.data
    order = rng.permutation(g.n).tolist()
    return VertexSet(tuple(sorted(_greedy_is(g, order)))), DiagnosticTrace()


def mis_ratio_greedy(public: PublicInstance, rng):
    """Static order by 1/(deg+1) contribution, ties by vertex id."""
    g: Graph = public.data
    deg = [0] * g.n
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    order = sorted(range(g.n), key=lambda v: (deg[v], v))
    return VertexSet(tuple(sorted(_greedy_is(g, order)))), DiagnosticTrace()


def mis_local_improvement(public: PublicInstance, rng, max_passes: int = 10):
    """Greedy start plus (1, 2)-swap local improvement."""
    g: Graph = public.data
    adj = g.adjacency()
    current = _greedy_is(g, sorted(range(g.n), key=lambda v: (len(adj[v]), v)))
    passes = 0
    for _ in range(max_passes):
        improved = False
        for v in sorted(current):
            # Try replacing v with two non-adjacent outside neighbors whose
            # only conflict inside the set is v.
            cands = [
                u
                for u in adj[v]
                if u not in current and all(w == v for w in adj[u] & current)
            ]
            found = False
            for i in range(len(cands)):
                for j in range(i + 1, len(cands)):
                    a, b = cands[i], cands[j]
                    if b not in adj[a]:
                        current.discard(v)
                        current.add(a)
                        current.add(b)
                        found = True
                        break
                if found:
                    break
            if found:
                improved = True
        passes += 1
        if not improved:
            break
    return VertexSet(tuple(sorted(current))), DiagnosticTrace(repair_iterations=passes)


# ---------------------------------------------------------------------------
# Minimum dominating set


def _closed_neighborhoods(g: Graph):
    adj = g.adjacency()
    return [{v} | adj[v] for v in range(g.n)]


def mds_high_degree(public: PublicInstance, rng):
    """Add vertices in static degree order until everything is dominated."""
    g: Graph = public.data
    closed = _closed_neighborhoods(g)
    order = sorted(range(g.n), key=lambda v: (-len(closed[v]), v))
    dominated: set = set()
    chosen = []
    for v in order:
        if len(dominated) == g.n:
            break
        if closed[v] - dominated:
            chosen.append(v)
            dominated |= closed[v]
    # Isolated or missed vertices still need covering.
    for v in range(g.n):
        if v not in dominated:
            chosen.append(v)
            dominated |= closed[v]
    return VertexSet(tuple(sorted(chosen))), DiagnosticTrace()


def _marginal_gain_set(g: Graph) -> list:
    closed = _closed_neighborhoods(g)
    dominated: set = set()
    chosen = []
    while len(dominated) < g.n:
        v = max(range(g.n), key=lambda u: (len(closed[u] - dominated), -u))
        chosen.append(v)
        dominated |= closed[v]
    return chosen


def mds_marginal_gain(public: PublicInstance, rng):
    g: Graph = public.data
    return VertexSet(tuple(sorted(_marginal_gain_set(g)))), DiagnosticTrace()


def mds_redundancy_aware(public: PublicInstance, rng):
    """Marginal-gain greedy followed by redundant-vertex pruning."""
    g: Graph = public.data
    closed = _closed_neighborhoods(g)
    chosen = set(_marginal_gain_set(g))
    removed = 0
    for v in sorted(chosen, key=lambda u: len(closed[u])):
        rest = chosen - {v}
        cover = set()
        for u in rest:
            cover |= closed[u]
        if len(cover) == g.n:
            chosen = rest
            removed += 1
    return (
        VertexSet(tuple(sorted(chosen))),
        DiagnosticTrace(repair_iterations=removed),
    )


def mis_catalog(prior: float = 1.0) -> list:
    return [
        MeasuredSolver("mis/min-degree-greedy", "mis", mis_min_degree, prior),
        MeasuredSolver("mis/random-greedy", "mis", mis_random_greedy, prior),
        MeasuredSolver("mis/ratio-greedy", "mis", mis_ratio_greedy, prior),
        MeasuredSolver("mis/local-improvement", "mis", mis_local_improvement, prior),
    ]


def mds_catalog(prior: float = 1.0) -> list:
    return [
        MeasuredSolver("mds/high-degree-greedy", "mds", mds_high_degree, prior),
        MeasuredSolver("mds/marginal-gain-greedy", "mds", mds_marginal_gain, prior),
        MeasuredSolver("mds/redundancy-aware-greedy", "mds", mds_redundancy_aware, prior),
    ]
