"""Greedy coloring heuristics: DSATUR plus three ordering-based variants."""

from __future__ import annotations

from ..instances import Coloring, Graph, PublicInstance
from .base import DiagnosticTrace, MeasuredSolver


def _greedy_color(g: Graph, order) -> list:
    adj = g.adjacency()
    colors = [-1] * g.n
    for v in order:
        used = {colors[u] for u in adj[v] if colors[u] != -1}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return colors


def dsatur(public: PublicInstance, rng):
    g: Graph = public.data
    adj = g.adjacency()
    colors = [-1] * g.n
    sat = [set() for _ in range(g.n)]
    for _ in range(g.n):
        v = max(
            (u for u in range(g.n) if colors[u] == -1),
            key=lambda u: (len(sat[u]), len(adj[u]), -u),
        )
        c = 0
        while c in sat[v]:
            c += 1
        colors[v] = c
        for u in adj[v]:
            sat[u].add(c)
    return Coloring(tuple(colors)), DiagnosticTrace()


def greedy_largest_degree(public: PublicInstance, rng):
    g: Graph = public.data
    deg = [0] * g.n
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    order = sorted(range(g.n), key=lambda v: (-deg[v], v))
    return Coloring(tuple(_greedy_color(g, order))), DiagnosticTrace()


def greedy_random_order(public: PublicInstance, rng):
    g: Graph = public.data
    order = rng.permutation(g.n).tolist()
    return Coloring(tuple(_greedy_color(g, order))), DiagnosticTrace()


def greedy_smallest_last(public: PublicInstance, rng):
    g: Graph = public.data
    adj = g.adjacency()
    deg = {v: len(adj[v]) for v in range(g.n)}
    removed = set()
    order = []
    for _ in range(g.n):
        v = min((u for u in range(g.n) if u not in removed), key=lambda u: (deg[u], u))
        order.append(v)
        removed.add(v)
        for u in adj[v]:
            if u not in removed:
                deg[u] -= 1
    order.reverse()
    return Coloring(tuple(_greedy_color(g, order))), DiagnosticTrace()


def catalog(prior: float = 1.0) -> list:
    return [
        MeasuredSolver("coloring/dsatur", "coloring", dsatur, prior),
        MeasuredSolver("coloring/greedy-largest-degree", "coloring", greedy_largest_degree, prior),
        MeasuredSolver("coloring/greedy-random-order", "coloring", greedy_random_order, prior),
        MeasuredSolver("coloring/greedy-smallest-last", "coloring", greedy_smallest_last, prior),
    ]
