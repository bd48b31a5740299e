"""TSP construction heuristics and 2-opt local search."""

from __future__ import annotations

import numpy as np

from ..instances import PublicInstance, Tour, TspInstance, tour_length
from .base import DiagnosticTrace, MeasuredSolver


def _dist(public: PublicInstance) -> np.ndarray:
    tsp: TspInstance = public.data
    return tsp.distance_matrix()


def _nearest_neighbor_order(dist: np.ndarray, start: int = 0) -> list:
    n = dist.shape[0]
    unvisited = set(range(n))
    unvisited.discard(start)
    order = [start]
    cur = start
    while unvisited:
        nxt = min(unvisited, key=lambda j: (dist[cur, j], j))
        order.append(nxt)
        unvisited.discard(nxt)
        cur = nxt
    return order


def _insertion_order(dist: np.ndarray, farthest: bool) -> list:
    n = dist.shape[0]
    if n <= 3:
        return list(range(n))
    a, b = 0, int(np.argmax(dist[0])) if farthest else int(np.argmin(np.where(dist[0] > 0, dist[0], np.inf)))
    tour = [a, b]
    remaining = [v for v in range(n) if v not in tour]
    while remaining:
        dist_to_tour = {v: min(dist[v, t] for t in tour) for v in remaining}
        if farthest:
            v = max(remaining, key=lambda u: (dist_to_tour[u], -u))
        else:
            v = min(remaining, key=lambda u: (dist_to_tour[u], u))
        # Insert at the position of least length increase.
        best_pos, best_inc = 0, np.inf
        for i in range(len(tour)):
            p, q = tour[i], tour[(i + 1) % len(tour)]
            inc = dist[p, v] + dist[v, q] - dist[p, q]
            if inc < best_inc:
                best_inc, best_pos = inc, i + 1
        tour.insert(best_pos, v)
        remaining.remove(v)
    return tour


def two_opt(dist: np.ndarray, order: list, max_passes: int = 50):
    """First-improvement 2-opt; never increases tour length.

    Returns the improved order and the number of improvement passes.
    """
    n = len(order)
    order = list(order)
    passes = 0
    for _ in range(max_passes):
        improved = False
        for i in range(n - 1):
            a, b = order[i], order[i + 1]
            for j in range(i + 2, n):
                c, d = order[j], order[(j + 1) % n]
                if a == d:
                    continue
                delta = dist[a, c] + dist[b, d] - dist[a, b] - dist[c, d]
                if delta < -1e-12:
                    order[i + 1 : j + 1] = reversed(order[i + 1 : j + 1])
                    improved = True
                    a, b = order[i], order[i + 1]
        passes += 1
        if not improved:
            break
    return order, passes


def random_tour(public: PublicInstance, rng):
    n = public.data.n
    return Tour(tuple(int(v) for v in rng.permutation(n))), DiagnosticTrace()


def nearest_neighbor(public: PublicInstance, rng):
    dist = _dist(public)
    return Tour(tuple(_nearest_neighbor_order(dist))), DiagnosticTrace()


def nearest_insertion(public: PublicInstance, rng):
    dist = _dist(public)
    return Tour(tuple(_insertion_order(dist, farthest=False))), DiagnosticTrace()


def farthest_insertion(public: PublicInstance, rng):
    dist = _dist(public)
    return Tour(tuple(_insertion_order(dist, farthest=True))), DiagnosticTrace()


def multistart_two_opt(public: PublicInstance, rng, starts: int = 4):
    tsp: TspInstance = public.data
    dist = _dist(public)
    best_order, best_len, total_passes = None, np.inf, 0
    for _ in range(starts):
        order = [int(v) for v in rng.permutation(tsp.n)]
        order, passes = two_opt(dist, order)
        total_passes += passes
        length = tour_length(tsp, order)
        if length < best_len:
            best_len, best_order = length, order
    return Tour(tuple(best_order)), DiagnosticTrace(repair_iterations=total_passes)


def nn_two_opt(public: PublicInstance, rng):
    dist = _dist(public)
    order, passes = two_opt(dist, _nearest_neighbor_order(dist))
    return Tour(tuple(order)), DiagnosticTrace(repair_iterations=passes)


def fi_two_opt(public: PublicInstance, rng):
    dist = _dist(public)
    order, passes = two_opt(dist, _insertion_order(dist, farthest=True))
    return Tour(tuple(order)), DiagnosticTrace(repair_iterations=passes)


def catalog(prior: float = 1.0) -> list:
    return [
        MeasuredSolver("tsp/random-tour", "tsp", random_tour, prior),
        MeasuredSolver("tsp/nearest-neighbor", "tsp", nearest_neighbor, prior),
        MeasuredSolver("tsp/nearest-insertion", "tsp", nearest_insertion, prior),
        MeasuredSolver("tsp/farthest-insertion", "tsp", farthest_insertion, prior),
        MeasuredSolver("tsp/multistart-2opt", "tsp", multistart_two_opt, prior),
        MeasuredSolver("tsp/nn-2opt", "tsp", nn_two_opt, prior),
        MeasuredSolver("tsp/fi-2opt", "tsp", fi_two_opt, prior),
    ]
