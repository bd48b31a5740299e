"""Coloring instance families.

Every family plants a proper k-coloring and embeds a k-clique whose vertices
take k distinct colors, so the chromatic number is exactly k and the planted
coloring is an optimal witness.
"""

from __future__ import annotations

from ..instances import Coloring, Graph


def _embed_clique(edge_set: set, colors: list, k: int) -> list:
    """Pick one vertex of each color and connect them pairwise."""
    reps = []
    for c in range(k):
        reps.append(next(v for v in range(len(colors)) if colors[v] == c))
    for i in range(k):
        for j in range(i + 1, k):
            a, b = reps[i], reps[j]
            edge_set.add((min(a, b), max(a, b)))
    return reps


def _finish(n: int, edge_set: set, colors: list, k: int, clique: list, extra_hidden=None):
    g = Graph(n, tuple(sorted(edge_set)))
    adj = g.adjacency()
    for u, v in g.edges:
        if colors[u] == colors[v]:
            raise AssertionError("planted coloring is not proper")
    for i, a in enumerate(clique):
        for b in clique[i + 1 :]:
            if b not in adj[a]:
                raise AssertionError("embedded clique is incomplete")
    hidden = {"numColors": k, "cliqueVertices": [int(v) for v in clique]}
    if extra_hidden:
        hidden.update(extra_hidden)
    return g, float(k), Coloring(tuple(colors)), "planted-certified", hidden


def ring_template(rng, profile: str):
    """Blocks of vertices arranged on a ring; edges stay local to a block or
    cross to the adjacent block."""
    if profile == "paper":
        blocks, block_size, k = 13, 13, 4
        p_in, p_ring = 0.6, 0.3
    else:
        blocks, block_size, k = 6, 3, 3
        p_in, p_ring = 0.8, 0.5
    n = blocks * block_size
    colors = [(b + i) % k for b in range(blocks) for i in range(block_size)]
    edge_set: set = set()
    for b in range(blocks):
        lo = b * block_size
        members = range(lo, lo + block_size)
        for u in members:
            for v in members:
                if u < v and colors[u] != colors[v] and rng.random() < p_in:
                    edge_set.add((u, v))
        nxt = ((b + 1) % blocks) * block_size
        for u in members:
            for v in range(nxt, nxt + block_size):
                if colors[u] != colors[v] and rng.random() < p_ring:
                    edge_set.add((min(u, v), max(u, v)))
    clique = _embed_clique(edge_set, colors, k)
    return _finish(n, edge_set, colors, k, clique, {"blocks": blocks})


def overlapping_palette(rng, profile: str):
    """Two communities sharing a band of vertices; colors drawn from one
    palette so the overlap couples the two sides."""
    if profile == "paper":
        side, overlap, k = 200, 60, 5
        p_in, p_cross = 0.08, 0.01
    else:
        side, overlap, k = 12, 4, 4
        p_in, p_cross = 0.5, 0.1
    n = 2 * side - overlap
    group_a = set(range(side))
    group_b = set(range(side - overlap, n))
    colors = [int(rng.integers(k)) for _ in range(n)]
    colors[:k] = range(k)  # guarantee every color is present
    edge_set: set = set()
    for u in range(n):
        for v in range(u + 1, n):
            if colors[u] == colors[v]:
                continue
            same = (u in group_a and v in group_a) or (u in group_b and v in group_b)
            if rng.random() < (p_in if same else p_cross):
                edge_set.add((u, v))
    clique = _embed_clique(edge_set, colors, k)
    return _finish(n, edge_set, colors, k, clique, {"overlap": overlap})


def separator_trap(rng, profile: str):
    """Two dense sides joined only through a thin separator band."""
    if profile == "paper":
        side, sep, k = 110, 18, 4
        p_side, p_sep = 0.10, 0.30
    else:
        side, sep, k = 10, 4, 3
        p_side, p_sep = 0.5, 0.6
    n = 2 * side + sep
    colors = [int(rng.integers(k)) for _ in range(n)]
    colors[:k] = range(k)
    side_a = range(side)
    side_b = range(side, 2 * side)
    separator = range(2 * side, n)
    edge_set: set = set()

    def sprinkle(block_u, block_v, p):
        for u in block_u:
            for v in block_v:
                if u < v and colors[u] != colors[v] and rng.random() < p:
                    edge_set.add((u, v))

    sprinkle(side_a, side_a, p_side)
    sprinkle(side_b, side_b, p_side)
    sprinkle(side_a, separator, p_sep)
    sprinkle(side_b, separator, p_sep)
    clique = _embed_clique(edge_set, colors, k)
    return _finish(n, edge_set, colors, k, clique, {"separatorSize": sep})
