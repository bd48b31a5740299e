"""MIS and MDS instance families.

MIS families carry a clique-cover certificate: vertices partition into
cliques, the planted set takes one vertex per clique, and cross-clique edges
never join two planted vertices.  MDS families carry a 2-packing
certificate: planted hubs have pairwise disjoint closed neighborhoods and
dominate every vertex, so no smaller dominating set exists.
"""

from __future__ import annotations

from ..instances import Graph, VertexSet


# ---------------------------------------------------------------------------
# MIS helpers


def _clique_edges(parts) -> set:
    edge_set: set = set()
    for part in parts:
        for i in range(len(part)):
            for j in range(i + 1, len(part)):
                a, b = part[i], part[j]
                edge_set.add((min(a, b), max(a, b)))
    return edge_set


def _finish_mis(n: int, parts, edge_set: set, planted, hidden: dict):
    g = Graph(n, tuple(sorted(edge_set)))
    adj = g.adjacency()
    covered = sorted(v for part in parts for v in part)
    if covered != list(range(n)):
        raise AssertionError("clique cover must partition the vertices")
    planted_set = set(planted)
    for v in planted_set:
        if adj[v] & planted_set:
            raise AssertionError("planted set is not independent")
    hidden = dict(hidden)
    hidden["cliqueCover"] = [sorted(int(v) for v in part) for part in parts]
    return (
        g,
        float(len(parts)),
        VertexSet(tuple(sorted(planted))),
        "planted-certified",
        hidden,
    )


def mis_clique_path(rng, profile: str):
    """Cliques chained along a path with random bridges between neighbors."""
    if profile == "paper":
        num_cliques, size, bridges = 38, 5, 6
    else:
        num_cliques, size, bridges = 6, 4, 3
    n = num_cliques * size
    parts = [list(range(c * size, (c + 1) * size)) for c in range(num_cliques)]
    planted = [part[int(rng.integers(size))] for part in parts]
    edge_set = _clique_edges(parts)
    for c in range(num_cliques - 1):
        for _ in range(bridges):
            u = parts[c][int(rng.integers(size))]
            v = parts[c + 1][int(rng.integers(size))]
            if u == planted[c] and v == planted[c + 1]:
                continue
            edge_set.add((min(u, v), max(u, v)))
    return _finish_mis(n, parts, edge_set, planted, {"cliqueSize": size})


def mis_core_fringe_trap(rng, profile: str):
    """A large core clique with many fringe pairs attached; degree-hungry
    heuristics waste their budget inside the core."""
    if profile == "paper":
        core, pairs, attach = 200, 400, 3
    else:
        core, pairs, attach = 8, 8, 2
    n = core + 2 * pairs
    parts = [list(range(core))]
    for p in range(pairs):
        parts.append([core + 2 * p, core + 2 * p + 1])
    planted = [0] + [core + 2 * p for p in range(pairs)]
    edge_set = _clique_edges(parts)
    for p in range(pairs):
        for member in (core + 2 * p, core + 2 * p + 1):
            # Bridges land on non-planted core vertices only.
            for _ in range(attach):
                u = 1 + int(rng.integers(core - 1))
                edge_set.add((u, member))
    return _finish_mis(n, parts, edge_set, planted, {"coreSize": core})


def mis_motif_bridge(rng, profile: str):
    """Triangles linked by random bridges between motif pairs."""
    if profile == "paper":
        num_tris, extra = 65, 120
    else:
        num_tris, extra = 8, 10
    n = num_tris * 3
    parts = [list(range(t * 3, (t + 1) * 3)) for t in range(num_tris)]
    planted = [part[int(rng.integers(3))] for part in parts]
    edge_set = _clique_edges(parts)
    added = 0
    while added < extra:
        a, b = int(rng.integers(num_tris)), int(rng.integers(num_tris))
        if a == b:
            continue
        u = parts[a][int(rng.integers(3))]
        v = parts[b][int(rng.integers(3))]
        if u == planted[a] and v == planted[b]:
            continue
        edge_set.add((min(u, v), max(u, v)))
        added += 1
    return _finish_mis(n, parts, edge_set, planted, {"motifCount": num_tris})


# ---------------------------------------------------------------------------
# MDS helpers


def _finish_mds(n: int, hubs, members, edge_set: set, hidden: dict):
    g = Graph(n, tuple(sorted(edge_set)))
    adj = g.adjacency()
    hub_set = set(hubs)
    dominated = set()
    for h in hubs:
        dominated.add(h)
        dominated |= adj[h]
    if len(dominated) != n:
        raise AssertionError("planted hubs do not dominate the graph")
    closed_seen: set = set()
    for h in hubs:
        closed = {h} | adj[h]
        if closed & closed_seen:
            raise AssertionError("hub closed neighborhoods overlap")
        closed_seen |= closed
    for u, v in g.edges:
        if u in hub_set and v in hub_set:
            raise AssertionError("hubs must not be adjacent")
    hidden = dict(hidden)
    hidden["hubs"] = [int(h) for h in hubs]
    return (
        g,
        float(len(hubs)),
        VertexSet(tuple(sorted(hubs))),
        "planted-certified",
        hidden,
    )


def _cluster_layout(num_clusters: int, cluster_size: int):
    """Hub is the first vertex of each cluster, the rest are members."""
    hubs, members, parts = [], [], []
    for c in range(num_clusters):
        lo = c * cluster_size
        hubs.append(lo)
        mem = list(range(lo + 1, lo + cluster_size))
        members.append(mem)
        parts.append([lo] + mem)
    return hubs, members


def _hub_star_edges(hubs, members) -> set:
    edge_set: set = set()
    for h, mem in zip(hubs, members):
        for v in mem:
            edge_set.add((min(h, v), max(h, v)))
    return edge_set


def mds_gateway_hub(rng, profile: str):
    """Clusters linked through designated gateway members of adjacent
    clusters; only members carry cross-cluster edges."""
    if profile == "paper":
        num_clusters, size, gateways = 200, 14, 3
    else:
        num_clusters, size, gateways = 4, 6, 2
    n = num_clusters * size
    hubs, members = _cluster_layout(num_clusters, size)
    edge_set = _hub_star_edges(hubs, members)
    for c in range(num_clusters - 1):
        for _ in range(gateways):
            u = members[c][int(rng.integers(len(members[c])))]
            v = members[c + 1][int(rng.integers(len(members[c + 1])))]
            edge_set.add((min(u, v), max(u, v)))
    return _finish_mds(n, hubs, members, edge_set, {"clusterSize": size})


def mds_geometric_anchor(rng, profile: str):
    """Clusters anchored on a grid; nearby members of neighboring anchors
    get geometric bridge edges."""
    if profile == "paper":
        grid, size = 10, 16  # 100 anchors
    else:
        grid, size = 2, 6
    num_clusters = grid * grid
    n = num_clusters * size
    hubs, members = _cluster_layout(num_clusters, size)
    edge_set = _hub_star_edges(hubs, members)
    for gx in range(grid):
        for gy in range(grid):
            c = gx * grid + gy
            for dx, dy in ((1, 0), (0, 1)):
                nx, ny = gx + dx, gy + dy
                if nx >= grid or ny >= grid:
                    continue
                c2 = nx * grid + ny
                pairs = 1 + int(rng.integers(3))
                for _ in range(pairs):
                    u = members[c][int(rng.integers(len(members[c])))]
                    v = members[c2][int(rng.integers(len(members[c2])))]
                    edge_set.add((min(u, v), max(u, v)))
    return _finish_mds(n, hubs, members, edge_set, {"grid": grid})


def mds_star_kernel(rng, profile: str):
    """Stars whose leaves form a sparse kernel of intra-cluster edges."""
    if profile == "paper":
        num_clusters, size, kernel_edges = 140, 20, 8
    else:
        num_clusters, size, kernel_edges = 4, 6, 3
    n = num_clusters * size
    hubs, members = _cluster_layout(num_clusters, size)
    edge_set = _hub_star_edges(hubs, members)
    for mem in members:
        for _ in range(kernel_edges):
            u = mem[int(rng.integers(len(mem)))]
            v = mem[int(rng.integers(len(mem)))]
            if u != v:
                edge_set.add((min(u, v), max(u, v)))
    # A light sprinkle of member-member bridges between random clusters.
    for c in range(num_clusters - 1):
        u = members[c][int(rng.integers(len(members[c])))]
        v = members[c + 1][int(rng.integers(len(members[c + 1])))]
        edge_set.add((min(u, v), max(u, v)))
    result = _finish_mds(n, hubs, members, edge_set, {"clusterSize": size})
    g = result[0]
    adj = g.adjacency()
    for h, mem in zip(hubs, members):
        if len(adj[h] & set(mem)) < 0.8 * len(mem):
            raise AssertionError("star hub must touch at least 80% of its cluster")
    return result
