"""TSP instance families.

Tours over planted geometric structure.  The reference tour follows the
construction (polished with 2-opt) and its length is stored as the target
value; unlike the other classes this witness is planted but not certified
optimal, which the evaluator records explicitly.
"""

from __future__ import annotations

import math

import numpy as np

from ..instances import Tour, TspInstance, tour_length
from ..heuristics.tsp import two_opt


def _finish_tsp(coords, order, hidden: dict):
    inst = TspInstance(tuple((float(x), float(y)) for x, y in coords))
    order, _ = two_opt(inst.distance_matrix(), list(order))
    if sorted(order) != list(range(inst.n)):
        raise AssertionError("reference tour must be a permutation")
    return (
        inst,
        float(tour_length(inst, order)),
        Tour(tuple(int(v) for v in order)),
        "planted-uncertified",
        hidden,
    )


def tsp_clustered_euclidean(rng, profile: str):
    """Tight clusters placed on a large circle; the reference tour walks the
    circle and sweeps each cluster by angle."""
    if profile == "paper":
        clusters, per_cluster, radius, spread = 8, 15, 100.0, 4.0
    else:
        clusters, per_cluster, radius, spread = 5, 2, 100.0, 2.0
    coords = []
    order = []
    for c in range(clusters):
        ang = 2 * math.pi * c / clusters
        cx, cy = radius * math.cos(ang), radius * math.sin(ang)
        pts = [
            (cx + float(rng.uniform(-spread, spread)), cy + float(rng.uniform(-spread, spread)))
            for _ in range(per_cluster)
        ]
        base = len(coords)
        local = sorted(
            range(per_cluster),
            key=lambda i: math.atan2(pts[i][1] - cy, pts[i][0] - cx),
        )
        order.extend(base + i for i in local)
        coords.extend(pts)
    return _finish_tsp(coords, order, {"clusters": clusters})


def tsp_latent_metric(rng, profile: str):
    """Points sampled along a noisy closed curve; the latent parameter gives
    the reference order."""
    n = 120 if profile == "paper" else 10
    ts = np.sort(rng.uniform(0.0, 1.0, size=n))
    coords = []
    for t in ts:
        ang = 2 * math.pi * t
        r = 80.0 + 20.0 * math.sin(3 * ang)
        coords.append(
            (
                r * math.cos(ang) + float(rng.normal(0, 1.0)),
                r * math.sin(ang) + float(rng.normal(0, 1.0)),
            )
        )
    return _finish_tsp(coords, list(range(n)), {"curve": "trefoil-radius"})


def tsp_paired_ribbon_zigzag(rng, profile: str):
    """Two parallel rails of paired points; the reference tour runs out along
    one rail and back along the other."""
    pairs = 160 if profile == "paper" else 6
    gap = 0.4
    coords = []
    for p in range(pairs):
        x = float(p) + float(rng.uniform(-0.05, 0.05))
        coords.append((x, 0.0))
        coords.append((x, gap))
    rail_a = [2 * p for p in range(pairs)]
    rail_b = [2 * p + 1 for p in reversed(range(pairs))]
    ys = {y for _, y in coords}
    if len(ys) != 2:
        raise AssertionError("ribbon must consist of exactly two rails")
    return _finish_tsp(coords, rail_a + rail_b, {"pairs": pairs, "railGap": gap})
