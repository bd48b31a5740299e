"""Packing LP and MDKP instance families.

LP families plant a binary primal solution together with a dual price
vector; capacities equal the planted usage exactly, planted values sit
strictly above their priced cost and decoy values strictly below, so LP
duality certifies the optimum.  MDKP families use integer data with a single
bottleneck resource: the planted set fills it exactly and every item's value
is at most ``density * bottleneck usage``, so the fractional single-resource
bound meets the planted value.
"""

from __future__ import annotations

import numpy as np

from ..instances import ItemFractions, ItemPicks, PackingLpInstance

PLANTED_MARKUP = 1.25
DECOY_MAX = 0.95


def _finish_lp(values, usage, caps, planted_mask, duals, hidden: dict):
    inst = PackingLpInstance(
        tuple(float(v) for v in values),
        tuple(tuple(float(u) for u in row) for row in usage),
        tuple(float(c) for c in caps),
    )
    v, u, b = inst.arrays()
    priced = u @ np.asarray(duals)
    if not np.allclose(u[planted_mask].sum(axis=0), b):
        raise AssertionError("planted usage must fill every capacity exactly")
    if np.any(v[planted_mask] < priced[planted_mask] - 1e-12):
        raise AssertionError("planted values must cover their priced cost")
    if np.any(v[~planted_mask] > priced[~planted_mask] + 1e-12):
        raise AssertionError("decoy values must stay below their priced cost")
    optimum = float(v[planted_mask].sum())
    sol = ItemFractions(tuple(1.0 if m else 0.0 for m in planted_mask))
    hidden = dict(hidden)
    hidden["dualPrices"] = [float(y) for y in duals]
    hidden["plantedItems"] = [int(i) for i in np.nonzero(planted_mask)[0]]
    return inst, optimum, sol, "planted-certified", hidden


def _lp_family(rng, num_items, num_resources, num_planted, usage_fn, hidden):
    usage = np.zeros((num_items, num_resources))
    for i in range(num_items):
        usage[i] = usage_fn(rng, i)
    planted_mask = np.zeros(num_items, dtype=bool)
    planted_mask[rng.choice(num_items, size=num_planted, replace=False)] = True
    # Every planted item needs some usage; every resource needs planted load.
    planted_idx = np.nonzero(planted_mask)[0]
    for r, i in zip(range(num_resources), planted_idx):
        usage[i, r] += 0.5
    caps = usage[planted_mask].sum(axis=0)
    duals = rng.uniform(0.5, 1.5, size=num_resources)
    priced = usage @ duals
    values = np.where(
        planted_mask,
        priced * PLANTED_MARKUP,
        priced * rng.uniform(0.5, DECOY_MAX, size=num_items),
    )
    return _finish_lp(values, usage, caps, planted_mask, duals, hidden)


def _paper_or_desk_lp(profile: str):
    if profile == "paper":
        return 1200, 40, 300
    return 30, 5, 10


def lp_block_coupled(rng, profile: str):
    """Resources fall into blocks; items load their own block plus one
    shared coupling resource."""
    num_items, num_resources, num_planted = _paper_or_desk_lp(profile)
    blocks = 4
    per_block = num_resources // blocks

    def usage_fn(rng, i):
        row = np.zeros(num_resources)
        b = i % blocks
        lo = b * per_block
        row[lo : lo + per_block] = rng.uniform(0.0, 1.0, size=per_block)
        row[0] += rng.uniform(0.0, 0.3)  # coupling resource
        return row

    return _lp_family(
        rng, num_items, num_resources, num_planted, usage_fn, {"blocks": blocks}
    )


def lp_active_resource(rng, profile: str):
    """A handful of heavily contended resources; the rest barely load."""
    num_items, num_resources, num_planted = _paper_or_desk_lp(profile)
    active = max(2, num_resources // 8)

    def usage_fn(rng, i):
        row = rng.uniform(0.0, 0.05, size=num_resources)
        row[:active] = rng.uniform(0.2, 1.0, size=active)
        return row

    return _lp_family(
        rng, num_items, num_resources, num_planted, usage_fn, {"activeResources": active}
    )


def lp_single_bottleneck(rng, profile: str):
    """One resource dominates; every item draws on it."""
    num_items, num_resources, num_planted = _paper_or_desk_lp(profile)

    def usage_fn(rng, i):
        row = rng.uniform(0.0, 0.05, size=num_resources)
        row[0] = rng.uniform(0.5, 1.5)
        return row

    return _lp_family(rng, num_items, num_resources, num_planted, usage_fn, {})


# ---------------------------------------------------------------------------
# MDKP


def _finish_mdkp(values, usage, caps, planted_mask, density, hidden: dict):
    inst = PackingLpInstance(
        tuple(int(v) for v in values),
        tuple(tuple(int(u) for u in row) for row in usage),
        tuple(int(c) for c in caps),
    )
    v, u, b = inst.arrays()
    if int(u[planted_mask, 0].sum()) != int(b[0]):
        raise AssertionError("planted set must fill the bottleneck exactly")
    if np.any(u[planted_mask].sum(axis=0) > b):
        raise AssertionError("planted set must respect every capacity")
    if np.any(v > density * u[:, 0] + 1e-9):
        raise AssertionError("value density must never exceed the planted density")
    optimum = float(v[planted_mask].sum())
    if optimum != density * float(b[0]):
        raise AssertionError("planted value must meet the fractional bound")
    sol = ItemPicks(tuple(bool(m) for m in planted_mask))
    hidden = dict(hidden)
    hidden["density"] = density
    hidden["plantedItems"] = [int(i) for i in np.nonzero(planted_mask)[0]]
    return inst, optimum, sol, "planted-certified", hidden


def _mdkp_base(rng, num_items, num_resources, num_planted, density=10):
    """Shared scaffold: integer usage, exact bottleneck fill, slack elsewhere."""
    usage = rng.integers(1, 20, size=(num_items, num_resources)).astype(np.int64)
    planted_mask = np.zeros(num_items, dtype=bool)
    planted_mask[rng.choice(num_items, size=num_planted, replace=False)] = True
    caps = np.zeros(num_resources, dtype=np.int64)
    caps[0] = usage[planted_mask, 0].sum()
    planted_load = usage[planted_mask, 1:].sum(axis=0)
    caps[1:] = planted_load + planted_load // 2 + 5
    values = np.where(
        planted_mask,
        density * usage[:, 0],
        np.floor(density * usage[:, 0] * rng.uniform(0.4, 0.9, size=num_items)),
    ).astype(np.int64)
    return values, usage, caps, planted_mask


def mdkp_decoy_complement(rng, profile: str):
    """Each planted item has a decoy twin: same bottleneck draw, slightly
    lower value, featherweight elsewhere, so naive density favors the decoy."""
    if profile == "paper":
        num_items, num_resources, num_planted, density = 1040, 48, 200, 10
    else:
        num_items, num_resources, num_planted, density = 18, 4, 6, 10
    values, usage, caps, planted_mask = _mdkp_base(
        rng, num_items, num_resources, num_planted, density
    )
    planted_idx = np.nonzero(planted_mask)[0]
    decoy_pool = np.nonzero(~planted_mask)[0]
    twins = rng.choice(decoy_pool, size=min(len(planted_idx), len(decoy_pool)), replace=False)
    for p, t in zip(planted_idx, twins):
        usage[t, 0] = usage[p, 0]
        usage[t, 1:] = 1
        values[t] = max(1, density * usage[t, 0] - 1)
    return _finish_mdkp(
        values, usage, caps, planted_mask, density, {"decoys": [int(t) for t in twins]}
    )


def mdkp_latent_class(rng, profile: str):
    """Items belong to latent classes; only one class carries full density."""
    if profile == "paper":
        num_items, num_resources, num_planted, density = 520, 32, 120, 10
    else:
        num_items, num_resources, num_planted, density = 18, 4, 6, 10
    values, usage, caps, planted_mask = _mdkp_base(
        rng, num_items, num_resources, num_planted, density
    )
    classes = rng.integers(0, 4, size=num_items)
    values = np.where(
        planted_mask, values, np.maximum(1, values - 2 * classes)
    ).astype(np.int64)
    return _finish_mdkp(
        values, usage, caps, planted_mask, density, {"numClasses": 4}
    )


def mdkp_single_resource(rng, profile: str):
    """Only the bottleneck binds; the other capacities are generous."""
    if profile == "paper":
        num_items, num_resources, num_planted, density = 1040, 48, 260, 10
    else:
        num_items, num_resources, num_planted, density = 18, 4, 6, 10
    values, usage, caps, planted_mask = _mdkp_base(
        rng, num_items, num_resources, num_planted, density
    )
    usage[:, 1:] = np.minimum(usage[:, 1:], 2)
    caps[1:] = int(usage[:, 1:].sum(axis=0).max()) + 1
    return _finish_mdkp(values, usage, caps, planted_mask, density, {})
