"""Packing LP and MDKP baselines."""

from __future__ import annotations

import logging

import numpy as np

from ..instances import ItemFractions, ItemPicks, PackingLpInstance, PublicInstance
from ..oracles import BudgetExceededError, OracleBudget, exact_lp
from .base import DiagnosticTrace, MeasuredSolver

log = logging.getLogger(__name__)

LP_ROUNDING_MAX_ITEMS = 400
LP_ROUNDING_MAX_RESOURCES = 64


def _density(values: np.ndarray, usage: np.ndarray, caps: np.ndarray) -> np.ndarray:
    # Value per unit of capacity-normalized usage; small epsilon guards
    # zero-usage items (which are free and sort first).
    load = (usage / caps[None, :]).max(axis=1)
    return values / np.maximum(load, 1e-12)


def lp_density_greedy(public: PublicInstance, rng):
    """Fill items fractionally in density order until a resource binds."""
    lp: PackingLpInstance = public.data
    values, usage, caps = lp.arrays()
    order = np.argsort(-_density(values, usage, caps))
    frac = np.zeros(lp.num_items)
    remaining = caps.copy()
    for i in order:
        row = usage[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            limits = np.where(row > 0, remaining / np.maximum(row, 1e-300), np.inf)
        take = float(min(1.0, limits.min()))
        if take <= 0:
            continue
        frac[i] = take
        remaining -= take * row
        remaining = np.maximum(remaining, 0.0)
    return ItemFractions(tuple(float(v) for v in frac)), DiagnosticTrace()


def lp_uniform_fraction(public: PublicInstance, rng):
    """Single shared fraction t for every item, as large as feasible."""
    lp: PackingLpInstance = public.data
    _, usage, caps = lp.arrays()
    totals = usage.sum(axis=0)
    with np.errstate(divide="ignore"):
        t = float(min(1.0, np.min(np.where(totals > 0, caps / np.maximum(totals, 1e-300), np.inf))))
    return ItemFractions((t,) * lp.num_items), DiagnosticTrace()


def mdkp_density_greedy(public: PublicInstance, rng):
    lp: PackingLpInstance = public.data
    values, usage, caps = lp.arrays()
    order = np.argsort(-_density(values, usage, caps))
    picks = np.zeros(lp.num_items, dtype=bool)
    remaining = caps.copy()
    for i in order:
        if np.all(usage[i] <= remaining):
            picks[i] = True
            remaining -= usage[i]
    return ItemPicks(tuple(bool(b) for b in picks)), DiagnosticTrace()


def mdkp_redundancy_greedy(public: PublicInstance, rng, max_passes: int = 5):
    """Density greedy plus drop-one/add-better improvement passes."""
    lp: PackingLpInstance = public.data
    values, usage, caps = lp.arrays()
    picks, _ = mdkp_density_greedy(public, rng)
    chosen = np.asarray(picks.picks, dtype=bool)
    remaining = caps - usage[chosen].sum(axis=0)
    passes = 0
    for _ in range(max_passes):
        improved = False
        for i in np.nonzero(chosen)[0]:
            freed = remaining + usage[i]
            # Best single replacement with higher value.
            best_j = -1
            for j in np.nonzero(~chosen)[0]:
                if values[j] > values[i] and np.all(usage[j] <= freed):
                    if best_j < 0 or values[j] > values[best_j]:
                        best_j = j
            if best_j >= 0:
                chosen[i] = False
                chosen[best_j] = True
                remaining = freed - usage[best_j]
                improved = True
        # Fill any residual capacity.
        for j in np.argsort(-values):
            if not chosen[j] and np.all(usage[j] <= remaining):
                chosen[j] = True
                remaining -= usage[j]
                improved = True
        passes += 1
        if not improved:
            break
    return ItemPicks(tuple(bool(b) for b in chosen)), DiagnosticTrace(repair_iterations=passes)


def mdkp_lp_rounding(public: PublicInstance, rng):
    """Round the in-repo LP relaxation; falls back to density greedy when
    the instance exceeds the LP routine's practical size."""
    lp: PackingLpInstance = public.data
    if (
        lp.num_items > LP_ROUNDING_MAX_ITEMS
        or lp.num_resources > LP_ROUNDING_MAX_RESOURCES
    ):
        log.info(
            "mdkp/lp-rounding: instance %dx%d exceeds LP budget, using density greedy",
            lp.num_items,
            lp.num_resources,
        )
        sol, _ = mdkp_density_greedy(public, rng)
        return sol, DiagnosticTrace(fallback_used=True)
    try:
        _, fractions = exact_lp(lp, OracleBudget(max_seconds=5.0))
    except BudgetExceededError:
        log.info("mdkp/lp-rounding: LP budget exceeded, using density greedy")
        sol, _ = mdkp_density_greedy(public, rng)
        return sol, DiagnosticTrace(fallback_used=True)
    values, usage, caps = lp.arrays()
    frac = np.asarray(fractions.fractions)
    picks = np.zeros(lp.num_items, dtype=bool)
    remaining = caps.copy()
    for i in np.argsort(-frac * values):
        if frac[i] > 0 and np.all(usage[i] <= remaining):
            picks[i] = True
            remaining -= usage[i]
    return ItemPicks(tuple(bool(b) for b in picks)), DiagnosticTrace(shortcut_used=True)


def lp_catalog(prior: float = 1.0) -> list:
    return [
        MeasuredSolver("packing_lp/density-greedy", "packing_lp", lp_density_greedy, prior),
        MeasuredSolver("packing_lp/uniform-fraction", "packing_lp", lp_uniform_fraction, prior),
    ]


def mdkp_catalog(prior: float = 1.0) -> list:
    return [
        MeasuredSolver("mdkp/value-density-greedy", "mdkp", mdkp_density_greedy, prior),
        MeasuredSolver("mdkp/redundancy-improved-greedy", "mdkp", mdkp_redundancy_greedy, prior),
        MeasuredSolver("mdkp/lp-rounding", "mdkp", mdkp_lp_rounding, prior),
    ]
