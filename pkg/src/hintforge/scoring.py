"""Feasibility verification and normalized quality scoring.

Quality is scaled to [0, 1] with 1 = optimal: for maximization classes it is
value/optimum, for minimization classes optimum/value.  Infeasible or
malformed solutions score 0.  The optimal flag uses exact comparison for
integer objectives and relative tolerance 1e-9 for continuous LP objectives
and TSP tour lengths.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instances import (
    LP_TOL,
    CnfFormula,
    Graph,
    Instance,
    InstanceError,
    PackingLpInstance,
    Solution,
    SOLUTION_KIND,
    TspInstance,
    tour_length,
)

MAXIMIZATION = {"maxsat", "mis", "packing_lp", "mdkp"}
RELATIVE_TOL_CLASSES = {"packing_lp", "tsp"}


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class ScoredResult:
    feasible: bool
    raw_objective: float
    quality: float
    optimal: bool


def _check_shape(inst: Instance, sol: Solution) -> None:
    expected = SOLUTION_KIND[inst.problem_class]
    if not isinstance(sol, expected):
        raise InstanceError(
            f"solution {type(sol).__name__} does not match class {inst.problem_class}"
        )


def count_satisfied(f: CnfFormula, values) -> int:
    """Satisfied-clause count; duplicate clauses count separately."""
    sat = 0
    for clause in f.clauses:
        for lit in clause:
            if values[abs(lit) - 1] == (lit > 0):
                sat += 1
                break
    return sat


def verify(inst: Instance, sol: Solution) -> bool:
    """Feasibility indicator V(x, z)."""
    _check_shape(inst, sol)
    cls = inst.problem_class
    data = inst.data

    if cls == "coloring":
        g: Graph = data
        colors = sol.colors
        if len(colors) != g.n:
            return False
        return all(colors[u] != colors[v] for u, v in g.edges)

    if cls == "maxsat":
        return len(sol.values) == data.num_vars

    if cls == "mis":
        g = data
        verts = set(sol.vertices)
        if any(not (0 <= v < g.n) for v in verts):
            return False
        return all(not (u in verts and v in verts) for u, v in g.edges)

    if cls == "mds":
        g = data
        verts = set(sol.vertices)
        if any(not (0 <= v < g.n) for v in verts):
            return False
        dominated = set(verts)
        for u, v in g.edges:
            if u in verts:
                dominated.add(v)
            if v in verts:
                dominated.add(u)
        return len(dominated) == g.n

    if cls == "packing_lp":
        lp: PackingLpInstance = data
        frac = np.asarray(sol.fractions, dtype=float)
        if frac.shape != (lp.num_items,):
            return False
        if np.any(frac < -LP_TOL) or np.any(frac > 1 + LP_TOL):
            return False
        _, usage, caps = lp.arrays()
        return bool(np.all(usage.T @ frac <= caps + LP_TOL))

    if cls == "mdkp":
        lp = data
        picks = np.asarray(sol.picks, dtype=bool)
        if picks.shape != (lp.num_items,):
            return False
        _, usage, caps = lp.arrays()
        return bool(np.all(usage.T @ picks.astype(float) <= caps))

    if cls == "tsp":
        tsp: TspInstance = data
        order = sol.order
        return len(order) == tsp.n and sorted(order) == list(range(tsp.n))

    raise InstanceError(f"unknown class {cls}")


def raw_objective(inst: Instance, sol: Solution) -> float:
    """Objective in the class's native direction (colors used, clauses
    satisfied, set size, packed value, tour length)."""
    _check_shape(inst, sol)
    cls = inst.problem_class
    data = inst.data
    if cls == "coloring":
        return float(len(set(sol.colors)))
    if cls == "maxsat":
        return float(count_satisfied(data, sol.values))
    if cls in ("mis", "mds"):
        return float(len(sol.vertices))
    if cls == "packing_lp":
        values, _, _ = data.arrays()
        return float(values @ np.asarray(sol.fractions, dtype=float))
    if cls == "mdkp":
        values, _, _ = data.arrays()
        return float(values @ np.asarray(sol.picks, dtype=float))
    if cls == "tsp":
        return tour_length(data, sol.order)
    raise InstanceError(f"unknown class {cls}")


def quality(inst: Instance, sol: Solution) -> ScoredResult:
    """Normalized quality plus feasibility and optimality flags."""
    opt_value = inst.evaluator.optimum_value
    if opt_value <= 0:
        raise EvaluationError(f"nonpositive stored optimum for {inst.id}")
    feasible = verify(inst, sol)
    raw = raw_objective(inst, sol)
    if not feasible:
        return ScoredResult(False, raw, 0.0, False)
    if inst.problem_class in MAXIMIZATION:
        q = raw / opt_value
    else:
        if raw <= 0:
            return ScoredResult(True, raw, 0.0, False)
        q = opt_value / raw
    q = min(max(q, 0.0), 1.0)
    if inst.problem_class in RELATIVE_TOL_CLASSES:
        optimal = q >= 1.0 - LP_TOL
    else:
        optimal = q >= 1.0
    return ScoredResult(True, raw, q, optimal)


def optimality_rate(results) -> float:
    """Mean of per-instance optimal indicators."""
    results = list(results)
    if not results:
        raise EvaluationError("optimality_rate of empty result list")
    return sum(1.0 for r in results if r.optimal) / len(results)
