"""Benchmark harness: repeats, aggregation, speedups, diagnostics, and the
perturbation ablation.

Per-target numbers come from the test split, averaged over repeated runs.
Quality, optimality, feasibility, and quality lifts aggregate across targets
by arithmetic mean; runtime speedups aggregate by geometric mean, with every
heuristic runtime clipped at 10,000 ms before entering any ratio.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .heuristics.base import MeasuredSolver, run_measured
from .instances import relabel_graph

DEFAULT_CLIP_MS = 10_000.0
QUALITY_CHANGE_TOL = 1e-12
_MIN_RATIO_MS = 1e-6  # guard for runtime ratios on very fast solves


class HarnessError(RuntimeError):
    pass


def clip_runtime(runtime_ms: float, clip_ms: float = DEFAULT_CLIP_MS) -> float:
    """Ceiling applied to runtimes before any speedup ratio."""
    return min(runtime_ms, clip_ms)


def geometric_mean(ratios) -> float:
    ratios = list(ratios)
    if not ratios:
        raise HarnessError("geometric mean of empty sequence")
    if any(r <= 0 for r in ratios):
        raise HarnessError("ratios must be positive")
    return math.exp(sum(math.log(r) for r in ratios) / len(ratios))


def _mean(xs) -> float:
    xs = list(xs)
    if not xs:
        raise HarnessError("mean of empty sequence")
    return sum(xs) / len(xs)


@dataclass(frozen=True)
class SolverCell:
    solver_id: str
    mean_quality: float
    optimality_rate: float
    feasibility_rate: float
    mean_runtime_ms: float
    clipped_runtime_ms: float
    diagnostics: dict
    per_instance: tuple = field(repr=False, default=())

    def as_dict(self) -> dict:
        return {
            "solverId": self.solver_id,
            "meanQuality": self.mean_quality,
            "optimalityRate": self.optimality_rate,
            "feasibilityRate": self.feasibility_rate,
            "meanRuntimeMs": self.mean_runtime_ms,
            "clippedRuntimeMs": self.clipped_runtime_ms,
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class EvalReport:
    per_target: dict  # target id -> {solver id -> SolverCell}
    lifts: dict  # target id -> {"deltaQAvg": .., "deltaQBest": .., "speedup": ..}
    aggregates: dict
    config: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "perTarget": {
                    t: {s: cell.as_dict() for s, cell in cells.items()}
                    for t, cells in self.per_target.items()
                },
                "lifts": self.lifts,
                "aggregates": self.aggregates,
                "config": self.config,
            },
            sort_keys=True,
            indent=2,
        )

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(
            [
                "target",
                "solver",
                "meanQuality",
                "optimalityRate",
                "feasibilityRate",
                "meanRuntimeMs",
                "clippedRuntimeMs",
            ]
        )
        for target in sorted(self.per_target):
            for solver_id in sorted(self.per_target[target]):
                cell = self.per_target[target][solver_id]
                writer.writerow(
                    [
                        target,
                        solver_id,
                        f"{cell.mean_quality:.6f}",
                        f"{cell.optimality_rate:.6f}",
                        f"{cell.feasibility_rate:.6f}",
                        f"{cell.mean_runtime_ms:.3f}",
                        f"{cell.clipped_runtime_ms:.3f}",
                    ]
                )
        return out.getvalue()


def evaluate_solver_on_target(
    solver: MeasuredSolver,
    instances,
    repeats: int = 10,
    clip_ms: float = DEFAULT_CLIP_MS,
    seed: int = 0,
) -> SolverCell:
    """Repeat-averaged test-split metrics for one solver."""
    instances = list(instances)
    if not instances:
        raise HarnessError("target has no instances")
    if repeats < 1:
        raise HarnessError("repeats must be at least 1")
    qualities, optimals, feasibles, runtimes = [], [], [], []
    traces = []
    logs = []
    for inst in instances:
        inst_q, inst_o, inst_f, inst_t = [], [], [], []
        for rep in range(repeats):
            m = run_measured(solver, inst, dataset_seed=seed * repeats + rep)
            inst_q.append(m.scored.quality)
            inst_o.append(1.0 if m.scored.optimal else 0.0)
            inst_f.append(1.0 if m.scored.feasible else 0.0)
            inst_t.append(m.wall_clock_ms)
            traces.append(m.trace)
        qualities.append(_mean(inst_q))
        optimals.append(_mean(inst_o))
        feasibles.append(_mean(inst_f))
        runtimes.append(_mean(inst_t))
        logs.append((inst.id, qualities[-1], optimals[-1], runtimes[-1]))
    mean_rt = _mean(runtimes)
    return SolverCell(
        solver_id=solver.id,
        mean_quality=_mean(qualities),
        optimality_rate=_mean(optimals),
        feasibility_rate=_mean(feasibles),
        mean_runtime_ms=mean_rt,
        clipped_runtime_ms=clip_runtime(mean_rt, clip_ms),
        diagnostics=_trace_rates(traces),
        per_instance=tuple(logs),
    )


def _trace_rates(traces) -> dict:
    traces = list(traces)
    if not traces:
        return {}
    n = len(traces)
    return {
        "shortcutRate": sum(1.0 for t in traces if t.shortcut_used) / n,
        "fallbackRate": sum(1.0 for t in traces if t.fallback_used) / n,
        "meanResidualSize": sum(t.residual_size for t in traces) / n,
        "meanRepairIterations": sum(t.repair_iterations for t in traces) / n,
    }


def _best_heuristic(cells: dict, pool_ids) -> SolverCell:
    # Best by quality, ties by optimality then (smaller) runtime.
    return max(
        (cells[s] for s in pool_ids),
        key=lambda c: (c.mean_quality, c.optimality_rate, -c.mean_runtime_ms),
    )


def run_benchmark(
    targets: dict,
    solver_pools: dict,
    method_solvers: Optional[dict] = None,
    repeats: int = 10,
    clip_ms: float = DEFAULT_CLIP_MS,
    seed: int = 0,
) -> EvalReport:
    """Evaluate solver pools (and an optional per-target method solver).

    ``targets`` maps target id to a list of test instances; ``solver_pools``
    maps target id to its heuristic pool; ``method_solvers`` optionally maps
    target id to one extra solver treated as "the method", producing quality
    lifts and speedup ratios against the pool.
    """
    method_solvers = method_solvers or {}
    per_target: dict = {}
    lifts: dict = {}
    for target_id, instances in targets.items():
        pool = solver_pools[target_id]
        if not pool:
            raise HarnessError(f"empty solver pool for target {target_id}")
        cells = {}
        for solver in pool:
            cells[solver.id] = evaluate_solver_on_target(
                solver, instances, repeats, clip_ms, seed
            )
        pool_ids = [s.id for s in pool]
        entry = {}
        if target_id in method_solvers:
            method = method_solvers[target_id]
            mcell = cells.get(method.id)
            if mcell is None:
                mcell = evaluate_solver_on_target(
                    method, instances, repeats, clip_ms, seed
                )
                cells[method.id] = mcell
            best = _best_heuristic(cells, pool_ids)
            entry = {
                "methodId": method.id,
                "deltaQAvg": mcell.mean_quality
                - _mean(cells[s].mean_quality for s in pool_ids),
                "deltaQBest": mcell.mean_quality - best.mean_quality,
                "speedup": best.clipped_runtime_ms
                / max(mcell.clipped_runtime_ms, _MIN_RATIO_MS),
            }
        per_target[target_id] = cells
        lifts[target_id] = entry

    aggregates: dict = {"meanQualityBySolver": {}}
    solver_ids = sorted({s for cells in per_target.values() for s in cells})
    for solver_id in solver_ids:
        qs = [
            cells[solver_id].mean_quality
            for cells in per_target.values()
            if solver_id in cells
        ]
        aggregates["meanQualityBySolver"][solver_id] = _mean(qs)
    method_lifts = [l for l in lifts.values() if l]
    if method_lifts:
        aggregates["deltaQAvg"] = _mean(l["deltaQAvg"] for l in method_lifts)
        aggregates["deltaQBest"] = _mean(l["deltaQBest"] for l in method_lifts)
        aggregates["geometricMeanSpeedup"] = geometric_mean(
            l["speedup"] for l in method_lifts
        )
    config = {
        "repeats": repeats,
        "clipMs": clip_ms,
        "seed": seed,
        "qualityTolerance": 1e-9,
        "runtimeIncludesSolverInternalVerificationOnly": True,
    }
    return EvalReport(per_target, lifts, aggregates, config)


# ---------------------------------------------------------------------------
# Perturbation ablation


@dataclass(frozen=True)
class PerturbationReport:
    solver_id: str
    q_orig: float
    q_pert: float
    delta_q: float
    quality_changed: float
    optimality_changed: float
    feasibility_changed: float
    runtime_ratio: float  # geometric mean of t_pert / t_orig
    n: int

    def as_dict(self) -> dict:
        return {
            "solverId": self.solver_id,
            "qOrig": self.q_orig,
            "qPert": self.q_pert,
            "deltaQ": self.delta_q,
            "qualityChanged": self.quality_changed,
            "optimalityChanged": self.optimality_changed,
            "feasibilityChanged": self.feasibility_changed,
            "runtimeRatio": self.runtime_ratio,
            "n": self.n,
        }


def run_perturbation_ablation(
    solver: MeasuredSolver, instances, seed: int = 0
) -> PerturbationReport:
    """Post-hoc vertex relabeling diagnostic for graph-class targets.

    Each test instance is evaluated as-is and again after a random vertex
    relabeling; the report tracks the quality shift and the fraction of
    instances whose quality (at 1e-12), optimality, or feasibility changed.
    """
    instances = list(instances)
    if not instances:
        raise HarnessError("need at least one instance")
    q_orig, q_pert, ratios = [], [], []
    quality_changed = optimality_changed = feasibility_changed = 0
    for inst in instances:
        pert_inst, _perm = relabel_graph(inst, seed)
        m_orig = run_measured(solver, inst, dataset_seed=seed)
        m_pert = run_measured(solver, pert_inst, dataset_seed=seed)
        q_orig.append(m_orig.scored.quality)
        q_pert.append(m_pert.scored.quality)
        if abs(m_orig.scored.quality - m_pert.scored.quality) > QUALITY_CHANGE_TOL:
            quality_changed += 1
        if m_orig.scored.optimal != m_pert.scored.optimal:
            optimality_changed += 1
        if m_orig.scored.feasible != m_pert.scored.feasible:
            feasibility_changed += 1
        ratios.append(
            max(m_pert.wall_clock_ms, _MIN_RATIO_MS)
            / max(m_orig.wall_clock_ms, _MIN_RATIO_MS)
        )
    n = len(instances)
    return PerturbationReport(
        solver_id=solver.id,
        q_orig=_mean(q_orig),
        q_pert=_mean(q_pert),
        delta_q=_mean(q_pert) - _mean(q_orig),
        quality_changed=quality_changed / n,
        optimality_changed=optimality_changed / n,
        feasibility_changed=feasibility_changed / n,
        runtime_ratio=geometric_mean(ratios),
        n=n,
    )


# ---------------------------------------------------------------------------
# Diagnostics aggregation


def aggregate_diagnostics(
    traces_by_target: dict, family_of: Optional[dict] = None
) -> dict:
    """Two-level averaging of diagnostic traces.

    Rates are averaged within each target first; family rows average their
    targets' rates, and the overall row averages across all targets.
    """
    if not traces_by_target:
        raise HarnessError("no traces to aggregate")
    per_target = {}
    for target_id, traces in traces_by_target.items():
        traces = list(traces)
        if not traces:
            raise HarnessError(f"target {target_id} has no traces")
        per_target[target_id] = _trace_rates(traces)
    keys = ("shortcutRate", "fallbackRate", "meanResidualSize", "meanRepairIterations")

    def avg_rows(rows):
        return {k: _mean(r[k] for r in rows) for k in keys}

    result = {"perTarget": per_target, "overall": avg_rows(list(per_target.values()))}
    if family_of:
        families: dict = {}
        for target_id in per_target:
            families.setdefault(family_of[target_id], []).append(per_target[target_id])
        result["perFamily"] = {
            fam: avg_rows(rows) for fam, rows in families.items()
        }
    return result
