"""Runtime-aware empirical solver selection.

Runs every library solver on the sample, keeps the ones that never erred
(infeasible output or crash), and returns the empirically fastest of those.
The accompanying bounds use the prior weight pi(c) through its description
length Gamma(c) = ln(1 / pi(c)): the selected solver's future error rate is
at most (Gamma + ln(2/delta)) / n, and its expected runtime is within
runGap of the best zero-error solver, both with probability 1 - delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from sklearn.base import BaseEstimator

from .heuristics.base import (
    DEFAULT_FAILURE_RUNTIME_MS,
    RunMeasurement,
    run_measured,
)

PRIOR_SUM_TOL = 1e-12


class ErmError(ValueError):
    pass


@dataclass(frozen=True)
class ErmConfig:
    delta: float = 0.05
    t_max_ms: float = DEFAULT_FAILURE_RUNTIME_MS
    prior: Optional[dict] = None  # solver id -> pi(c); None = uniform
    failure_runtime_ms: float = DEFAULT_FAILURE_RUNTIME_MS

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ErmError("delta must lie in (0, 1)")
        if self.t_max_ms <= 0 or self.failure_runtime_ms <= 0:
            raise ErmError("runtimes must be positive")

    def resolved_prior(self, solvers) -> dict:
        if self.prior is None:
            return {s.id: 1.0 / len(solvers) for s in solvers}
        prior = dict(self.prior)
        for s in solvers:
            if s.id not in prior:
                raise ErmError(f"prior missing solver {s.id}")
            if prior[s.id] <= 0:
                raise ErmError(f"prior weight for {s.id} must be positive")
        total = sum(prior[s.id] for s in solvers)
        if total > 1.0 + PRIOR_SUM_TOL:
            raise ErmError(f"prior weights sum to {total} > 1")
        return prior


@dataclass(frozen=True)
class SolverStats:
    solver_id: str
    errors: int
    mean_runtime_ms: float
    measurements: tuple = field(repr=False, default=())


@dataclass(frozen=True)
class ErmSelection:
    selected_id: Optional[str]  # None when no solver was sample-consistent
    stats: tuple  # SolverStats per solver, library order
    n: int
    err_bound: Optional[float]
    run_gaps: dict  # solver id -> runtime gap bound vs the selected solver

    @property
    def found(self) -> bool:
        return self.selected_id is not None


def gamma_weight(prior: dict, solver_id: str) -> float:
    """Description length Gamma(c) = ln(1 / pi(c))."""
    return math.log(1.0 / prior[solver_id])


def theorem1_err_bound(gamma: float, delta: float, n: int) -> float:
    return (gamma + math.log(2.0 / delta)) / n


def theorem1_run_gap(
    gamma_selected: float, gamma_other: float, delta: float, n: int, t_max_ms: float
) -> float:
    g = max(gamma_selected, gamma_other)
    return 2.0 * t_max_ms * math.sqrt((g + math.log(4.0 / delta)) / (2.0 * n))


def _is_error(m: RunMeasurement) -> bool:
    return m.crashed or not m.scored.feasible


def select_erm(
    solvers,
    instances,
    config: ErmConfig = ErmConfig(),
    dataset_seed: int = 0,
) -> ErmSelection:
    """Pick the empirically fastest solver with zero sample errors.

    Crashes count as errors and contribute the configured failure runtime to
    the mean.  Ties in mean runtime break toward the smallest solver id.
    """
    solvers = list(solvers)
    instances = list(instances)
    if not solvers:
        raise ErmError("solver library is empty")
    if not instances:
        raise ErmError("sample is empty")
    if len({s.id for s in solvers}) != len(solvers):
        raise ErmError("solver ids must be unique")
    prior = config.resolved_prior(solvers)
    n = len(instances)

    stats = []
    for solver in solvers:
        runs = tuple(
            run_measured(
                solver,
                inst,
                dataset_seed=dataset_seed,
                failure_runtime_ms=config.failure_runtime_ms,
            )
            for inst in instances
        )
        errors = sum(1 for m in runs if _is_error(m))
        mean_rt = sum(m.wall_clock_ms for m in runs) / n
        stats.append(SolverStats(solver.id, errors, mean_rt, runs))

    consistent = [s for s in stats if s.errors == 0]
    if not consistent:
        return ErmSelection(None, tuple(stats), n, None, {})
    chosen = min(consistent, key=lambda s: (s.mean_runtime_ms, s.solver_id))
    g_sel = gamma_weight(prior, chosen.solver_id)
    err_bound = theorem1_err_bound(g_sel, config.delta, n)
    run_gaps = {
        s.solver_id: theorem1_run_gap(
            g_sel, gamma_weight(prior, s.solver_id), config.delta, n, config.t_max_ms
        )
        for s in stats
    }
    return ErmSelection(chosen.solver_id, tuple(stats), n, err_bound, run_gaps)


class ErmSolverSelector(BaseEstimator):
    """Estimator-style wrapper around :func:`select_erm`.

    ``fit`` takes the instance sample; the solver library is a constructor
    parameter so that ``get_params`` round-trips the full configuration.
    """

    def __init__(
        self,
        solvers=(),
        delta: float = 0.05,
        t_max_ms: float = DEFAULT_FAILURE_RUNTIME_MS,
        prior=None,
        failure_runtime_ms: float = DEFAULT_FAILURE_RUNTIME_MS,
        dataset_seed: int = 0,
    ):
        self.solvers = solvers
        self.delta = delta
        self.t_max_ms = t_max_ms
        self.prior = prior
        self.failure_runtime_ms = failure_runtime_ms
        self.dataset_seed = dataset_seed

    def fit(self, X, y=None):
        config = ErmConfig(
            delta=self.delta,
            t_max_ms=self.t_max_ms,
            prior=self.prior,
            failure_runtime_ms=self.failure_runtime_ms,
        )
        self.selection_ = select_erm(
            self.solvers, X, config, dataset_seed=self.dataset_seed
        )
        solver_map = {s.id: s for s in self.solvers}
        self.solver_ = (
            solver_map[self.selection_.selected_id]
            if self.selection_.found
            else None
        )
        return self

    def predict(self, X):
        """Solve each instance with the selected solver."""
        if not hasattr(self, "selection_"):
            raise ErmError("selector is not fitted")
        if self.solver_ is None:
            raise ErmError("no sample-consistent solver was found")
        return [
            run_measured(
                self.solver_,
                inst,
                dataset_seed=self.dataset_seed,
                failure_runtime_ms=self.failure_runtime_ms,
            ).solution
            for inst in X
        ]
