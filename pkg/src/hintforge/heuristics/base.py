"""Measured-solver interface shared by all baseline heuristics."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from ..instances import Instance, InstanceError, PublicInstance, Solution, strip_to_public
from ..rng import solver_seed, stream
from ..scoring import ScoredResult, quality

DEFAULT_FAILURE_RUNTIME_MS = 10_000.0


@dataclass(frozen=True)
class DiagnosticTrace:
    shortcut_used: bool = False
    fallback_used: bool = False
    residual_size: float = 0.0
    repair_iterations: int = 0

    def __post_init__(self):
        if self.repair_iterations < 0 or self.residual_size < 0:
            raise ValueError("trace counts must be nonnegative")


@dataclass(frozen=True)
class MeasuredSolver:
    id: str
    problem_class: str
    solve: Callable  # (PublicInstance, Generator) -> (Solution, DiagnosticTrace)
    prior: float = 1.0

    def __post_init__(self):
        if not (0 < self.prior <= 1):
            raise ValueError("prior weight must lie in (0, 1]")


@dataclass(frozen=True)
class RunMeasurement:
    wall_clock_ms: float
    scored: ScoredResult
    trace: DiagnosticTrace
    solution: Optional[Solution] = None
    error: Optional[str] = None

    @property
    def crashed(self) -> bool:
        return self.error is not None


def run_measured(
    solver: MeasuredSolver,
    inst: Instance,
    dataset_seed: int = 0,
    failure_runtime_ms: float = DEFAULT_FAILURE_RUNTIME_MS,
) -> RunMeasurement:
    """Time one solve on the public part and score the output.

    Solver exceptions never escape: a crash scores quality 0 with the
    configured failure runtime.
    """
    if solver.problem_class != inst.problem_class:
        raise InstanceError(
            f"solver {solver.id} is for {solver.problem_class}, "
            f"instance {inst.id} is {inst.problem_class}"
        )
    public = strip_to_public(inst)
    rng = stream(solver_seed(dataset_seed, solver.id, inst.id))
    t0 = time.monotonic()
    try:
        solution, trace = solver.solve(public, rng)
    except Exception as exc:  # crash convention: zero quality, failure runtime
        return RunMeasurement(
            wall_clock_ms=failure_runtime_ms,
            scored=ScoredResult(False, 0.0, 0.0, False),
            trace=DiagnosticTrace(),
            error=f"{type(exc).__name__}: {exc}",
        )
    elapsed_ms = (time.monotonic() - t0) * 1000.0
    scored = quality(inst, solution)
    return RunMeasurement(elapsed_ms, scored, trace, solution=solution)
