"""MaxSAT baselines: greedy flip local search, literal-majority, random."""

from __future__ import annotations

from ..instances import Assignment, CnfFormula, PublicInstance
from ..scoring import count_satisfied
from .base import DiagnosticTrace, MeasuredSolver


def _majority_polarity(f: CnfFormula) -> list:
    score = [0] * f.num_vars
    for clause in f.clauses:
        for lit in clause:
            score[abs(lit) - 1] += 1 if lit > 0 else -1
    return [s >= 0 for s in score]


def literal_majority(public: PublicInstance, rng):
    f: CnfFormula = public.data
    return Assignment(tuple(_majority_polarity(f))), DiagnosticTrace()


def random_assignment(public: PublicInstance, rng):
    f: CnfFormula = public.data
    values = rng.random(f.num_vars) < 0.5
    return Assignment(tuple(bool(v) for v in values)), DiagnosticTrace()


def greedy_flip(public: PublicInstance, rng, max_passes: int = 20):
    """Start from the majority assignment and flip while any single flip
    improves the satisfied count."""
    f: CnfFormula = public.data
    values = _majority_polarity(f)
    occurrences = [[] for _ in range(f.num_vars)]
    for ci, clause in enumerate(f.clauses):
        for lit in clause:
            occurrences[abs(lit) - 1].append(ci)
    sat_count = [0] * f.num_clauses
    for ci, clause in enumerate(f.clauses):
        sat_count[ci] = sum(1 for lit in clause if values[abs(lit) - 1] == (lit > 0))
    passes = 0
    for _ in range(max_passes):
        improved = False
        for var in range(f.num_vars):
            gain = 0
            for ci in occurrences[var]:
                for lit in f.clauses[ci]:
                    if abs(lit) - 1 == var:
                        now_sat = values[var] == (lit > 0)
                        if now_sat and sat_count[ci] == 1:
                            gain -= 1
                        elif not now_sat and sat_count[ci] == 0:
                            gain += 1
            if gain > 0:
                values[var] = not values[var]
                for ci in occurrences[var]:
                    for lit in f.clauses[ci]:
                        if abs(lit) - 1 == var:
                            sat_count[ci] += 1 if values[var] == (lit > 0) else -1
                improved = True
        passes += 1
        if not improved:
            break
    assert count_satisfied(f, values) == sum(1 for c in sat_count if c > 0)
    return Assignment(tuple(values)), DiagnosticTrace(repair_iterations=passes)


def catalog(prior: float = 1.0) -> list:
    return [
        MeasuredSolver("maxsat/greedy-flip", "maxsat", greedy_flip, prior),
        MeasuredSolver("maxsat/literal-majority", "maxsat", literal_majority, prior),
        MeasuredSolver("maxsat/random-assignment", "maxsat", random_assignment, prior),
    ]
