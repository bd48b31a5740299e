"""Hidden-backdoor recovery for SAT and the compiled specialized solver.

Salience of a variable is the fraction of non-Horn clauses that contain its
positive literal.  On the planted family, backdoor variables are saliently
overrepresented, so averaging salience across enough sampled formulas and
taking the top-k recovers the backdoor.  The compiled solver then
enumerates assignments to the recovered variables; each residual formula is
usually Horn and falls to unit propagation, with a full DPLL fallback for
the rare non-Horn residual.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from sklearn.base import BaseEstimator

from .heuristics.base import DiagnosticTrace
from .instances import CnfFormula


class BackdoorError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Salience and recovery


def is_horn_clause(clause) -> bool:
    return sum(1 for lit in clause if lit > 0) <= 1


def salience_profile(f: CnfFormula) -> np.ndarray:
    """Per-variable salience: share of non-Horn clauses containing the
    positive literal (0-indexed array of length num_vars)."""
    counts = np.zeros(f.num_vars)
    for clause in f.clauses:
        if is_horn_clause(clause):
            continue
        for lit in clause:
            if lit > 0:
                counts[lit - 1] += 1
    return counts / max(f.num_clauses, 1)


def salience(f: CnfFormula, var: int) -> float:
    """Salience of 0-indexed variable ``var``."""
    if not 0 <= var < f.num_vars:
        raise BackdoorError(f"variable {var} out of range")
    return float(salience_profile(f)[var])


def recover_backdoor(formulas, k: int) -> tuple:
    """Top-k variables by mean salience across formulas; ties break toward
    the smallest variable index.  Returns sorted 0-indexed variables."""
    formulas = list(formulas)
    if not formulas:
        raise BackdoorError("need at least one formula")
    if k < 1:
        raise BackdoorError("backdoor size must be positive")
    d = formulas[0].num_vars
    if any(f.num_vars != d for f in formulas):
        raise BackdoorError("formulas must share a variable count")
    if k > d:
        raise BackdoorError("backdoor size exceeds variable count")
    totals = np.zeros(d)
    for f in formulas:
        totals += salience_profile(f)
    means = totals / len(formulas)
    # Stable sort on (-mean, index) puts ties on the smallest index.
    order = sorted(range(d), key=lambda v: (-means[v], v))
    return tuple(sorted(order[:k]))


# ---------------------------------------------------------------------------
# Restriction and the two solvers


def restrict(clauses, assignment: dict):
    """Apply a partial assignment (0-indexed var -> bool).

    True literals delete their clause, false literals drop out of theirs.
    Returns the residual clause list, or None if some clause became empty.
    """
    residual = []
    for clause in clauses:
        out = []
        satisfied = False
        for lit in clause:
            var = abs(lit) - 1
            if var in assignment:
                if assignment[var] == (lit > 0):
                    satisfied = True
                    break
            else:
                out.append(lit)
        if satisfied:
            continue
        if not out:
            return None
        residual.append(tuple(out))
    return residual


def horn_sat(clauses, num_vars: int) -> Optional[dict]:
    """Satisfiability of a Horn clause list by unit propagation.

    Returns the minimal model as a var -> bool dict (unset vars false), or
    None when unsatisfiable.  Raises on non-Horn input.
    """
    for clause in clauses:
        if not is_horn_clause(clause):
            raise BackdoorError("horn_sat requires Horn clauses")
    true_vars: set = set()
    changed = True
    while changed:
        changed = False
        for clause in clauses:
            positive = None
            all_neg_true = True
            satisfied = False
            for lit in clause:
                var = abs(lit) - 1
                if lit > 0:
                    positive = var
                    if var in true_vars:
                        satisfied = True
                        break
                elif var not in true_vars:
                    all_neg_true = False
            if satisfied or not all_neg_true:
                continue
            if positive is None:
                return None  # all-negative clause with every var forced true
            if positive not in true_vars:
                true_vars.add(positive)
                changed = True
    return {v: (v in true_vars) for v in range(num_vars)}


def dpll(clauses, num_vars: int) -> Optional[dict]:
    """Plain DPLL: unit propagation, pure-literal elimination, and
    lowest-index branching trying true first.  No clause learning."""

    def search(clauses, assignment: dict):
        # Unit propagation.
        while True:
            unit = None
            for clause in clauses:
                if len(clause) == 1:
                    unit = clause[0]
                    break
            if unit is None:
                break
            clauses = restrict(clauses, {abs(unit) - 1: unit > 0})
            if clauses is None:
                return None
            assignment = dict(assignment)
            assignment[abs(unit) - 1] = unit > 0
        # Pure-literal elimination.
        while True:
            polarity: dict = {}
            for clause in clauses:
                for lit in clause:
                    var = abs(lit) - 1
                    prev = polarity.get(var)
                    if prev is None:
                        polarity[var] = lit
                    elif prev != 0 and prev * lit < 0:
                        polarity[var] = 0
            pure = next((lit for lit in polarity.values() if lit != 0), None)
            if pure is None:
                break
            clauses = restrict(clauses, {abs(pure) - 1: pure > 0})
            assignment = dict(assignment)
            assignment[abs(pure) - 1] = pure > 0
        if not clauses:
            return assignment
        var = min(abs(lit) - 1 for clause in clauses for lit in clause)
        for value in (True, False):
            reduced = restrict(clauses, {var: value})
            if reduced is None:
                continue
            found = search(reduced, {**assignment, var: value})
            if found is not None:
                return found
        return None

    found = search([tuple(c) for c in clauses], {})
    if found is None:
        return None
    return {v: found.get(v, False) for v in range(num_vars)}


def dpll_formula(f: CnfFormula):
    """(verdict, model) for a full formula, model as a tuple of bools."""
    model = dpll(list(f.clauses), f.num_vars)
    if model is None:
        return False, None
    return True, tuple(model[v] for v in range(f.num_vars))


# ---------------------------------------------------------------------------
# Compiled backdoor solver


@dataclass(frozen=True)
class BackdoorSolveResult:
    satisfiable: bool
    model: Optional[tuple]
    trace: DiagnosticTrace


def solve_with_backdoor(f: CnfFormula, backdoor) -> BackdoorSolveResult:
    """Decide satisfiability by enumerating the backdoor assignments.

    Assignments are tried in lexicographic order (false before true).  Horn
    residuals go to unit propagation (the shortcut); anything else falls
    back to DPLL.  The trace records which paths fired and the largest
    residual seen.
    """
    backdoor = tuple(sorted(int(v) for v in backdoor))
    if len(set(backdoor)) != len(backdoor):
        raise BackdoorError("backdoor variables must be distinct")
    if backdoor and not (0 <= backdoor[0] and backdoor[-1] < f.num_vars):
        raise BackdoorError("backdoor variable out of range")
    shortcut = False
    fallback = False
    max_residual = 0
    clauses = list(f.clauses)
    for bits in itertools.product((False, True), repeat=len(backdoor)):
        alpha = dict(zip(backdoor, bits))
        residual = restrict(clauses, alpha)
        if residual is None:
            continue  # empty clause: branch conflict
        max_residual = max(max_residual, len(residual))
        if all(is_horn_clause(c) for c in residual):
            shortcut = True
            model = horn_sat(residual, f.num_vars)
        else:
            fallback = True
            model = dpll(residual, f.num_vars)
        if model is not None:
            model.update(alpha)
            full = tuple(model.get(v, False) for v in range(f.num_vars))
            return BackdoorSolveResult(
                True,
                full,
                DiagnosticTrace(shortcut, fallback, float(max_residual), 0),
            )
    return BackdoorSolveResult(
        False, None, DiagnosticTrace(shortcut, fallback, float(max_residual), 0)
    )


def check_model(f: CnfFormula, model) -> bool:
    return all(
        any(model[abs(lit) - 1] == (lit > 0) for lit in clause)
        for clause in f.clauses
    )


class BackdoorLearner(BaseEstimator):
    """Estimator wrapper: fit recovers the backdoor from sample formulas,
    predict decides satisfiability with the compiled solver."""

    def __init__(self, k: int = 2):
        self.k = k

    def fit(self, X, y=None):
        self.backdoor_ = recover_backdoor(X, self.k)
        return self

    def predict(self, X):
        if not hasattr(self, "backdoor_"):
            raise BackdoorError("learner is not fitted")
        return [solve_with_backdoor(f, self.backdoor_).satisfiable for f in X]
