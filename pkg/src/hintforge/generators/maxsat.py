"""MaxSAT instance families and the planted Horn-backdoor formula family.

Families plant a satisfying assignment and force every clause to agree with
it, so the optimum equals the clause count with a certified witness.
"""

from __future__ import annotations

import math

import numpy as np

from ..instances import Assignment, CnfFormula


def generate_horn_backdoor_formula(
    d: int,
    k: int,
    num_clauses: int,
    rho: float,
    horn_width: int = 3,
    tail_size: int = 2,
    rng=None,
    backdoor=None,
):
    """Sample one formula from the planted Horn-backdoor family.

    With probability ``1 - rho`` a clause is Horn over ``horn_width`` distinct
    variables (one positive literal with probability 1/2, otherwise all
    negative).  With probability ``rho`` the clause is non-Horn:
    ``x_i or x_j or not x_t (t in T)`` with i uniform over the backdoor B,
    j uniform outside B, and T a uniform ``tail_size``-subset disjoint from
    B and j.  Requires ``k < d / 2``.  Returns ``(formula, B)`` with B a
    sorted tuple of 0-indexed backdoor variables.
    """
    if not 0 < k < d / 2:
        raise ValueError(f"backdoor size must satisfy 0 < k < d/2, got k={k}, d={d}")
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [0, 1]")
    if horn_width < 2 or horn_width > d:
        raise ValueError("horn_width must be in [2, d]")
    if tail_size < 0 or k + 1 + tail_size > d:
        raise ValueError("tail_size too large for d and k")
    if rng is None:
        rng = np.random.default_rng(0)
    if backdoor is None:
        backdoor = np.sort(rng.choice(d, size=k, replace=False))
    else:
        backdoor = np.sort(np.asarray(backdoor, dtype=int))
        if len(backdoor) != k or len(set(backdoor.tolist())) != k:
            raise ValueError("backdoor must contain k distinct variables")
    outside = np.setdiff1d(np.arange(d), backdoor)

    m = num_clauses
    is_nonhorn = rng.random(m) < rho
    # Random distinct-variable rows via per-row argsort of uniforms.
    perm_rows = np.argsort(rng.random((m, d)), axis=1)
    horn_positive = rng.random(m) < 0.5
    pos_slot = rng.integers(horn_width, size=m)
    i_pick = backdoor[rng.integers(k, size=m)]
    j_slot = rng.integers(d - k, size=m)
    j_pick = outside[j_slot]

    clauses = []
    for c in range(m):
        if not is_nonhorn[c]:
            vars_ = perm_rows[c, :horn_width]
            if horn_positive[c]:
                p = pos_slot[c]
                lits = tuple(
                    int(v) + 1 if t == p else -(int(v) + 1)
                    for t, v in enumerate(vars_)
                )
            else:
                lits = tuple(-(int(v) + 1) for v in vars_)
        else:
            i, j = int(i_pick[c]), int(j_pick[c])
            forbidden = set(backdoor.tolist()) | {j}
            tail = [int(v) for v in perm_rows[c] if int(v) not in forbidden][:tail_size]
            lits = (i + 1, j + 1) + tuple(-(t + 1) for t in tail)
        clauses.append(lits)
    return CnfFormula(d, tuple(clauses)), tuple(int(v) for v in backdoor)


def _force_satisfied(clause: tuple, assignment: list, rng) -> tuple:
    """Flip one literal's polarity if the planted assignment misses the clause."""
    if any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause):
        return clause
    pos = int(rng.integers(len(clause)))
    fixed = list(clause)
    fixed[pos] = -fixed[pos]
    return tuple(fixed)


def _finish(num_vars: int, clauses: list, assignment: list, hidden: dict):
    f = CnfFormula(num_vars, tuple(clauses))
    for clause in f.clauses:
        if not any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause):
            raise AssertionError("planted assignment misses a clause")
    return (
        f,
        float(f.num_clauses),
        Assignment(tuple(assignment)),
        "planted-certified",
        hidden,
    )


def _random_clause(rng, variables, width: int, assignment) -> tuple:
    vars_ = rng.choice(np.asarray(variables), size=width, replace=False)
    clause = tuple(
        int(v) + 1 if rng.random() < 0.5 else -(int(v) + 1) for v in vars_
    )
    return _force_satisfied(clause, assignment, rng)


def community_parity(rng, profile: str):
    """Variables split into communities; the planted assignment follows each
    community's parity bit and most clauses stay within one community."""
    if profile == "paper":
        num_vars, num_clauses, comm_size = 240, 960, 16
    else:
        num_vars, num_clauses, comm_size = 16, 48, 4
    num_comms = num_vars // comm_size
    parity = [int(rng.integers(2)) for _ in range(num_comms)]
    assignment = [
        bool(parity[i // comm_size] ^ (i % 2)) for i in range(num_vars)
    ]
    clauses = []
    for _ in range(num_clauses):
        if rng.random() < 0.9:
            c = int(rng.integers(num_comms))
            pool = range(c * comm_size, (c + 1) * comm_size)
        else:
            pool = range(num_vars)
        clauses.append(_random_clause(rng, list(pool), 3, assignment))
    return _finish(num_vars, clauses, assignment, {"communitySize": comm_size})


def last_clause_signal(rng, profile: str):
    """Clauses come in groups of four; the last clause of each group carries
    a literal that reveals the planted value of a signal variable."""
    if profile == "paper":
        num_vars, num_clauses = 280, 1120
    else:
        num_vars, num_clauses = 16, 48
    group = 4
    assignment = [bool(rng.integers(2)) for _ in range(num_vars)]
    signal = int(rng.integers(num_vars))
    signal_lit = signal + 1 if assignment[signal] else -(signal + 1)
    clauses = []
    for gi in range(num_clauses // group):
        for slot in range(group):
            clause = _random_clause(rng, list(range(num_vars)), 3, assignment)
            if slot == group - 1 and signal + 1 not in {abs(l) for l in clause}:
                clause = clause[:-1] + (signal_lit,)
            clauses.append(clause)
    return _finish(
        num_vars, clauses, assignment, {"signalVariable": signal, "groupSize": group}
    )


def latent_backdoor(rng, profile: str):
    """Horn-backdoor formulas; the all-false assignment satisfies everything."""
    if profile == "paper":
        d, num_clauses, k, rho = 128, 512, 8, 0.25
    else:
        d, num_clauses, k, rho = 14, 56, 3, 0.3
    f, bd = generate_horn_backdoor_formula(
        d, k, num_clauses, rho, horn_width=3, tail_size=2, rng=rng
    )
    assignment = [False] * d
    for clause in f.clauses:
        if not any(lit < 0 for lit in clause):
            raise AssertionError("all-positive clause breaks the planted witness")
    return (
        f,
        float(f.num_clauses),
        Assignment(tuple(assignment)),
        "planted-certified",
        {"backdoor": [int(v) for v in bd], "rho": rho},
    )


def backdoor_gamma(d: int, k: int, rho: float) -> float:
    """Salience margin between backdoor and outside variables."""
    return rho * (1.0 / k - 1.0 / (d - k))


def theorem3_samples(d: int, k: int, rho: float, delta: float) -> int:
    """Formulas needed for high-probability backdoor recovery."""
    gamma = backdoor_gamma(d, k, rho)
    if gamma <= 0:
        raise ValueError("margin is nonpositive; need k < d/2 and rho > 0")
    return math.ceil(8.0 / (gamma * gamma) * math.log(2.0 * d / delta))
