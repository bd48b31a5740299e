"""Desk-scale exact solvers used to certify optima and as test oracles.

Self-contained implementations (no external solver processes): chromatic
number by iterative-deepening backtracking with a clique lower bound, MIS by
memoized bitmask recursion, MDS by branch-and-bound on undominated vertices,
packing LP by a dense tableau simplex, MDKP by branch-and-bound with a
per-resource fractional bound, TSP by Held-Karp, MaxSAT by branch-and-bound.
Budget exhaustion raises; oracles never fall back to a heuristic answer.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .instances import (
    Assignment,
    CnfFormula,
    Coloring,
    Graph,
    Instance,
    ItemFractions,
    ItemPicks,
    PackingLpInstance,
    Tour,
    TspInstance,
    VertexSet,
)


class BudgetExceededError(RuntimeError):
    pass


class OracleNumericalError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_seconds: float = 10.0
    max_states: int = 50_000_000

    def __post_init__(self):
        if self.max_seconds <= 0 or self.max_states <= 0:
            raise ValueError("budget fields must be positive")


class _Meter:
    def __init__(self, budget: OracleBudget):
        self.budget = budget
        self.start = time.monotonic()
        self.states = 0

    def tick(self, n: int = 1):
        self.states += n
        if self.states > self.budget.max_states:
            raise BudgetExceededError("state budget exceeded")
        if self.states % 4096 == 0 and time.monotonic() - self.start > self.budget.max_seconds:
            raise BudgetExceededError("time budget exceeded")


DEFAULT_BUDGET = OracleBudget()


# ---------------------------------------------------------------------------
# Graph coloring


def _greedy_clique(adj, n) -> list:
    best: list = []
    order = sorted(range(n), key=lambda v: -len(adj[v]))
    for start in order[: min(n, 16)]:
        clique = [start]
        cand = set(adj[start])
        while cand:
            v = max(cand, key=lambda u: len(adj[u] & cand))
            clique.append(v)
            cand &= adj[v]
        if len(clique) > len(best):
            best = clique
    return best


def _try_k_coloring(g: Graph, k: int, meter: _Meter):
    """DSATUR-ordered backtracking; returns a coloring or None."""
    adj = g.adjacency()
    n = g.n
    colors = [-1] * n

    def choose():
        best_v, best_key = -1, (-1, -1)
        for v in range(n):
            if colors[v] != -1:
                continue
            sat = len({colors[u] for u in adj[v] if colors[u] != -1})
            key = (sat, len(adj[v]))
            if key > best_key:
                best_key, best_v = key, v
        return best_v

    def backtrack(depth):
        meter.tick()
        if depth == n:
            return True
        v = choose()
        used = {colors[u] for u in adj[v] if colors[u] != -1}
        max_new = min(k, (max((c for c in colors if c != -1), default=-1) + 2))
        for c in range(max_new):
            if c in used:
                continue
            colors[v] = c
            if backtrack(depth + 1):
                return True
            colors[v] = -1
        return False

    if backtrack(0):
        return list(colors)
    return None


def exact_coloring(g: Graph, budget: OracleBudget = DEFAULT_BUDGET):
    """Exact chromatic number and an optimal coloring."""
    meter = _Meter(budget)
    if g.n == 0:
        return 0, Coloring(())
    if not g.edges:
        return 1, Coloring((0,) * g.n)
    adj = g.adjacency()
    lb = max(2, len(_greedy_clique(adj, g.n)))
    for k in range(lb, g.n + 1):
        coloring = _try_k_coloring(g, k, meter)
        if coloring is not None:
            return k, Coloring(tuple(coloring))
    raise OracleNumericalError("coloring search exhausted without success")


# ---------------------------------------------------------------------------
# MIS / MDS


def exact_mis(g: Graph, budget: OracleBudget = DEFAULT_BUDGET):
    """Maximum independent set size and one optimal set."""
    meter = _Meter(budget)
    n = g.n
    nbr = [0] * n
    for u, v in g.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    memo: dict = {}

    def mis(mask: int) -> int:
        if mask == 0:
            return 0
        if mask in memo:
            return memo[mask]
        meter.tick()
        v = (mask & -mask).bit_length() - 1
        active_nbrs = nbr[v] & mask
        if active_nbrs == 0:
            result = 1 + mis(mask & ~(1 << v))
        else:
            take = 1 + mis(mask & ~((1 << v) | nbr[v]))
            skip = mis(mask & ~(1 << v))
            result = max(take, skip)
        memo[mask] = result
        return result

    best = mis((1 << n) - 1)

    # Reconstruct one optimal set from the memo.
    chosen = []
    mask = (1 << n) - 1
    while mask:
        v = (mask & -mask).bit_length() - 1
        if (nbr[v] & mask) == 0 or mis(mask & ~((1 << v) | nbr[v])) + 1 >= mis(mask):
            chosen.append(v)
            mask &= ~((1 << v) | nbr[v])
        else:
            mask &= ~(1 << v)
    return best, VertexSet(tuple(sorted(chosen)))


def exact_mds(g: Graph, budget: OracleBudget = DEFAULT_BUDGET):
    """Minimum dominating set size and one optimal set."""
    meter = _Meter(budget)
    n = g.n
    closed = [1 << v for v in range(n)]
    for u, v in g.edges:
        closed[u] |= 1 << v
        closed[v] |= 1 << u
    full = (1 << n) - 1

    # Greedy upper bound.
    dominated = 0
    greedy: list = []
    while dominated != full:
        v = max(range(n), key=lambda u: bin(closed[u] & ~dominated).count("1"))
        greedy.append(v)
        dominated |= closed[v]
    best_size = len(greedy)
    best_set = list(greedy)

    def branch(dominated: int, chosen: list):
        nonlocal best_size, best_set
        meter.tick()
        if dominated == full:
            if len(chosen) < best_size:
                best_size = len(chosen)
                best_set = list(chosen)
            return
        if len(chosen) + 1 > best_size:
            return
        rem = full & ~dominated
        # Undominated vertex with the fewest candidate dominators.
        v = min(
            (u for u in range(n) if rem >> u & 1),
            key=lambda u: bin(closed[u]).count("1"),
        )
        cands = [u for u in range(n) if closed[u] >> v & 1]
        cands.sort(key=lambda u: -bin(closed[u] & ~dominated).count("1"))
        # Simple lower bound: each pick dominates at most max coverage vertices.
        max_cov = max(bin(closed[u] & ~dominated).count("1") for u in range(n))
        need = -(-bin(rem).count("1") // max_cov)
        if len(chosen) + need >= best_size:
            return
        for u in cands:
            chosen.append(u)
            branch(dominated | closed[u], chosen)
            chosen.pop()

    branch(0, [])
    return best_size, VertexSet(tuple(sorted(best_set)))


# ---------------------------------------------------------------------------
# Packing LP (dense tableau simplex)


def exact_lp(inst: PackingLpInstance, budget: OracleBudget = DEFAULT_BUDGET):
    """Optimal value and fractions for max v.x, A^T x <= b, 0 <= x <= 1."""
    values, usage, caps = inst.arrays()
    n_items = inst.num_items
    n_res = inst.num_resources
    rows = n_res + n_items  # resource constraints plus x_i <= 1 bounds
    cols = n_items + rows

    # Tableau: [A | I] x = b with slacks basic; objective row last.
    tab = np.zeros((rows + 1, cols + 1))
    tab[:n_res, :n_items] = usage.T
    tab[n_res:rows, :n_items] = np.eye(n_items)
    tab[:rows, n_items:cols] = np.eye(rows)
    tab[:n_res, -1] = caps
    tab[n_res:rows, -1] = 1.0
    tab[-1, :n_items] = -values
    basis = list(range(n_items, cols))

    max_iter = 50 * (rows + cols)
    meter = _Meter(budget)
    for it in range(max_iter):
        meter.tick()
        obj = tab[-1, :cols]
        if it < max_iter // 2:
            pivot_col = int(np.argmin(obj))
            if obj[pivot_col] >= -1e-10:
                break
        else:  # Bland's rule to guarantee termination
            neg = np.nonzero(obj < -1e-10)[0]
            if len(neg) == 0:
                break
            pivot_col = int(neg[0])
        col = tab[:rows, pivot_col]
        pos = col > 1e-12
        if not np.any(pos):
            raise OracleNumericalError("unbounded packing LP (should not happen)")
        ratios = np.full(rows, np.inf)
        ratios[pos] = tab[:rows, -1][pos] / col[pos]
        pivot_row = int(np.argmin(ratios))
        piv = tab[pivot_row, pivot_col]
        tab[pivot_row] /= piv
        for r in range(rows + 1):
            if r != pivot_row and abs(tab[r, pivot_col]) > 1e-14:
                tab[r] -= tab[r, pivot_col] * tab[pivot_row]
        basis[pivot_row] = pivot_col
    else:
        raise BudgetExceededError("simplex iteration limit reached")

    x = np.zeros(n_items)
    for r, b in enumerate(basis):
        if b < n_items:
            x[b] = tab[r, -1]
    x = np.clip(x, 0.0, 1.0)
    value = float(values @ x)
    return value, ItemFractions(tuple(float(v) for v in x))


# ---------------------------------------------------------------------------
# MDKP


def exact_mdkp(inst: PackingLpInstance, budget: OracleBudget = DEFAULT_BUDGET):
    """Exact multidimensional knapsack by branch-and-bound."""
    values, usage, caps = inst.arrays()
    n = inst.num_items
    meter = _Meter(budget)

    # Order by best-case density to tighten the fractional bound.
    density = values / np.maximum(usage.max(axis=1), 1e-12)
    order = np.argsort(-density)
    values_o = values[order]
    usage_o = usage[order]

    best_val = 0.0
    best_picks = np.zeros(n, dtype=bool)
    picks = np.zeros(n, dtype=bool)

    # Per-resource item orders by that resource's own value density, so each
    # 1-D fractional relaxation is a valid upper bound.
    resource_orders = []
    for j in range(inst.num_resources):
        dens_j = values_o / np.maximum(usage_o[:, j], 1e-12)
        dens_j[usage_o[:, j] <= 0] = np.inf
        resource_orders.append(np.argsort(-dens_j, kind="stable"))

    def frac_bound(i: int, remaining: np.ndarray) -> float:
        # Valid bound: min over resources of the 1-D fractional relaxation
        # over the still-undecided items.
        bound = np.inf
        for j in range(inst.num_resources):
            cap = remaining[j]
            total = 0.0
            for t in resource_orders[j]:
                if t < i:
                    continue
                u = usage_o[t, j]
                if u <= cap:
                    cap -= u
                    total += values_o[t]
                else:
                    total += values_o[t] * cap / u
                    break
            bound = min(bound, total)
        return bound

    def branch(i: int, value: float, remaining: np.ndarray):
        nonlocal best_val, best_picks
        meter.tick()
        if value > best_val:
            best_val = value
            best_picks = picks.copy()
        if i == n:
            return
        if value + frac_bound(i, remaining) <= best_val:
            return
        if np.all(usage_o[i] <= remaining):
            picks[i] = True
            branch(i + 1, value + values_o[i], remaining - usage_o[i])
            picks[i] = False
        branch(i + 1, value, remaining)

    branch(0, 0.0, caps.copy())
    out = np.zeros(n, dtype=bool)
    out[order] = best_picks
    return float(best_val), ItemPicks(tuple(bool(b) for b in out))


# ---------------------------------------------------------------------------
# TSP (Held-Karp)


def exact_tsp(inst: TspInstance, budget: OracleBudget = DEFAULT_BUDGET):
    """Exact tour by Held-Karp dynamic programming (n <= 16)."""
    n = inst.n
    if n > 16:
        raise BudgetExceededError(f"Held-Karp oracle limited to 16 cities, got {n}")
    dist = inst.distance_matrix()
    if n == 2:
        return float(2 * dist[0, 1]), Tour((0, 1))
    size = 1 << (n - 1)  # subsets of cities 1..n-1, city 0 fixed as start
    dp = np.full((size, n - 1), np.inf)
    parent = np.full((size, n - 1), -1, dtype=np.int32)
    for j in range(n - 1):
        dp[1 << j, j] = dist[0, j + 1]
    meter = _Meter(budget)
    for mask in range(1, size):
        meter.tick()
        for j in range(n - 1):
            if not mask >> j & 1:
                continue
            cur = dp[mask, j]
            if not np.isfinite(cur):
                continue
            rest = ~mask & (size - 1)
            k = rest
            while k:
                b = k & -k
                t = b.bit_length() - 1
                nm = mask | b
                cand = cur + dist[j + 1, t + 1]
                if cand < dp[nm, t]:
                    dp[nm, t] = cand
                    parent[nm, t] = j
                k ^= b
    full = size - 1
    closing = dp[full] + dist[1:, 0]
    j = int(np.argmin(closing))
    length = float(closing[j])
    order = [0]
    mask = full
    seq = []
    while j >= 0:
        seq.append(j + 1)
        pj = parent[mask, j]
        mask &= ~(1 << j)
        j = int(pj)
    order.extend(reversed(seq))
    return length, Tour(tuple(order))


# ---------------------------------------------------------------------------
# MaxSAT


def exact_maxsat(f: CnfFormula, budget: OracleBudget = DEFAULT_BUDGET):
    """Exact maximum satisfied-clause count by branch-and-bound."""
    d = f.num_vars
    meter = _Meter(budget)
    clauses = [list(c) for c in f.clauses]
    m = len(clauses)
    best_count = -1
    best_assign = [False] * d
    values = [False] * d

    def count_with(values) -> int:
        sat = 0
        for clause in clauses:
            if any(values[abs(l) - 1] == (l > 0) for l in clause):
                sat += 1
        return sat

    def branch(i: int, falsified: int):
        nonlocal best_count, best_assign
        meter.tick()
        if m - falsified <= best_count:
            return
        if i == d:
            sat = m - falsified
            if sat > best_count:
                best_count = sat
                best_assign = list(values)
            return
        for val in (True, False):
            values[i] = val
            extra = 0
            for clause in clauses:
                undecided = False
                satisfied = False
                for lit in clause:
                    var = abs(lit) - 1
                    if var > i:
                        undecided = True
                    elif values[var] == (lit > 0):
                        satisfied = True
                        break
                if not satisfied and not undecided:
                    extra += 1
            branch(i + 1, extra)

    branch(0, 0)
    return best_count, Assignment(tuple(best_assign))


# ---------------------------------------------------------------------------
# Dispatch helper


def solve_exact(inst: Instance, budget: OracleBudget = DEFAULT_BUDGET):
    """Run the class-appropriate oracle on a full instance.

    Returns (optimum_value, solution) in the class's native objective.
    """
    cls = inst.problem_class
    if cls == "coloring":
        return exact_coloring(inst.data, budget)
    if cls == "mis":
        val, sol = exact_mis(inst.data, budget)
        return float(val), sol
    if cls == "mds":
        val, sol = exact_mds(inst.data, budget)
        return float(val), sol
    if cls == "packing_lp":
        return exact_lp(inst.data, budget)
    if cls == "mdkp":
        return exact_mdkp(inst.data, budget)
    if cls == "tsp":
        return exact_tsp(inst.data, budget)
    if cls == "maxsat":
        val, sol = exact_maxsat(inst.data, budget)
        return float(val), sol
    raise ValueError(f"unknown class {cls}")
