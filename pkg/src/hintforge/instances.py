"""Problem instances, solutions, and the public/evaluator split.

Seven problem classes share one container: a public payload that solvers may
see, and an evaluator payload (family id, hidden structure, certified
optimum) that never crosses the solver API boundary.  Vertices, variables,
items, and cities are 0-indexed; CNF literals are signed and 1-indexed
(DIMACS convention).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .rng import stream

PROBLEM_CLASSES = ("coloring", "maxsat", "mis", "mds", "packing_lp", "mdkp", "tsp")
GRAPH_CLASSES = ("coloring", "mis", "mds")

LP_TOL = 1e-9


class InstanceError(ValueError):
    """Malformed instance or solution data."""


class UnsupportedClassError(InstanceError):
    """Operation applied to an instance of the wrong problem class."""


# ---------------------------------------------------------------------------
# Domain payloads


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple  # tuple of (u, v) with u < v, sorted, deduplicated

    def __post_init__(self):
        if self.n < 0:
            raise InstanceError("vertex count must be nonnegative")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise InstanceError(f"bad edge ({u},{v}) for n={self.n}")
            if (u, v) in seen:
                raise InstanceError(f"duplicate edge ({u},{v})")
            seen.add((u, v))

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        canon = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
        return Graph(n, tuple(canon))

    def adjacency(self) -> list:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree_multiset(self) -> tuple:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(sorted(deg))


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple  # tuple of tuples of signed 1-indexed literals

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) == 0:
                raise InstanceError("empty clause")
            lits = set(clause)
            for lit in clause:
                if lit == 0 or not (1 <= abs(lit) <= self.num_vars):
                    raise InstanceError(f"literal {lit} out of range")
                if -lit in lits:
                    raise InstanceError(f"clause contains both {lit} and {-lit}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class PackingLpInstance:
    values: tuple  # N nonnegative reals
    usage: tuple  # N rows of r nonnegative reals
    capacities: tuple  # r positive reals

    def __post_init__(self):
        r = len(self.capacities)
        if any(not np.isfinite(c) or c <= 0 for c in self.capacities):
            raise InstanceError("capacities must be finite and strictly positive")
        if len(self.usage) != len(self.values):
            raise InstanceError("usage rows must match values")
        for v in self.values:
            if not np.isfinite(v) or v < 0:
                raise InstanceError("values must be finite and nonnegative")
        for row in self.usage:
            if len(row) != r:
                raise InstanceError("usage row width must match capacities")
            if any(not np.isfinite(u) or u < 0 for u in row):
                raise InstanceError("usage must be finite and nonnegative")

    @property
    def num_items(self) -> int:
        return len(self.values)

    @property
    def num_resources(self) -> int:
        return len(self.capacities)

    def arrays(self):
        return (
            np.asarray(self.values, dtype=float),
            np.asarray(self.usage, dtype=float).reshape(self.num_items, self.num_resources),
            np.asarray(self.capacities, dtype=float),
        )


# MDKP shares the payload shape with Packing LP; solutions are binary.
MdkpInstance = PackingLpInstance


@dataclass(frozen=True)
class TspInstance:
    coords: tuple  # n (x, y) pairs, Euclidean metric

    def __post_init__(self):
        if len(self.coords) < 2:
            raise InstanceError("TSP needs at least 2 cities")
        for x, y in self.coords:
            if not (np.isfinite(x) and np.isfinite(y)):
                raise InstanceError("coordinates must be finite")

    @property
    def n(self) -> int:
        return len(self.coords)

    def distance_matrix(self) -> np.ndarray:
        pts = np.asarray(self.coords, dtype=float)
        diff = pts[:, None, :] - pts[None, :, :]
        return np.sqrt((diff * diff).sum(axis=2))


def tour_length(inst: TspInstance, order) -> float:
    pts = np.asarray(inst.coords, dtype=float)
    idx = np.asarray(order, dtype=int)
    rolled = np.roll(idx, -1)
    seg = pts[idx] - pts[rolled]
    return float(np.sqrt((seg * seg).sum(axis=1)).sum())


# ---------------------------------------------------------------------------
# Solutions (tagged union)


@dataclass(frozen=True)
class Coloring:
    colors: tuple  # color id per vertex


@dataclass(frozen=True)
class Assignment:
    values: tuple  # bool per variable


@dataclass(frozen=True)
class VertexSet:
    vertices: tuple  # sorted, duplicate-free vertex ids

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise InstanceError("vertex set has duplicates")


@dataclass(frozen=True)
class ItemFractions:
    fractions: tuple  # reals in [0, 1]


@dataclass(frozen=True)
class ItemPicks:
    picks: tuple  # bool per item


@dataclass(frozen=True)
class Tour:
    order: tuple  # permutation of the cities


Solution = Coloring | Assignment | VertexSet | ItemFractions | ItemPicks | Tour

SOLUTION_KIND = {
    "coloring": Coloring,
    "maxsat": Assignment,
    "mis": VertexSet,
    "mds": VertexSet,
    "packing_lp": ItemFractions,
    "mdkp": ItemPicks,
    "tsp": Tour,
}


# ---------------------------------------------------------------------------
# Instance container


@dataclass(frozen=True)
class PublicInstance:
    id: str
    problem_class: str
    data: Any  # one of the payload types above

    def __post_init__(self):
        if self.problem_class not in PROBLEM_CLASSES:
            raise InstanceError(f"unknown problem class {self.problem_class!r}")


@dataclass(frozen=True)
class EvaluatorPart:
    family_id: str
    optimum_value: float
    optimum_solution: Optional[Solution] = None
    certification: str = "oracle"  # oracle | planted-certified | planted-uncertified
    hidden: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Instance:
    public: PublicInstance
    evaluator: EvaluatorPart

    @property
    def id(self) -> str:
        return self.public.id

    @property
    def problem_class(self) -> str:
        return self.public.problem_class

    @property
    def data(self):
        return self.public.data


def strip_to_public(inst: Instance) -> PublicInstance:
    """Drop every evaluator-only field."""
    return inst.public


# ---------------------------------------------------------------------------
# Graph relabeling (perturbation diagnostic)


def _relabel_solution(sol: Optional[Solution], perm: np.ndarray) -> Optional[Solution]:
    if sol is None:
        return None
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    if isinstance(sol, Coloring):
        colors = np.asarray(sol.colors)
        return Coloring(tuple(int(c) for c in colors[inv]))
    if isinstance(sol, VertexSet):
        return VertexSet(tuple(sorted(int(perm[v]) for v in sol.vertices)))
    return sol


def relabel_graph(inst: Instance, seed: int, perm=None):
    """Randomly relabel the vertices of a graph-class instance.

    Returns the relabeled instance and the permutation ``perm`` mapping old
    vertex ids to new ones.  The evaluator optimum is preserved.
    """
    if inst.problem_class not in GRAPH_CLASSES:
        raise UnsupportedClassError(
            f"relabel_graph requires a graph class, got {inst.problem_class}"
        )
    g: Graph = inst.data
    if perm is None:
        perm = stream(seed, "relabel", inst.id).permutation(g.n)
    perm = np.asarray(perm, dtype=int)
    new_graph = Graph.from_edges(g.n, ((int(perm[u]), int(perm[v])) for u, v in g.edges))
    ev = inst.evaluator
    new_ev = EvaluatorPart(
        family_id=ev.family_id,
        optimum_value=ev.optimum_value,
        optimum_solution=_relabel_solution(ev.optimum_solution, perm),
        certification=ev.certification,
        hidden=dict(ev.hidden),
    )
    new_pub = PublicInstance(inst.id, inst.problem_class, new_graph)
    return Instance(new_pub, new_ev), perm


# ---------------------------------------------------------------------------
# JSON serialization


def _payload_to_json(problem_class: str, data) -> dict:
    if problem_class in GRAPH_CLASSES:
        return {"n": data.n, "edges": [list(e) for e in data.edges]}
    if problem_class == "maxsat":
        return {"num_vars": data.num_vars, "clauses": [list(c) for c in data.clauses]}
    if problem_class in ("packing_lp", "mdkp"):
        return {
            "values": list(data.values),
            "usage": [list(row) for row in data.usage],
            "capacities": list(data.capacities),
        }
    if problem_class == "tsp":
        return {"coords": [list(p) for p in data.coords]}
    raise UnsupportedClassError(problem_class)


def _payload_from_json(problem_class: str, obj: dict):
    if problem_class in GRAPH_CLASSES:
        return Graph(obj["n"], tuple(tuple(e) for e in obj["edges"]))
    if problem_class == "maxsat":
        return CnfFormula(obj["num_vars"], tuple(tuple(c) for c in obj["clauses"]))
    if problem_class in ("packing_lp", "mdkp"):
        return PackingLpInstance(
            tuple(obj["values"]),
            tuple(tuple(row) for row in obj["usage"]),
            tuple(obj["capacities"]),
        )
    if problem_class == "tsp":
        return TspInstance(tuple(tuple(p) for p in obj["coords"]))
    raise UnsupportedClassError(problem_class)


def _solution_to_json(sol: Optional[Solution]):
    if sol is None:
        return None
    if isinstance(sol, Coloring):
        return {"kind": "coloring", "colors": list(sol.colors)}
    if isinstance(sol, Assignment):
        return {"kind": "assignment", "values": [bool(v) for v in sol.values]}
    if isinstance(sol, VertexSet):
        return {"kind": "vertex_set", "vertices": list(sol.vertices)}
    if isinstance(sol, ItemFractions):
        return {"kind": "item_fractions", "fractions": list(sol.fractions)}
    if isinstance(sol, ItemPicks):
        return {"kind": "item_picks", "picks": [bool(v) for v in sol.picks]}
    if isinstance(sol, Tour):
        return {"kind": "tour", "order": list(sol.order)}
    raise InstanceError(f"unknown solution type {type(sol)!r}")


def _solution_from_json(obj) -> Optional[Solution]:
    if obj is None:
        return None
    kind = obj["kind"]
    if kind == "coloring":
        return Coloring(tuple(obj["colors"]))
    if kind == "assignment":
        return Assignment(tuple(bool(v) for v in obj["values"]))
    if kind == "vertex_set":
        return VertexSet(tuple(obj["vertices"]))
    if kind == "item_fractions":
        return ItemFractions(tuple(obj["fractions"]))
    if kind == "item_picks":
        return ItemPicks(tuple(bool(v) for v in obj["picks"]))
    if kind == "tour":
        return Tour(tuple(obj["order"]))
    raise InstanceError(f"unknown solution kind {kind!r}")


def instance_to_dict(inst: Instance, public_only: bool = False) -> dict:
    out = {
        "id": inst.id,
        "problemClass": inst.problem_class,
        "public": _payload_to_json(inst.problem_class, inst.data),
    }
    if not public_only:
        ev = inst.evaluator
        out["evaluator"] = {
            "familyId": ev.family_id,
            "optimumValue": ev.optimum_value,
            "optimumSolution": _solution_to_json(ev.optimum_solution),
            "certification": ev.certification,
            "hidden": ev.hidden,
        }
    return out


def instance_from_dict(obj: dict) -> Instance:
    pub = PublicInstance(
        obj["id"], obj["problemClass"], _payload_from_json(obj["problemClass"], obj["public"])
    )
    ev = obj.get("evaluator")
    if ev is None:
        raise InstanceError("public-only record cannot be loaded as a full Instance")
    return Instance(
        pub,
        EvaluatorPart(
            family_id=ev["familyId"],
            optimum_value=ev["optimumValue"],
            optimum_solution=_solution_from_json(ev.get("optimumSolution")),
            certification=ev.get("certification", "oracle"),
            hidden=dict(ev.get("hidden", {})),
        ),
    )


def public_from_dict(obj: dict) -> PublicInstance:
    return PublicInstance(
        obj["id"], obj["problemClass"], _payload_from_json(obj["problemClass"], obj["public"])
    )


def to_json(inst: Instance, public_only: bool = False) -> str:
    return json.dumps(instance_to_dict(inst, public_only=public_only), sort_keys=True)


def from_json(text: str) -> Instance:
    return instance_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# DIMACS CNF import/export


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    for clause in f.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> CnfFormula:
    num_vars = 0
    clauses = []
    current: list = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InstanceError(f"bad DIMACS header: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        raise InstanceError("DIMACS clause not terminated by 0")
    return CnfFormula(num_vars, tuple(clauses))
