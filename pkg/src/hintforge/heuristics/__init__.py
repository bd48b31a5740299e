"""Heuristic solver pools, one catalog per problem class."""

from __future__ import annotations

from .base import (
    DEFAULT_FAILURE_RUNTIME_MS,
    DiagnosticTrace,
    MeasuredSolver,
    RunMeasurement,
    run_measured,
)
from . import coloring as _coloring
from . import graphs as _graphs
from . import maxsat as _maxsat
from . import packing as _packing
from . import tsp as _tsp

_CATALOGS = {
    "coloring": _coloring.catalog,
    "maxsat": _maxsat.catalog,
    "mis": _graphs.mis_catalog,
    "mds": _graphs.mds_catalog,
    "packing_lp": _packing.lp_catalog,
    "mdkp": _packing.mdkp_catalog,
    "tsp": _tsp.catalog,
}


def catalog(problem_class: str) -> list:
    """All baseline solvers for a problem class, with uniform priors."""
    if problem_class not in _CATALOGS:
        raise KeyError(f"no solver catalog for problem class {problem_class!r}")
    solvers = _CATALOGS[problem_class](prior=1.0)
    prior = 1.0 / len(solvers)
    return [
        MeasuredSolver(s.id, s.problem_class, s.solve, prior) for s in solvers
    ]


__all__ = [
    "DEFAULT_FAILURE_RUNTIME_MS",
    "DiagnosticTrace",
    "MeasuredSolver",
    "RunMeasurement",
    "run_measured",
    "catalog",
]
