import pytest

from hintforge.instances import (
    Assignment,
    CnfFormula,
    Coloring,
    EvaluatorPart,
    Graph,
    Instance,
    InstanceError,
    ItemFractions,
    ItemPicks,
    PackingLpInstance,
    PublicInstance,
    Tour,
    TspInstance,
    VertexSet,
)
from hintforge.scoring import (
    EvaluationError,
    count_satisfied,
    optimality_rate,
    quality,
    raw_objective,
    verify,
)


def _inst(problem_class, data, optimum, family="fam"):
    return Instance(
        PublicInstance("i", problem_class, data),
        EvaluatorPart(family, float(optimum)),
    )


# ---------------------------------------------------------------------------
# Coloring: quality = chi / colors_used


def test_coloring_quality_ratio():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    inst = _inst("coloring", g, 2)
    assert quality(inst, Coloring((0, 1, 0, 1))).quality == 1.0
    r = quality(inst, Coloring((0, 1, 2, 0)))
    assert r.quality == pytest.approx(2 / 3)
    assert not r.optimal


def test_coloring_improper_is_infeasible():
    g = Graph.from_edges(2, [(0, 1)])
    inst = _inst("coloring", g, 2)
    r = quality(inst, Coloring((0, 0)))
    assert not r.feasible and r.quality == 0.0


# ---------------------------------------------------------------------------
# MaxSAT: quality = sat / sat_opt; duplicates count separately


def test_count_satisfied_duplicates():
    f = CnfFormula(2, ((1,), (1,), (-2,)))
    assert count_satisfied(f, [True, True]) == 2
    assert count_satisfied(f, [True, False]) == 3


def test_maxsat_quality():
    f = CnfFormula(2, ((1, 2), (-1,), (2,)))
    inst = _inst("maxsat", f, 3)
    assert quality(inst, Assignment((False, True))).quality == 1.0
    assert quality(inst, Assignment((True, False))).quality == pytest.approx(1 / 3)


def test_maxsat_wrong_length_infeasible():
    f = CnfFormula(2, ((1,),))
    inst = _inst("maxsat", f, 1)
    assert not verify(inst, Assignment((True,)))


# ---------------------------------------------------------------------------
# MIS / MDS


def test_mis_quality_and_independence():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    inst = _inst("mis", g, 2)
    assert quality(inst, VertexSet((0, 2))).quality == 1.0
    assert quality(inst, VertexSet((0,))).quality == 0.5
    assert not verify(inst, VertexSet((0, 1)))


def test_mds_quality_is_opt_over_size():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    inst = _inst("mds", g, 1)
    assert quality(inst, VertexSet((0,))).quality == 1.0
    r = quality(inst, VertexSet((0, 1)))
    assert r.quality == pytest.approx(0.5)
    assert not verify(inst, VertexSet((1,)))  # vertex 2,3 undominated


# ---------------------------------------------------------------------------
# Packing LP / MDKP


def _lp():
    return PackingLpInstance((3.0, 2.0), ((1.0,), (1.0,)), (1.5,))


def test_lp_quality_relative():
    inst = _inst("packing_lp", _lp(), 4.0)  # x = (1, 0.5)
    r = quality(inst, ItemFractions((1.0, 0.5)))
    assert r.quality == pytest.approx(1.0)
    assert r.optimal
    r2 = quality(inst, ItemFractions((1.0, 0.0)))
    assert r2.quality == pytest.approx(0.75)
    assert not r2.optimal


def test_lp_overpacked_infeasible():
    inst = _inst("packing_lp", _lp(), 4.0)
    assert not verify(inst, ItemFractions((1.0, 1.0)))
    assert not verify(inst, ItemFractions((1.5, 0.0)))


def test_mdkp_exact_capacity_feasibility():
    mdkp = PackingLpInstance((5.0, 4.0), ((2.0,), (2.0,)), (2.0,))
    inst = _inst("mdkp", mdkp, 5.0)
    assert quality(inst, ItemPicks((True, False))).quality == 1.0
    assert not verify(inst, ItemPicks((True, True)))


# ---------------------------------------------------------------------------
# TSP: quality = len_opt / len_alg


def test_tsp_quality():
    tsp = TspInstance(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)))
    inst = _inst("tsp", tsp, 4.0)
    assert quality(inst, Tour((0, 1, 2, 3))).optimal
    r = quality(inst, Tour((0, 2, 1, 3)))
    assert r.quality < 1.0
    assert not verify(inst, Tour((0, 1, 1, 3)))


def test_quality_clamped_to_unit_interval():
    # A stored reference value above the true optimum can only deflate
    # quality, never push it past 1.
    tsp = TspInstance(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)))
    inst = _inst("tsp", tsp, 5.0)
    assert quality(inst, Tour((0, 1, 2, 3))).quality == 1.0


# ---------------------------------------------------------------------------
# Shared conventions


def test_nonpositive_optimum_raises():
    g = Graph.from_edges(2, [(0, 1)])
    inst = _inst("coloring", g, 0)
    with pytest.raises(EvaluationError):
        quality(inst, Coloring((0, 1)))


def test_wrong_solution_kind_raises():
    g = Graph.from_edges(2, [(0, 1)])
    inst = _inst("coloring", g, 2)
    with pytest.raises(InstanceError):
        verify(inst, VertexSet((0,)))


def test_raw_objective_directions():
    g = Graph.from_edges(3, [(0, 1)])
    assert raw_objective(_inst("coloring", g, 2), Coloring((0, 1, 0))) == 2.0
    assert raw_objective(_inst("mis", g, 2), VertexSet((1, 2))) == 2.0


def test_optimality_rate():
    g = Graph.from_edges(2, [(0, 1)])
    inst = _inst("coloring", g, 2)
    results = [
        quality(inst, Coloring((0, 1))),
        quality(inst, Coloring((0, 0))),
    ]
    assert optimality_rate(results) == 0.5
    with pytest.raises(EvaluationError):
        optimality_rate([])
