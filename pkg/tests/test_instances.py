import json

import pytest
from hypothesis import given, strategies as st

from hintforge.instances import (
    Assignment,
    CnfFormula,
    Coloring,
    EvaluatorPart,
    Graph,
    Instance,
    InstanceError,
    PackingLpInstance,
    PublicInstance,
    TspInstance,
    UnsupportedClassError,
    VertexSet,
    from_dimacs,
    from_json,
    instance_to_dict,
    relabel_graph,
    strip_to_public,
    to_dimacs,
    to_json,
    tour_length,
)


def test_graph_from_edges_canonicalizes():
    g = Graph.from_edges(4, [(1, 0), (0, 1), (2, 3), (3, 3)])
    assert g.edges == ((0, 1), (2, 3))


def test_graph_rejects_bad_edges():
    with pytest.raises(InstanceError):
        Graph(3, ((0, 3),))
    with pytest.raises(InstanceError):
        Graph(3, ((1, 0),))
    with pytest.raises(InstanceError):
        Graph(3, ((0, 1), (0, 1)))


def test_cnf_rejects_tautology_and_empty_clause():
    with pytest.raises(InstanceError):
        CnfFormula(2, ((1, -1),))
    with pytest.raises(InstanceError):
        CnfFormula(2, ((),))
    with pytest.raises(InstanceError):
        CnfFormula(2, ((3,),))


def test_packing_validation():
    with pytest.raises(InstanceError):
        PackingLpInstance((1.0,), ((1.0,),), (0.0,))
    with pytest.raises(InstanceError):
        PackingLpInstance((-1.0,), ((1.0,),), (1.0,))
    with pytest.raises(InstanceError):
        PackingLpInstance((1.0,), ((1.0, 2.0),), (1.0,))


def test_vertex_set_rejects_duplicates():
    with pytest.raises(InstanceError):
        VertexSet((1, 1))


def test_tour_length_closed():
    tsp = TspInstance(((0.0, 0.0), (3.0, 0.0), (3.0, 4.0)))
    # 3 + 4 + 5: the tour closes back to the start.
    assert tour_length(tsp, [0, 1, 2]) == pytest.approx(12.0)


def _coloring_instance():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    return Instance(
        PublicInstance("t-1", "coloring", g),
        EvaluatorPart("fam", 2.0, Coloring((0, 1, 0)), "oracle", {"k": 2}),
    )


def test_json_round_trip():
    inst = _coloring_instance()
    text = to_json(inst)
    back = from_json(text)
    assert back == inst
    payload = json.loads(text)
    assert set(payload) == {"id", "problemClass", "public", "evaluator"}


def test_public_only_serialization_drops_evaluator():
    inst = _coloring_instance()
    payload = instance_to_dict(inst, public_only=True)
    assert "evaluator" not in payload
    assert payload["public"] == {"n": 3, "edges": [[0, 1], [1, 2]]}


def test_strip_to_public():
    inst = _coloring_instance()
    pub = strip_to_public(inst)
    assert isinstance(pub, PublicInstance)
    assert not hasattr(pub, "evaluator")


def test_dimacs_round_trip():
    f = CnfFormula(3, ((1, -2), (-1, 2, 3)))
    text = to_dimacs(f)
    assert text.splitlines()[0] == "p cnf 3 2"
    assert from_dimacs(text) == f


def test_dimacs_ignores_comments():
    f = from_dimacs("c a comment\np cnf 2 1\n1 -2 0\n")
    assert f == CnfFormula(2, ((1, -2),))


def test_relabel_preserves_structure_and_optimum():
    inst = _coloring_instance()
    relabeled, perm = relabel_graph(inst, seed=5)
    assert relabeled.evaluator.optimum_value == inst.evaluator.optimum_value
    assert relabeled.data.degree_multiset() == inst.data.degree_multiset()
    # The relabeled planted coloring stays proper.
    colors = relabeled.evaluator.optimum_solution.colors
    assert all(colors[u] != colors[v] for u, v in relabeled.data.edges)


def test_relabel_vertex_set_maps_through_permutation():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    inst = Instance(
        PublicInstance("t-2", "mis", g),
        EvaluatorPart("fam", 2.0, VertexSet((0, 2))),
    )
    relabeled, perm = relabel_graph(inst, seed=9)
    expected = tuple(sorted(int(perm[v]) for v in (0, 2)))
    assert relabeled.evaluator.optimum_solution.vertices == expected


def test_relabel_rejects_non_graph():
    inst = Instance(
        PublicInstance("t-3", "maxsat", CnfFormula(1, ((1,),))),
        EvaluatorPart("fam", 1.0, Assignment((True,))),
    )
    with pytest.raises(UnsupportedClassError):
        relabel_graph(inst, seed=0)


@given(
    st.integers(min_value=2, max_value=8).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(
                st.tuples(
                    st.integers(0, n - 1), st.integers(0, n - 1)
                ).filter(lambda e: e[0] != e[1]),
                max_size=12,
            ),
        )
    )
)
def test_graph_json_round_trip_property(n_and_edges):
    n, edges = n_and_edges
    g = Graph.from_edges(n, edges)
    inst = Instance(
        PublicInstance("prop", "mis", g), EvaluatorPart("fam", 1.0, None)
    )
    assert from_json(to_json(inst)) == inst
