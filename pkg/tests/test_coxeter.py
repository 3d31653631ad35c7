from fractions import Fraction
from itertools import combinations

import pytest

from diskpattern.coxeter import (
    CoxeterGraph,
    FaceKind,
    apex_weight_test,
    check_realizable,
    classify_faces,
    completion,
    elliptic_connections,
    hat_graph,
    is_acylindrical,
    limit_set_connected,
    right_angled_2_connections,
    topological_complexity,
)
from diskpattern.generators import elliptic_connection_fixture, right_angled_fixture, tetrahedron, wheel
from diskpattern.graph_core import GraphError, edge_key, graph_from_positions, is_k_connected


def triangle(codes):
    g = graph_from_positions({"A": (0, 0), "B": (1, 0), "C": (0, 1)}, [("A", "B"), ("B", "C"), ("C", "A")])
    return CoxeterGraph(g, dict(zip([edge_key("A", "B"), edge_key("B", "C"), edge_key("A", "C")], codes)))


def square(code):
    ring = ["A", "B", "C", "D"]
    g = graph_from_positions({"A": (0, 0), "B": (1, 0), "C": (1, 1), "D": (0, 1)}, list(zip(ring, ring[1:] + ring[:1])))
    return CoxeterGraph(g, {e: code for e in g.edges})


def k4(code):
    g = graph_from_positions({"a": (0, 0), "b": (4, 0), "c": (2, 3), "d": (2, 1)}, list(combinations("abcd", 2)))
    return CoxeterGraph(g, {e: code for e in g.edges}, check_normalization=False)


def prism(triangle_code, other_code=0):
    pos = {"v1": (0, 1), "v2": (-1, -0.6), "v3": (1, -0.6), "a": (0, 0), "b": (0, 5)}
    tri = [("v1", "v2"), ("v2", "v3"), ("v3", "v1")]
    spokes = [(x, v) for x in "ab" for v in ("v1", "v2", "v3")]
    g = graph_from_positions(pos, tri + spokes)
    w = {edge_key(*e): other_code for e in spokes}
    w.update({edge_key(*e): triangle_code for e in tri})
    return CoxeterGraph(g, w, check_normalization=False)


def kinds(cg):
    return sorted(c.kind for c in classify_faces(cg).values())


def test_face_classification_is_exact():
    assert kinds(triangle((2, 3, 7))) == [FaceKind.HYPERBOLIC] * 2
    assert kinds(triangle((2, 4, 4))) == [FaceKind.PARABOLIC] * 2
    assert kinds(triangle((2, 3, 3))) == [FaceKind.ELLIPTIC] * 2
    assert kinds(square(2)) == [FaceKind.PARABOLIC] * 2
    assert classify_faces(triangle((2, 3, 7))).popitem()[1].weight_sum == Fraction(41, 42)


def test_missing_weight_rejected():
    g = triangle((0, 0, 0)).graph
    with pytest.raises(GraphError):
        CoxeterGraph(g, {edge_key("A", "B"): 0})


def test_completion_without_parabolic_quadrilateral_is_identity():
    comp = completion(triangle((2, 3, 7)))
    assert comp.extra_edges == ()
    assert comp.edge_list() == [(u, v, n, "graph") for (u, v), n in sorted(comp.base.weights.items())]


def test_completion_of_right_angled_square_adds_diagonals_once():
    comp = completion(square(2))
    assert len(comp.extra_edges) == 2
    assert {frozenset((e.u, e.v)) for e in comp.extra_edges} == {frozenset("AC"), frozenset("BD")}
    assert len({e.face for e in comp.extra_edges}) == 1
    assert len(comp.extraneous_faces) == 4


def test_completion_is_idempotent():
    comp = completion(square(2))
    assert completion(square(2)).edge_list() == comp.edge_list()


def test_k4_right_angles_satisfies_conditions_but_is_not_classified():
    # no hyperbolic face and fewer than six vertices: outside the characterization
    rep = check_realizable(k4(2))
    assert rep.triangles_ok and rep.quads_ok
    assert rep.verdict == "undecided"


def test_nonfacial_heavy_triangle_is_not_realizable():
    # octahedron-like: the equator triangle of a triangular bipyramid with an
    # extra hyperbolic face forces a non-facial 3-cycle
    pos = {"v1": (0, 1), "v2": (-1, -0.6), "v3": (1, -0.6), "a": (0, 0), "b": (0, 5), "c": (3, 3)}
    tri = [("v1", "v2"), ("v2", "v3"), ("v3", "v1")]
    spokes = [(x, v) for x in "ab" for v in ("v1", "v2", "v3")] + [("c", "b"), ("c", "v3")]
    g = graph_from_positions(pos, tri + spokes)
    w = {edge_key(*e): 0 for e in spokes}
    w.update({edge_key(*e): 2 for e in tri})
    rep = check_realizable(CoxeterGraph(g, w, check_normalization=False))
    assert rep.verdict == "not realizable"
    assert rep.violation["condition"] == "heavy triangle"


def test_prism_condition_one():
    # right-angled spokes keep every face elliptic, so the prism criterion applies
    rep = check_realizable(prism(3, 2))
    assert rep.route == "prism"
    assert rep.prism["triangle_below_pi"] is False
    assert rep.verdict == "not realizable"
    ok = check_realizable(prism(4, 2))
    assert ok.prism["triangle_below_pi"] is True


def test_elliptic_connection_fixture():
    assert len(elliptic_connections(elliptic_connection_fixture(3))) == 1
    assert elliptic_connections(elliptic_connection_fixture(0)) == []
    assert limit_set_connected(elliptic_connection_fixture(0)) == (True, None)
    ok, wit = limit_set_connected(elliptic_connection_fixture(3))
    assert not ok and set(wit.vertices) == {"p0", "p2"}


def test_zero_weights_have_no_connections():
    sg = wheel(5)
    cg = CoxeterGraph(sg.graph, {e: 0 for e in sg.graph.edges})
    assert elliptic_connections(cg) == []
    assert right_angled_2_connections(cg) == []


def test_path_graph_limit_set_disconnected():
    g = graph_from_positions({"A": (0, 0), "B": (1, 0), "C": (2, 0)}, [("A", "B"), ("B", "C")])
    ok, wit = limit_set_connected(CoxeterGraph(g, {e: 0 for e in g.edges}))
    assert not ok and wit.vertices == ("B",)


def test_right_angled_fixture():
    cg = right_angled_fixture()
    paths = right_angled_2_connections(cg)
    assert [w.vertices for w in paths] == [("v1", "x", "v3")]
    ok, wit = is_acylindrical(cg)
    assert not ok and wit.vertices == ("v1", "x", "v3")
    w = dict(cg.weights)
    w[edge_key("x", "v1")] = 3
    assert right_angled_2_connections(CoxeterGraph(cg.graph, w)) == []


def test_apex_weight_test_is_strict():
    cg = tetrahedron((2, 3, 7))
    base = cg.graph.find_face(["a", "b", "c"])
    ok, total, _ = apex_weight_test(cg, base)
    assert ok and total == Fraction(41, 42)
    ok, total, _ = apex_weight_test(tetrahedron((2, 3, 6)), base)
    assert not ok and total == 1


def test_hat_graph_removes_hyperbolic_faces():
    cg = CoxeterGraph(wheel(4).graph, {e: 3 for e in wheel(4).graph.edges})
    # only the outer quadrilateral is hyperbolic
    assert [f.side_count for f in cg.faces_of_kind(FaceKind.HYPERBOLIC)] == [4]
    hat = hat_graph(cg)
    new = set(hat.graph.vertices) - set(cg.graph.vertices)
    assert len(new) == 1
    (hub,) = new
    assert hat.graph.degree(hub) == 4
    assert all(hat.weight(hub, v) == 2 for v in hat.graph.neighbours(hub))
    assert hat.faces_of_kind(FaceKind.HYPERBOLIC) == []
    elliptic_only = CoxeterGraph(k4(2).graph, {e: 2 for e in k4(2).graph.edges}, check_normalization=False)
    assert hat_graph(elliptic_only).graph == elliptic_only.graph


def test_topological_complexity():
    sg = wheel(5)
    cg = CoxeterGraph(sg.graph, {e: 3 for e in sg.graph.edges})
    assert topological_complexity(cg) == 5


def test_three_connected_graphs_have_no_elliptic_connection():
    for k in range(3, 8):
        sg = wheel(k)
        for code in (0, 2, 3):
            cg = CoxeterGraph(sg.graph, {e: code for e in sg.graph.edges}, check_normalization=False)
            assert is_k_connected(cg.graph, 3)
            assert elliptic_connections(cg) == []


def test_acylindrical_hat_graph_is_realizable():
    sg = wheel(6)
    cg = CoxeterGraph(sg.graph, {e: 3 for e in sg.graph.edges})
    ok, _ = is_acylindrical(cg)
    assert ok
    assert check_realizable(hat_graph(cg)).realizable
    bad = right_angled_fixture()
    rep = check_realizable(hat_graph(bad))
    assert rep.realizable is False and not rep.quads_ok
