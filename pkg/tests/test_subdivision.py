import pytest

from diskpattern.coxeter import CoxeterGraph, is_acylindrical
from diskpattern.generators import quad_hub, tetrahedron, wheel
from diskpattern.graph_core import GraphError, edge_key, graph_from_positions
from diskpattern.subdivision import (
    is_acylindrical_subdivision,
    make_subdivision,
    pairs_unlinked,
    subdivision_from_face,
    triangulate,
)

SQUARE = {"A": (-1.0, 0.0), "B": (0.0, 1.0), "C": (1.0, 0.0), "D": (0.0, -1.0)}
RING = [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")]


def pentagon_cell():
    """Square ABCD whose interior holds a pentagonal cell next to two triangles."""
    pos = {**SQUARE, "p": (-0.3, 0.3), "q": (0.3, 0.3), "r": (0.0, -0.4)}
    edges = RING + [("A", "p"), ("p", "q"), ("q", "C"), ("A", "r"), ("r", "C"), ("B", "p"), ("B", "q"), ("D", "r")]
    return make_subdivision(graph_from_positions(pos, edges), ["A", "B", "C", "D"])


def test_quad_hub_subdivision():
    sg = quad_hub()
    assert sg.complexity == 3
    assert len(sg.interior_faces()) == 4
    assert sg.is_triangulation()
    assert sg.interior_vertices() == ["x"]


def test_single_diagonal():
    sg = make_subdivision(graph_from_positions(SQUARE, RING + [("A", "C")]), ["A", "B", "C", "D"])
    assert sg.complexity == 3 and len(sg.interior_faces()) == 2


def test_single_cell_rejected():
    g = graph_from_positions({"A": (0, 0), "B": (1, 0), "C": (0, 1)}, [("A", "B"), ("B", "C"), ("C", "A")])
    with pytest.raises(GraphError, match="2 interior cells"):
        make_subdivision(g, ["A", "B", "C"])


def test_boundary_must_be_a_face():
    with pytest.raises(GraphError):
        make_subdivision(quad_hub().graph, ["A", "B", "C"])


def test_subdivision_from_tetrahedron_face():
    cg = tetrahedron((3, 3, 3))
    sg = subdivision_from_face(cg, ["a", "b", "c"])
    assert sg.interior_vertices() == ["d"]
    assert len(sg.interior_faces()) == 3
    elliptic = tetrahedron((2, 2, 2), (2, 2, 2))
    with pytest.raises(GraphError, match="not hyperbolic"):
        subdivision_from_face(elliptic, ["a", "b", "c"])


def test_acylindrical_subdivision_examples():
    assert is_acylindrical_subdivision(quad_hub(0, 0)) == (True, None)
    sg = quad_hub(0, 0)
    weights = dict(sg.weights)
    weights[edge_key("x", "A")] = 2
    weights[edge_key("x", "C")] = 2
    ok, wit = is_acylindrical_subdivision(sg, weights)
    assert not ok and wit.vertices == ("A", "x", "C")


def test_acylindrical_graph_gives_acylindrical_subdivision():
    sg = wheel(6)
    cg = CoxeterGraph(sg.graph, {e: 3 for e in sg.graph.edges})
    assert is_acylindrical(cg)[0]
    hyp = [f for f in cg.faces() if f.side_count == 6]
    assert is_acylindrical_subdivision(subdivision_from_face(cg, hyp[0]))[0]


def test_triangulate_identity_on_triangulations():
    ext = triangulate(quad_hub())
    assert ext.added_vertices == {}
    assert ext.graph.graph == quad_hub().graph


def test_triangulate_pentagon():
    sg = pentagon_cell()
    assert sg.complexity == 5
    ext = triangulate(sg)
    assert len(ext.added_vertices) == 1
    (hub,) = ext.added_vertices.values()
    assert ext.graph.graph.degree(hub) == 5
    assert ext.graph.is_triangulation()
    assert ext.quotient("A") == "A"
    assert ext.quotient("w0:A", {"w0:A": hub}) == hub


def test_pairs_unlinked():
    hexagon = ["1", "2", "3", "4", "5", "6"]
    assert pairs_unlinked(("1", "4"), ("2", "3"), hexagon)
    assert not pairs_unlinked(("1", "4"), ("3", "6"), hexagon)
    assert pairs_unlinked(("1", "4"), ("1", "4"), hexagon)
