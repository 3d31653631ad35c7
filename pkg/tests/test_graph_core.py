import json
import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from diskpattern.generators import example_a, random_subdivision, random_triangulation
from diskpattern.graph_core import (
    GraphError,
    PlaneGraph,
    edge_key,
    graph_from_positions,
    is_k_connected,
    parse_document,
    parse_plane_graph,
    serialize_document,
    trace_faces,
)

TRIANGLE = {"vertices": ["A", "B", "C"], "rotation": {"A": ["B", "C"], "B": ["C", "A"], "C": ["A", "B"]}}


def k4():
    pos = {"a": (0, 0), "b": (4, 0), "c": (2, 3), "d": (2, 1)}
    return graph_from_positions(pos, list(combinations("abcd", 2)))


def random_graph(seed):
    rng = random.Random(seed)
    if rng.random() < 0.5:
        return random_triangulation(rng).graph
    return random_subdivision(rng).graph


def test_triangle_document():
    g = parse_plane_graph(TRIANGLE)
    assert len(g.edges) == 3
    faces = trace_faces(g)
    assert len(faces) == 2
    assert all(f.side_count == 3 for f in faces)


def test_k4_faces():
    g = k4()
    assert (len(g.vertices), len(g.edges)) == (4, 6)
    faces = g.faces()
    assert len(faces) == 4 and all(f.side_count == 3 for f in faces)


def test_four_cycle_has_two_quadrilaterals():
    g = graph_from_positions({"A": (0, 0), "B": (1, 0), "C": (1, 1), "D": (0, 1)}, [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")])
    assert sorted(f.side_count for f in g.faces()) == [4, 4]


def test_bounded_face_walk_is_counterclockwise():
    g = graph_from_positions({"A": (0, 0), "B": (1, 0), "C": (0, 1)}, [("A", "B"), ("B", "C"), ("C", "A")])
    assert g.find_face(["A", "B", "C"]) is not None
    assert g.find_face(["A", "B", "C"]).boundary in {("A", "B", "C"), ("B", "C", "A"), ("C", "A", "B")}


@pytest.mark.parametrize(
    "doc, message",
    [
        ({"vertices": ["A", "B"], "rotation": {"A": ["B"], "B": []}}, "asymmetric"),
        ({"vertices": ["A"], "rotation": {"A": ["A"]}}, "self-loop"),
        ({"vertices": ["A", "B", "C"], "rotation": {"A": ["B"], "B": ["A"], "C": []}}, "not connected"),
        ({**TRIANGLE, "colour": "red"}, "unknown fields"),
        ({**TRIANGLE, "weights": [["A", "B", 1]]}, "weight code"),
    ],
)
def test_invalid_documents(doc, message):
    with pytest.raises(GraphError, match=message):
        parse_document(doc)


def test_nonplanar_rotation_rejected():
    # K4 with one rotation reversed has the wrong face count
    g = k4()
    rot = {v: list(g.neighbours(v)) for v in g.vertices}
    rot["d"] = rot["d"][::-1]
    rot["a"] = [rot["a"][1], rot["a"][0], rot["a"][2]]
    with pytest.raises(GraphError, match="Euler"):
        PlaneGraph(g.vertices, rot)


def test_k_connectivity_examples():
    assert is_k_connected(k4(), 3)
    path = graph_from_positions({"A": (0, 0), "B": (1, 0), "C": (2, 0)}, [("A", "B"), ("B", "C")])
    assert not is_k_connected(path, 2)
    bowtie = graph_from_positions(
        {"o": (0, 0), "a": (1, 1), "b": (1, -1), "c": (-1, 1), "d": (-1, -1)},
        [("o", "a"), ("a", "b"), ("b", "o"), ("o", "c"), ("c", "d"), ("d", "o")],
    )
    assert not is_k_connected(bowtie, 2)


def _components_after(g, removed):
    parent = {v: v for v in g.vertices if v not in removed}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in g.edges:
        if u in parent and v in parent:
            parent[find(u)] = find(v)
    return len({find(v) for v in parent})


@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_k_connectivity_matches_union_find_oracle(seed, k):
    rng = random.Random(seed)
    g = random_triangulation(rng, n_boundary=rng.randint(3, 6), n_interior=rng.randint(0, 6)).graph
    if len(g.vertices) > 12 or len(g.vertices) <= k:
        return
    expected = all(_components_after(g, set(rm)) == 1 for size in range(k) for rm in combinations(g.vertices, size))
    assert is_k_connected(g, k) == expected


@given(st.integers(0, 10**6))
def test_euler_and_dart_usage(seed):
    g = random_graph(seed)
    faces = g.faces()
    assert len(g.vertices) - len(g.edges) + len(faces) == 2
    darts = [d for f in faces for d in f.directed_edges()]
    assert len(darts) == len(set(darts)) == 2 * len(g.edges)


@given(st.integers(0, 10**6))
def test_parse_serialize_roundtrip(seed):
    sg = random_subdivision(random.Random(seed))
    doc = serialize_document(sg.graph, sg.weights, sg.boundary)
    again = parse_document(json.dumps(doc))
    assert serialize_document(again.graph, again.weights, again.outer_face) == doc


def test_canonical_edge_key():
    assert edge_key("b", "a") == edge_key("a", "b") == ("a", "b")
    assert all(u < v for u, v in example_a().graph.edges)
