import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weighted_zeta import (
    OrientedEdge,
    WeightedGraph,
    dump_graph,
    fixture,
    load_graph,
    parse_graph,
    random_graph,
    validate,
)
from weighted_zeta.errors import GraphFormatError

G3_DOC = {
    "nodes": ["A", "B", "C", "D"],
    "edges": [
        {"id": 0, "src": "A", "dst": "B"},
        {"id": 1, "src": "B", "dst": "C"},
        {"id": 2, "src": "B", "dst": "D"},
        {"id": 3, "src": "C", "dst": "A"},
        {"id": 4, "src": "D", "dst": "A"},
    ],
    "weights": [
        {"from": 0, "to": 1, "w": 1}, {"from": 0, "to": 2, "w": 1},
        {"from": 1, "to": 3, "w": 1}, {"from": 2, "to": 4, "w": 1},
        {"from": 3, "to": 0, "w": 1}, {"from": 4, "to": 0, "w": 1},
    ],
}


def test_fixture_shapes():
    assert len(fixture("G1", 2).edges) == 1
    assert len(fixture("G2", 1, 1).edges) == 2
    assert len(fixture("G3").edges) == 5
    g4 = fixture("G4")
    assert len(g4.edges) == 6
    assert g4.edges[5] == OrientedEdge(5, "A", "A")
    assert g4.weight(5, 0) == Fraction(1, 2)


def test_fixture_string_forms_agree():
    assert fixture("G2(2,3)") == fixture("G2", 2, 3)
    assert fixture("G1", "0.5") == fixture("G1", Fraction(1, 2))


def test_unknown_fixture():
    with pytest.raises(ValueError):
        fixture("G9")


def test_parse_g3_document_matches_fixture():
    g = parse_graph(json.dumps(G3_DOC))
    assert g == fixture("G3")


def test_fixture_files_match_builders():
    import pathlib

    root = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
    assert load_graph(root / "g3.json") == fixture("G3")
    assert load_graph(root / "g4.json") == fixture("G4")
    assert load_graph(root / "g2_2_3.json") == fixture("G2", 2, 3)


def test_validate_ok_stats():
    rep = validate(fixture("G3"))
    assert rep.ok
    assert rep.stats["edges"] == 5
    assert rep.stats["nnz"] == 6
    assert rep.stats["max_valency"] == 3  # A and B each touch three edges


def test_validate_flags_incompatible_pair():
    g = WeightedGraph(("a", "b"), (OrientedEdge(0, "a", "b"), OrientedEdge(1, "a", "b")),
                      {(0, 1): 1})
    rep = validate(g)
    assert not rep.ok
    assert any(v.kind == "incompatible-pair" for v in rep.violations)


def test_validate_flags_negative_and_nonfinite():
    e = (OrientedEdge(0, "v", "v"),)
    assert not validate(WeightedGraph(("v",), e, {(0, 0): -1})).ok
    assert not validate(WeightedGraph(("v",), e, {(0, 0): math.inf})).ok


def _doc(**changes):
    doc = json.loads(json.dumps(G3_DOC))
    doc.update(changes)
    return json.dumps(doc)


@pytest.mark.parametrize("text", [
    _doc(nodes=["A", "A", "C", "D"]),
    _doc(extra=1),
    _doc(weights=G3_DOC["weights"] + [{"from": 0, "to": 1, "w": 2}]),
    _doc(weights=[{"from": 0, "to": 1, "w": -1}]),
    _doc(weights=[{"from": 0, "to": 9, "w": 1}]),
    _doc(edges=[{"id": 1, "src": "A", "dst": "B"}], weights=[]),
    _doc(edges=[{"id": 0, "src": "A", "dst": "Z"}], weights=[]),
])
def test_parse_rejects_bad_documents(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text)


def test_parse_reports_position():
    with pytest.raises(GraphFormatError) as info:
        parse_graph('{"nodes": [\n  "a",, ]}')
    assert info.value.line == 2


def test_zero_weights_do_not_affect_equality():
    g = fixture("G3")
    w = dict(g.weights)
    w[(0, 1)] = 1
    w[(1, 3)] = 1
    padded = WeightedGraph(g.nodes, g.edges, {**w, (3, 0): 1, (4, 0): 1})
    assert padded == g
    assert WeightedGraph(g.nodes, g.edges, {**g.weights, (4, 0): 0}) != g


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_json_round_trip(seed):
    g = random_graph(seed)
    assert parse_graph(dump_graph(g)) == g
    assert validate(g).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_random_graph_respects_composability(seed):
    g = random_graph(seed)
    assert len(g.edges) <= 12
    by_id = {e.id: e for e in g.edges}
    for (e, f), w in g.weights.items():
        assert by_id[e].dst == by_id[f].src
        assert 0 <= w <= 2 and (4 * w).denominator == 1


def test_random_graph_is_seeded():
    assert random_graph(7) == random_graph(7)
