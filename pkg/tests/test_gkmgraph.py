import json

import pytest

from gkmchow import catalog
from gkmchow.errors import SchemaError, UnsupportedSurfaceRelations, ValidationError, WeylClosureExceeded
from gkmchow.gkmgraph import (Edge, GkmGraph, SurfaceRelation, WeylAction, WeylGenerator, canonicalize,
                              components, parse, product, serialize, strata_by_subtorus, to_dict,
                              validate, weyl_group_elements)
from gkmchow.ppmodule import hilbert

P1_DOC = """{
  "torus_rank": 1,
  "vertices": ["0", "inf"],
  "edges": [{"ends": ["0", "inf"], "character": [1]}],
  "loops": [],
  "surface_relations": [],
  "weyl": null
}
"""


def codes(report):
    return [v.code for v in report.violations]


# --- validate ---------------------------------------------------------------

def test_validate_p1_is_clean(p1):
    rep = validate(p1)
    assert rep.ok and rep.violations == [] and rep.warnings == []


def test_validate_zero_character():
    g = GkmGraph(2, ["a", "b"], [Edge(("a", "b"), (0, 0))])
    assert "ZeroCharacter" in codes(validate(g))


def test_validate_unknown_vertex_in_relation():
    g = GkmGraph(1, ["x", "y", "z"], [], [SurfaceRelation.triple_plane("x", "y", "w", (1,))])
    assert "UnknownVertex" in codes(validate(g))


@pytest.mark.parametrize("graph, code", [
    (GkmGraph(0, []), "BadTorusRank"),
    (GkmGraph(1, ["a", "a"]), "DuplicateVertex"),
    (GkmGraph(1, ["a"], [Edge(("a", "a"), (1,))]), "DegenerateEdge"),
    (GkmGraph(2, ["a", "b"], [Edge(("a", "b"), (1,))]), "BadCharacterLength"),
    (GkmGraph(1, ["a", "b", "c"], [], [SurfaceRelation("cubic", ("a", "b", "c"), (1,))]), "UnknownRelationKind"),
    (GkmGraph(1, ["a", "b", "c"], [], [SurfaceRelation("quad_ruled", ("a", "b", "c"), (1,))]), "BadRelationArity"),
    (GkmGraph(1, ["a", "b", "c"], [], [SurfaceRelation.triple_plane("a", "b", "a", (1,))]), "DuplicatePoint"),
])
def test_validate_violations(graph, code):
    assert code in codes(validate(graph))


def test_validate_disconnected_warns():
    rep = validate(GkmGraph(1, ["a", "b"]))
    assert rep.ok and rep.warnings


def test_loops_are_valid_and_connect_nothing():
    g = GkmGraph(1, ["a", "b"], [Edge.loop("a", (2,)), Edge(("a", "b"), (1,))])
    assert validate(g).ok
    assert g.loops and len(g.two_ended) == 1


def test_weyl_validation():
    bad_perm = WeylAction([WeylGenerator({"e0": "e0", "e1": "e0"}, [[-1]])])
    singular = WeylAction([WeylGenerator({"e0": "e1", "e1": "e0"}, [[0]])])
    base = catalog.projective_space(1).graph
    for weyl, code in [(bad_perm, "WeylNotBijection"), (singular, "WeylSingular")]:
        g = GkmGraph(1, base.vertices, base.edges, (), weyl)
        assert code in codes(validate(g))
    # swapping coordinates sends the (1,0) curve to a line no curve has
    swap = WeylAction([WeylGenerator({"e0": "e1", "e1": "e0"}, [[0, 1], [1, 0]])])
    g = GkmGraph(2, base.vertices, [Edge(("e0", "e1"), (1, 0))], (), swap)
    assert "WeylIncompatible" in codes(validate(g))


def test_weyl_closure_bound():
    # rotation-like integer matrix of infinite order
    g = GkmGraph(2, ["a"], [], [], WeylAction([WeylGenerator({"a": "a"}, [[1, 1], [0, 1]])]))
    assert "WeylNotFinite" in codes(validate(g, closure_bound=50))
    with pytest.raises(WeylClosureExceeded):
        weyl_group_elements(g, bound=50)


def test_weyl_group_sizes():
    assert len(weyl_group_elements(catalog.projective_space(1).graph)) == 2
    assert len(weyl_group_elements(catalog.projective_space(2).graph)) == 6
    assert len(weyl_group_elements(catalog.flag_sl3().graph)) == 6


def test_components(hirz, p1):
    assert len(components(GkmGraph(1, ["a", "b", "c"]))) == 3
    assert len(components(p1)) == 1
    assert len(components(hirz)) == 1


# --- product ----------------------------------------------------------------

def test_product_p1_p1(p1):
    g = product(p1, p1)
    assert g.torus_rank == 2 and len(g.vertices) == 4 and len(g.edges) == 4
    chars = sorted(tuple(abs(c) for c in e.character) for e in g.edges)
    assert chars == [(0, 1), (0, 1), (1, 0), (1, 0)]


def test_product_with_point(p1):
    point = GkmGraph(1, ["*"])
    g = product(p1, point)
    assert g.torus_rank == 2 and len(g.vertices) == 2
    assert [e.character for e in g.edges] == [(1, 0)]


def test_product_p2_p1(p1, p2):
    g = product(p2, p1)
    assert len(g.vertices) == 6 and len(g.edges) == 9
    assert validate(g).ok


def test_product_rejects_surface_relations(p1, hirz):
    with pytest.raises(UnsupportedSurfaceRelations):
        product(p1, hirz)


def test_product_symmetry(p1, p2):
    assert hilbert(product(p1, p2), 4).dims == hilbert(product(p2, p1), 4).dims


def test_product_propagates_loops(p1):
    g = GkmGraph(1, ["a"], [Edge.loop("a", (1,))])
    prod = product(g, p1)
    assert len(prod.loops) == 2 and validate(prod).ok


# --- strata -----------------------------------------------------------------

def test_strata_p1_p1(p1):
    rep = strata_by_subtorus(product(p1, p1))
    assert sorted((s.direction, len(s.edges)) for s in rep.strata) == [((0, 1), 2), ((1, 0), 2)]


def test_strata_p2():
    g = GkmGraph(2, ["a", "b", "c"], [Edge(("a", "b"), (1, 0)), Edge(("b", "c"), (0, 1)),
                                       Edge(("a", "c"), (1, -1))])
    rep = strata_by_subtorus(g)
    assert len(rep) == 3 and all(len(s.edges) == 1 for s in rep.strata)


def test_strata_hirzebruch(hirz):
    rep = strata_by_subtorus(hirz)
    assert len(rep) == 1 and rep.strata[0].relations == (0,)


def test_strata_complete(entries):
    for e in entries:
        rep = strata_by_subtorus(e.graph)
        edges = sorted(i for s in rep.strata for i in s.edges)
        rels = sorted(i for s in rep.strata for i in s.relations)
        assert edges == list(range(len(e.graph.edges)))
        assert rels == list(range(len(e.graph.surface_relations)))


def test_strata_merges_sign_and_scale():
    g = GkmGraph(2, ["a", "b", "c"], [Edge(("a", "b"), (2, -2)), Edge(("b", "c"), (-1, 1))])
    assert len(strata_by_subtorus(g)) == 1


# --- serialization ----------------------------------------------------------

def test_parse_p1_document(p1):
    g = parse(P1_DOC)
    assert g.vertices == ("0", "inf") and g.edges == (Edge(("0", "inf"), (1,)),)
    assert serialize(g) == P1_DOC


def test_parse_short_character_is_schema_error():
    doc = json.loads(P1_DOC)
    doc["torus_rank"] = 2
    with pytest.raises(SchemaError) as info:
        parse(json.dumps(doc))
    assert "edges[0].character" in info.value.path


def test_parse_reports_json_line():
    with pytest.raises(SchemaError) as info:
        parse('{\n  "torus_rank": 1,\n  "vertices": [\n}')
    assert info.value.line is not None


def test_parse_rejects_invalid_graph():
    doc = json.loads(P1_DOC)
    doc["edges"][0]["character"] = [0]
    with pytest.raises(ValidationError) as info:
        parse(json.dumps(doc))
    assert "ZeroCharacter" in codes(info.value.report)


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("vertices"),
    lambda d: d.update(torus_rank="one"),
    lambda d: d.update(edges=[{"ends": ["0"], "character": [1]}][:0] + [{"character": [1]}]),
    lambda d: d.update(surface_relations=[{"kind": "triple_plane", "points": "xyz", "root": [1]}]),
])
def test_schema_errors(mutate):
    doc = json.loads(P1_DOC)
    mutate(doc)
    with pytest.raises(SchemaError):
        parse(json.dumps(doc))


def test_round_trip_catalog(entries):
    for e in entries:
        text = serialize(e.graph)
        assert parse(text) == e.graph
        # reorder keys and whitespace: canonical form must not care
        scrambled = json.dumps(dict(reversed(list(to_dict(e.graph).items()))))
        assert serialize(parse(scrambled)) == canonicalize(scrambled) == text


def test_loop_serialization():
    g = GkmGraph(1, ["a", "b"], [Edge(("a", "b"), (1,)), Edge.loop("b", (3,))])
    doc = json.loads(serialize(g))
    assert doc["loops"] == [{"vertex": "b", "character": [3]}]
    assert parse(serialize(g)) == g


def test_weyl_serialization():
    text = serialize(catalog.projective_space(1).graph)
    doc = json.loads(text)
    assert doc["weyl"]["generators"][0]["vertex_perm"] == {"e0": "e1", "e1": "e0"}
    assert doc["weyl"]["generators"][0]["char_matrix"] == [[-1]]
