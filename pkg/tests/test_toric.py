import json

import pytest

from vertexforge.partitions import Partition, partitions_of
from vertexforge.toric import (
    ConeOverlap,
    Edge,
    Fan,
    GraphError,
    GTGraph,
    InvalidDegree,
    NonManifoldFace,
    NotCalabiYau,
    NotSmooth,
    Vertex,
    flip_edge,
    from_fan,
    gamma_partitions,
    preset,
    validate,
    vertex_triples,
)

P2_FAN = Fan(
    [
        [(0, 0, 1), (1, 0, 1), (0, 1, 1)],
        [(0, 0, 1), (0, 1, 1), (-1, -1, 1)],
        [(0, 0, 1), (-1, -1, 1), (1, 0, 1)],
    ]
)
CONIFOLD_FAN = Fan([[(0, 0, 1), (1, 0, 1), (0, 1, 1)], [(1, 0, 1), (0, 1, 1), (1, 1, 1)]])
# local F_0 = P^1 x P^1: four cones around the origin
F0_FAN = Fan(
    [
        [(0, 0, 1), (1, 0, 1), (0, 1, 1)],
        [(0, 0, 1), (0, 1, 1), (-1, 0, 1)],
        [(0, 0, 1), (-1, 0, 1), (0, -1, 1)],
        [(0, 0, 1), (0, -1, 1), (1, 0, 1)],
    ]
)

ALL_PRESETS = ["conifold:0", "conifold:3", "cycle:1,1,1", "cycle:0,0", "localP2", "flopF1", "flopF1:1,-1,0,2"]


@pytest.mark.parametrize("name", ALL_PRESETS)
def test_presets_validate_and_round_trip(name):
    g = preset(name)
    assert validate(g) == []
    assert GTGraph.from_json(g.to_json()) == g
    for e in g.internal_edges:
        # tail flag carries n_e, head flag -n_e
        assert e.framing + (-e.framing) == 0


def test_single_edge_shape():
    g = preset("conifold:0")
    assert len(g.trivalent) == 2 and len(g.vertices) == 6
    assert g.internal_edge_ids == ["e"]


def test_validate_rejects_valence_two_and_self_loop():
    g = GTGraph(
        [Vertex("a"), Vertex("b"), Vertex("c")],
        [Edge("e1", "a", "b", 0, False), Edge("e2", "b", "c", 0, False)],
    )
    assert any("valence 2" in p for p in validate(g))
    h = GTGraph([Vertex("a")], [Edge("e", "a", "a")])
    assert any("self-loop" in p for p in validate(h))
    with pytest.raises(GraphError):
        h.check()


def test_validate_rejects_bad_rotation_and_framed_leg():
    g = preset("conifold:0")
    bad = GTGraph(
        [Vertex("v1", ("e", "l1", "l3"))] + list(g.vertices[1:]),
        [e if e.id != "l2" else Edge("l2", "v1", "u2", 5, False) for e in g.edges],
    )
    problems = validate(bad)
    assert any("rotation" in p for p in problems)
    bad2 = GTGraph(g.vertices, [e if e.id != "l2" else Edge("l2", "v1", "u2", 5, False) for e in g.edges])
    assert any("leg edge carries framing" in p for p in validate(bad2))


def test_gamma_partitions_examples():
    g = preset("conifold:0")
    assert list(gamma_partitions(g, (2,))) == [((2,),), ((1, 1),)]
    t = preset("localP2")
    assert list(gamma_partitions(t, (1, 0, 0))) == [((1,), (), ())]
    f = preset("flopF1")
    d = (3, 2, 0, 4)
    count = 1
    for x in d:
        count *= len(partitions_of(x))
    assert len(list(gamma_partitions(f, d))) == count
    with pytest.raises(InvalidDegree):
        gamma_partitions(t, (1, 0))


def test_vertex_triples_single_edge():
    g = preset("conifold:0")
    tr = vertex_triples(g, [Partition((2,))])
    assert tr["v1"] == ((2,), (), ())
    assert tr["v2"] == ((1, 1), (), ())


def test_vertex_triples_flop():
    g = preset("flopF1")
    l1, l2, l3, l4 = (Partition(p) for p in ((2,), (2, 1), (3,), (1, 1)))
    tr = vertex_triples(g, [l1, l2, l3, l4])
    t = lambda p: p.t
    assert tr["v1"] == (t(l1), l4, l2)
    assert tr["v2"] == (t(l2), (), l3)
    assert tr["v3"] == (t(l3), (), l1)
    assert tr["v4"] == ((), t(l4), ())


def test_vertex_triples_cycle_rule():
    g = preset("cycle:0,1,2")
    lams = [Partition((2,)), Partition((1,)), Partition((3, 1))]
    tr = vertex_triples(g, lams)
    for i in range(3):
        assert tr[f"v{i + 1}"] == (lams[i].t, (), lams[(i + 1) % 3])


def test_flip_edge():
    g = preset("localP2")
    for e in g.internal_edge_ids:
        h = flip_edge(g, e)
        assert h.edge(e).framing == -g.edge(e).framing
        assert (h.edge(e).tail, h.edge(e).head) == (g.edge(e).head, g.edge(e).tail)
        assert flip_edge(h, e) == g
    c = flip_edge(preset("conifold:0"), "e")
    assert c.edge("e").framing == 0 and c.edge("e").tail == "v2"
    with pytest.raises(ValueError):
        flip_edge(g, "l1")


def _cycle_framings(g):
    # framings read along a consistent orientation of the cycle
    return sorted(abs(e.framing) for e in g.internal_edges)


def test_from_fan_local_p2():
    g = from_fan(P2_FAN)
    assert validate(g) == []
    assert len(g.trivalent) == 3 and len(g.internal_edges) == 3
    assert _cycle_framings(g) == [2, 2, 2]
    # orient every edge along the cycle: all framings equal 2
    seen = {}
    v = g.trivalent[0].id
    for _ in range(3):
        e = next(e for e in g.internal_edges if (e.tail == v or e.head == v) and e.id not in seen)
        seen[e.id] = e.framing if e.tail == v else -e.framing
        v = e.head if e.tail == v else e.tail
    assert set(seen.values()) == {2}


def test_from_fan_conifold():
    g = from_fan(CONIFOLD_FAN)
    assert [e.framing for e in g.internal_edges] == [0]
    assert validate(g) == []


def test_from_fan_local_f0():
    g = from_fan(F0_FAN)
    assert validate(g) == []
    # P^1 x P^1: each compact curve has normal bundle O(0) + O(-2), framing +-1
    assert sorted(abs(e.framing) for e in g.internal_edges) == [1, 1, 1, 1]


def test_fan_validators():
    with pytest.raises(NotSmooth):
        Fan([[(0, 0, 1), (2, 0, 1), (0, 1, 1)]]).validate()
    with pytest.raises(NotCalabiYau):
        Fan([[(0, 0, 2), (1, 0, 1), (0, 1, 1)]]).validate()
    with pytest.raises(NonManifoldFace):
        from_fan(
            Fan(
                [
                    [(0, 0, 1), (1, 0, 1), (0, 1, 1)],
                    [(0, 0, 1), (1, 0, 1), (0, -1, 1)],
                    [(0, 0, 1), (1, 0, 1), (1, -1, 1)],
                ]
            )
        )
    with pytest.raises(ConeOverlap):
        Fan([[(0, 0, 1), (1, 0, 1), (0, 1, 1)], [(0, 0, 1), (1, 0, 1), (1, 1, 1)]]).validate()


def test_fan_json_round_trip():
    text = json.dumps(P2_FAN.to_dict())
    assert Fan.from_json(text) == P2_FAN


def test_disconnected_graph_components():
    a, b = preset("conifold:0"), preset("conifold:1")
    ren = lambda g, s: GTGraph(
        [Vertex(v.id + s, tuple(r + s for r in v.rotation) if v.rotation else None) for v in g.vertices],
        [Edge(e.id + s, e.tail + s, e.head + s, e.framing, e.internal) for e in g.edges],
    )
    g = GTGraph(ren(a, "a").vertices + ren(b, "b").vertices, ren(a, "a").edges + ren(b, "b").edges)
    assert validate(g) == []
    assert len(g.components()) == 2
