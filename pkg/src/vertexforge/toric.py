"""Generalized toric graphs, toric Calabi-Yau fans, and Gamma-partitions.

A graph is a rotation system: each trivalent vertex lists its three incident
edges counterclockwise.  Every edge is directed tail -> head and carries one
framing ``n_e``; the tail flag has framing ``n_e`` and the head flag ``-n_e``.
Leg edges (one univalent endpoint) are stored explicitly and are never framed.

Graph JSON::

    {"vertices": [{"id": "v1", "rotation": ["e1", "e4", "e2"]}, {"id": "u1"}],
     "edges": [{"id": "e1", "tail": "v3", "head": "v1", "framing": 2,
                "internal": true}, ...]}

Fan JSON::

    {"cones": [[[0,0,1], [1,0,1], [0,1,1]], ...]}
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from math import prod

from .partitions import EMPTY, Partition, conjugate, partitions_of

__all__ = [
    "Vertex",
    "Edge",
    "GTGraph",
    "GraphError",
    "InvalidDegree",
    "Fan",
    "FanError",
    "NotSmooth",
    "NotCalabiYau",
    "NonManifoldFace",
    "ConeOverlap",
    "validate",
    "from_fan",
    "gamma_partitions",
    "vertex_triples",
    "flip_edge",
    "preset",
    "PRESETS",
]


class GraphError(ValueError):
    """Raised with the full list of violated graph invariants."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class InvalidDegree(ValueError):
    """Degree vector not indexed by the internal edges, or with a negative entry."""


class FanError(ValueError):
    pass


class NotSmooth(FanError):
    pass


class NotCalabiYau(FanError):
    pass


class NonManifoldFace(FanError):
    pass


class ConeOverlap(FanError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: str
    rotation: tuple | None = None  # edge ids, counterclockwise; trivalent only


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    framing: int = 0
    internal: bool = True


@dataclass(frozen=True)
class GTGraph:
    vertices: tuple
    edges: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    # --- lookups ---------------------------------------------------------
    def vertex(self, vid) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def edge(self, eid) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(eid)

    def incident(self, vid):
        return [e for e in self.edges if vid in (e.tail, e.head)]

    def valence(self, vid) -> int:
        return sum((e.tail == vid) + (e.head == vid) for e in self.edges)

    @property
    def trivalent(self):
        return [v for v in self.vertices if self.valence(v.id) == 3]

    @property
    def internal_edges(self):
        """E_3: edges whose endpoints are both trivalent, in stored order."""
        tri = {v.id for v in self.trivalent}
        return [e for e in self.edges if e.tail in tri and e.head in tri]

    @property
    def internal_edge_ids(self):
        return [e.id for e in self.internal_edges]

    def components(self):
        """Connected components as lists of vertex ids (stored order)."""
        adj = {v.id: set() for v in self.vertices}
        for e in self.edges:
            adj[e.tail].add(e.head)
            adj[e.head].add(e.tail)
        seen, comps = set(), []
        for v in self.vertices:
            if v.id in seen:
                continue
            stack, comp = [v.id], []
            seen.add(v.id)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in sorted(adj[u]):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            order = {x.id: i for i, x in enumerate(self.vertices)}
            comps.append(sorted(comp, key=order.__getitem__))
        return comps

    # --- JSON --------------------------------------------------------------
    def to_dict(self):
        vs = []
        for v in self.vertices:
            d = {"id": v.id}
            if v.rotation is not None:
                d["rotation"] = list(v.rotation)
            vs.append(d)
        es = [
            {
                "id": e.id,
                "tail": e.tail,
                "head": e.head,
                "framing": e.framing,
                "internal": e.internal,
            }
            for e in self.edges
        ]
        return {"vertices": vs, "edges": es}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data, name=""):
        try:
            vs = tuple(
                Vertex(str(v["id"]), tuple(map(str, v["rotation"])) if v.get("rotation") is not None else None)
                for v in data["vertices"]
            )
            es = tuple(
                Edge(
                    str(e["id"]),
                    str(e["tail"]),
                    str(e["head"]),
                    int(e.get("framing", 0)),
                    bool(e.get("internal", True)),
                )
                for e in data["edges"]
            )
        except (KeyError, TypeError) as exc:
            raise GraphError([f"malformed graph JSON: missing or bad field {exc}"]) from exc
        return cls(vs, es, name=name)

    @classmethod
    def from_json(cls, text, name=""):
        return cls.from_dict(json.loads(text), name=name)

    def check(self):
        problems = validate(self)
        if problems:
            raise GraphError(problems)
        return self


def validate(graph: GTGraph) -> list:
    """List every violated invariant (empty list means the graph is valid).

    Planarity of the rotation system is trusted, not checked.
    """
    problems = []
    vids = [v.id for v in graph.vertices]
    eids = [e.id for e in graph.edges]
    for label, ids in (("vertex", vids), ("edge", eids)):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        if dup:
            problems.append(f"duplicate {label} ids: {dup}")
    known = set(vids)
    for e in graph.edges:
        if e.tail not in known or e.head not in known:
            problems.append(f"edge {e.id}: unknown endpoint")
        if e.tail == e.head:
            problems.append(f"edge {e.id}: self-loop at {e.tail}")
    if problems:
        return problems
    for v in graph.vertices:
        val = graph.valence(v.id)
        if val not in (1, 3):
            problems.append(f"vertex {v.id}: valence {val} (must be 1 or 3)")
            continue
        inc = sorted(e.id for e in graph.incident(v.id))
        if val == 3:
            if v.rotation is None:
                problems.append(f"vertex {v.id}: trivalent vertex without rotation")
            elif sorted(v.rotation) != inc:
                problems.append(
                    f"vertex {v.id}: rotation {list(v.rotation)} does not list incident edges {inc}"
                )
        elif v.rotation is not None:
            problems.append(f"vertex {v.id}: univalent vertex with a rotation")
    if problems:
        return problems
    internal = set(graph.internal_edge_ids)
    for e in graph.edges:
        if e.internal != (e.id in internal):
            problems.append(
                f"edge {e.id}: internal flag {e.internal} disagrees with endpoint valences"
            )
        if e.id not in internal and e.framing != 0:
            problems.append(f"edge {e.id}: leg edge carries framing {e.framing}")
    return problems


def flip_edge(graph: GTGraph, eid) -> GTGraph:
    """Reverse an internal edge and negate its framing (same GT graph)."""
    e = graph.edge(eid)
    if not e.internal:
        raise ValueError(f"edge {eid} is not internal")
    new = replace(e, tail=e.head, head=e.tail, framing=-e.framing)
    return GTGraph(
        graph.vertices, tuple(new if x.id == eid else x for x in graph.edges), graph.name
    )


def gamma_partitions(graph: GTGraph, d):
    """Iterate Gamma-partitions of degree d as tuples aligned with internal_edges."""
    d = tuple(d)
    if len(d) != len(graph.internal_edges):
        raise InvalidDegree(
            f"degree has {len(d)} entries, graph has {len(graph.internal_edges)} internal edges"
        )
    if any(x < 0 for x in d):
        raise InvalidDegree(f"negative degree entry in {d}")
    return itertools.product(*(partitions_of(x) for x in d))


def vertex_triples(graph: GTGraph, lam) -> dict:
    """Per trivalent vertex, the ordered triple fed to the three-point function.

    An edge contributes its partition at its tail and the conjugate at its
    head; legs contribute the empty partition.
    """
    assign = dict(zip(graph.internal_edge_ids, lam))
    ends = {e.id: e for e in graph.edges}
    out = {}
    for v in graph.trivalent:
        triple = []
        for eid in v.rotation:
            p = assign.get(eid)
            if p is None:
                triple.append(EMPTY)
            elif ends[eid].tail == v.id:
                triple.append(Partition(p))
            else:
                triple.append(conjugate(Partition(p)))
        out[v.id] = tuple(triple)
    return out


# --- fans ------------------------------------------------------------------


def _det3(a, b, c):
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def _orient(a, b, c):
    # twice the signed area of the 2D triangle abc
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


@dataclass(frozen=True)
class Fan:
    cones: tuple

    def __post_init__(self):
        object.__setattr__(
            self,
            "cones",
            tuple(tuple(tuple(int(x) for x in g) for g in cone) for cone in self.cones),
        )

    @classmethod
    def from_dict(cls, data):
        return cls(data["cones"])

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {"cones": [[list(g) for g in c] for c in self.cones]}

    def validate(self):
        if not self.cones:
            raise FanError("fan has no 3-cones")
        for i, cone in enumerate(self.cones):
            if len(cone) != 3 or any(len(g) != 3 for g in cone):
                raise FanError(f"cone {i}: need three generators in Z^3")
            for g in cone:
                if g[2] != 1:
                    raise NotCalabiYau(f"cone {i}: generator {list(g)} is not at height 1")
            det = _det3(*cone)
            if abs(det) != 1:
                raise NotSmooth(f"cone {i}: generators have determinant {det}")
        sides = {}
        for i, cone in enumerate(self.cones):
            for a, b in itertools.combinations(cone, 2):
                sides.setdefault(frozenset((a, b)), []).append(i)
        for s, owners in sides.items():
            if len(owners) > 2:
                raise NonManifoldFace(
                    f"segment {sorted(list(g) for g in s)} bounds cones {owners}"
                )
        tris = [[g[:2] for g in c] for c in self.cones]
        for i, j in itertools.combinations(range(len(tris)), 2):
            if not _separated(tris[i], tris[j]):
                raise ConeOverlap(f"cones {i} and {j} overlap")
        return self


def _separated(t1, t2):
    # interiors disjoint iff some edge line weakly separates the two triangles
    for a, b in ((t1, t2), (t2, t1)):
        o = _orient(*a)
        for k in range(3):
            p, r = a[k], a[(k + 1) % 3]
            if all(_orient(p, r, x) * o <= 0 for x in b):
                return True
    return False


def from_fan(fan: Fan) -> GTGraph:
    """Build the (possibly disconnected) toric graph of a toric CY3 fan."""
    fan.validate()
    points, index = [], {}
    for cone in fan.cones:
        for g in cone:
            if g not in index:
                index[g] = len(points)
                points.append(g)
    tris = []
    for cone in fan.cones:
        ids = [index[g] for g in cone]
        a, b, c = (points[i][:2] for i in ids)
        if _orient(a, b, c) < 0:
            ids = [ids[0], ids[2], ids[1]]
        tris.append(ids)  # counterclockwise in the height-1 plane
    sides = {}
    for ti, ids in enumerate(tris):
        for k in range(3):
            s = frozenset((ids[k], ids[(k + 1) % 3]))
            sides.setdefault(s, []).append(ti)
    for s, owners in sides.items():
        if len(owners) > 2:
            raise NonManifoldFace(
                f"segment {[list(points[i]) for i in sorted(s)]} bounds {len(owners)} cones"
            )
    vertices_rot = {ti: [] for ti in range(len(tris))}
    edges, legs, leg_vertices = [], [], []
    side_edge = {}
    internal_sides = [s for s, o in sides.items() if len(o) == 2]
    internal_sides.sort(key=lambda s: (sorted(sides[s]), sorted(s)))
    for n, s in enumerate(internal_sides):
        t1, t2 = sides[s]
        fr = _framing(points, tris[t1], tris[t2], s)
        assert _framing(points, tris[t2], tris[t1], s) == -fr
        if fr < 0:  # orient so the framing is nonnegative
            t1, t2, fr = t2, t1, -fr
        edges.append((f"e{n + 1}", t1, t2, fr))
        side_edge[s] = f"e{n + 1}"
    boundary = [s for s, o in sides.items() if len(o) == 1]
    boundary.sort(key=lambda s: (sides[s], sorted(s)))
    for n, s in enumerate(boundary):
        side_edge[s] = f"l{n + 1}"
        legs.append((f"l{n + 1}", sides[s][0], f"u{n + 1}"))
        leg_vertices.append(f"u{n + 1}")
    for ti, ids in enumerate(tris):
        # the dual edge through side (k, k+1) leaves the triangle through that
        # side, so counterclockwise sides give the counterclockwise rotation
        vertices_rot[ti] = tuple(
            side_edge[frozenset((ids[k], ids[(k + 1) % 3]))] for k in range(3)
        )
    verts = [Vertex(f"v{ti + 1}", vertices_rot[ti]) for ti in range(len(tris))]
    verts += [Vertex(u) for u in leg_vertices]
    es = [Edge(eid, f"v{a + 1}", f"v{b + 1}", fr, True) for eid, a, b, fr in edges]
    es += [Edge(lid, f"v{a + 1}", u, 0, False) for lid, a, u in legs]
    return GTGraph(verts, es, name="from_fan").check()


def _framing(points, tri, tri2, side):
    """Framing of the flag (v_tri, e_side).

    With w1, w2 the shared generators ordered so (w1, w2, w3) is counterclockwise
    and w3' the opposite generator of the neighbour, solve
    w3' = -a1 w1 - a2 w2 - w3; the framing is (a1 - a2) / 2.
    """
    k = next(i for i in range(3) if tri[i] not in side)
    w3 = points[tri[k]]
    w1 = points[tri[(k + 1) % 3]]
    w2 = points[tri[(k + 2) % 3]]
    w3p = points[next(i for i in tri2 if i not in side)]
    det = _det3(w1, w2, w3)
    # Cramer's rule for w3' = c1 w1 + c2 w2 + c3 w3 (det = +-1 by smoothness)
    c1 = _det3(w3p, w2, w3) // det
    c2 = _det3(w1, w3p, w3) // det
    c3 = _det3(w1, w2, w3p) // det
    assert c3 == -1, f"neighbouring cone not across the shared face (c3={c3})"
    a1, a2 = -c1, -c2
    assert a1 + a2 == -2, f"Calabi-Yau relation a1 + a2 = -2 fails ({a1}, {a2})"
    return (a1 - a2) // 2


# --- presets ---------------------------------------------------------------


def conifold(n: int = 0) -> GTGraph:
    """Single internal edge with framing n: O(n-1) + O(-n-1) -> P^1."""
    verts = [
        Vertex("v1", ("e", "l1", "l2")),
        Vertex("v2", ("e", "l3", "l4")),
    ] + [Vertex(f"u{i}") for i in range(1, 5)]
    edges = [
        Edge("e", "v1", "v2", n, True),
        Edge("l1", "v1", "u1", 0, False),
        Edge("l2", "v1", "u2", 0, False),
        Edge("l3", "v2", "u3", 0, False),
        Edge("l4", "v2", "u4", 0, False),
    ]
    return GTGraph(verts, edges, name=f"conifold:{n}")


def cycle(*gammas) -> GTGraph:
    """Cycle of r trivalent vertices; edge e_i carries framing gamma_i + 1.

    e_i runs from v_{i-1} to v_i and v_i sees (e_i, leg, e_{i+1}) counterclockwise.
    """
    r = len(gammas)
    if r < 2:
        raise ValueError("a cycle needs at least two edges")
    verts, edges = [], []
    for i in range(1, r + 1):
        nxt = i % r + 1
        verts.append(Vertex(f"v{i}", (f"e{i}", f"l{i}", f"e{nxt}")))
    verts += [Vertex(f"u{i}") for i in range(1, r + 1)]
    for i, g in enumerate(gammas, start=1):
        prev = (i - 2) % r + 1
        edges.append(Edge(f"e{i}", f"v{prev}", f"v{i}", int(g) + 1, True))
    for i in range(1, r + 1):
        edges.append(Edge(f"l{i}", f"v{i}", f"u{i}", 0, False))
    return GTGraph(verts, edges, name="cycle:" + ",".join(map(str, gammas)))


def flop_f1(b1=2, b2=2, b3=2, b4=0) -> GTGraph:
    """Four trivalent vertices; (2,2,2,0) is the flop of K over F_1."""
    verts = [
        Vertex("v1", ("e1", "e4", "e2")),
        Vertex("v2", ("e2", "e5", "e3")),
        Vertex("v3", ("e3", "e6", "e1")),
        Vertex("v4", ("e7", "e4", "e8")),
    ] + [Vertex(f"u{i}") for i in range(5, 9)]
    edges = [
        Edge("e1", "v3", "v1", b1, True),
        Edge("e2", "v1", "v2", b2, True),
        Edge("e3", "v2", "v3", b3, True),
        Edge("e4", "v1", "v4", b4, True),
        Edge("e5", "v2", "u5", 0, False),
        Edge("e6", "v3", "u6", 0, False),
        Edge("e7", "v4", "u7", 0, False),
        Edge("e8", "v4", "u8", 0, False),
    ]
    return GTGraph(verts, edges, name=f"flopF1:{b1},{b2},{b3},{b4}")


def local_p2() -> GTGraph:
    g = cycle(1, 1, 1)
    return GTGraph(g.vertices, g.edges, name="localP2")


PRESETS = {
    "conifold": "conifold:N  single edge with framing N (default 0)",
    "cycle": "cycle:g1,...,gr  cycle graph with framings g_i + 1",
    "localP2": "localP2  the cycle 1,1,1 (canonical bundle of P^2)",
    "flopF1": "flopF1:b1,b2,b3,b4  four-vertex graph (default 2,2,2,0)",
}


def preset(spec: str) -> GTGraph:
    """Build a preset from ``NAME`` or ``NAME:p1,p2,...``."""
    name, _, params = spec.partition(":")
    args = [int(x) for x in params.split(",") if x.strip()] if params else []
    if name == "conifold":
        if len(args) > 1:
            raise ValueError("conifold takes one framing parameter")
        return conifold(*args).check()
    if name == "cycle":
        return cycle(*args).check()
    if name == "localP2":
        if args:
            raise ValueError("localP2 takes no parameters")
        return local_p2().check()
    if name == "flopF1":
        if args and len(args) != 4:
            raise ValueError("flopF1 takes four parameters")
        return flop_f1(*args).check()
    raise ValueError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")


def degree_count(graph: GTGraph, d) -> int:
    return prod(len(partitions_of(x)) for x in d)
