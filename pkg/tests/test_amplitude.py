import itertools
import json
from fractions import Fraction
from math import factorial, gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vertexforge.amplitude import (
    ClassMap,
    DegreeSeries,
    GVTable,
    IntegralityViolation,
    aggregate_by_class,
    degree_box,
    divisors,
    free_energy,
    g_invariant,
    gv_extract,
    gv_table,
    mobius,
    multinomial,
    partition_series,
    reconstruct_free_energy,
    y_amplitude,
    z_coefficient,
    z_coefficients,
)
from vertexforge.partitions import Partition
from vertexforge.qseries import ONE, ZERO, HalfLaurent, QRational, qnum
from vertexforge.toric import Edge, GTGraph, InvalidDegree, Vertex, flip_edge, preset

t = QRational(qnum(1) * qnum(1))


def inv_t(c=1):
    return QRational(c, qnum(1) * qnum(1))


def test_y_amplitude_examples():
    g = preset("conifold:0")
    assert y_amplitude(g, [Partition((1,))]) == QRational(-1, qnum(1) * qnum(1))
    assert y_amplitude(g, [Partition(())]) == ONE
    p2 = preset("localP2")
    assert y_amplitude(p2, [(1,), (), ()]) == inv_t(-1)
    with pytest.raises(InvalidDegree):
        y_amplitude(p2, [(1,)])


def test_z_coefficient_examples():
    g = preset("conifold:0")
    assert z_coefficient(g, (1,)) == inv_t(-1)
    # both partitions of 2 give 1/([1][2])^2
    d12 = qnum(1) * qnum(2)
    assert z_coefficient(g, (2,)) == QRational(2, d12 * d12)
    q = HalfLaurent({2: 1})
    assert z_coefficient(g, (2,)) == QRational(2 * q**3, (q - 1) ** 2 * (q * q - 1) ** 2)
    with pytest.raises(InvalidDegree):
        z_coefficient(g, (1, 1))
    with pytest.raises(InvalidDegree):
        z_coefficient(g, (-1,))


@pytest.mark.parametrize("n,sign", [(0, -1), (1, 1)])
def test_conifold_closed_form(n, sign):
    g = preset(f"conifold:{n}")
    F = free_energy(g, bound=(6,))
    for d in range(1, 7):
        assert F[(d,)] == QRational(sign, qnum(d) * qnum(d) * d)


def test_free_energy_degree_one_equals_z():
    g = preset("localP2")
    F = free_energy(g, total=2)
    for d in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
        assert F[d] == z_coefficient(g, d)


def _multiplicity_log(z, d):
    """log Z at Q^d by summing over multisets of degrees (the expansion with
    |n|!/prod n_delta! * (-1)^(|n|-1)/|n|)."""
    degs = [e for e in z if all(a <= b for a, b in zip(e, d))]
    acc = ZERO

    def rec(i, rest, counts):
        nonlocal acc
        if not any(rest):
            n = sum(counts.values())
            if n == 0:
                return
            coef = Fraction(factorial(n), prod(factorial(c) for c in counts.values()))
            coef *= Fraction((-1) ** (n - 1), n)
            term = QRational.from_int(coef)
            for e, c in counts.items():
                term = term * z[e] ** c
            acc = acc + term
            return
        if i == len(degs):
            return
        e = degs[i]
        c = 0
        r = rest
        while all(a >= 0 for a in r):
            if c:
                counts[e] = c
            rec(i + 1, r, counts)
            counts.pop(e, None)
            c += 1
            r = tuple(a - b for a, b in zip(r, e))

    rec(0, tuple(d), {})
    return acc


@pytest.mark.parametrize("name", ["localP2", "flopF1", "cycle:0,2"])
def test_log_matches_multiplicity_expansion(name):
    g = preset(name)
    F = free_energy(g, total=2)
    z = {d: z_coefficient(g, d) for d in F.degrees()}
    for d in F.degrees():
        assert F[d] == _multiplicity_log(z, d)


def test_window_consistency():
    g = preset("localP2")
    boxed = free_energy(g, bound=(2, 1, 1))
    graded = free_energy(g, total=4)
    for d in boxed.degrees():
        assert boxed[d] == graded[d]
    assert (3, 0, 0) not in boxed.degrees()


def test_mobius_and_divisors():
    assert (mobius(1), mobius(4), mobius(6)) == (1, 0, 1)
    assert [mobius(k) for k in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


@pytest.mark.parametrize("k", range(1, 61))
def test_mobius_sum(k):
    assert sum(mobius(j) for j in divisors(k)) == (1 if k == 1 else 0)


def test_g_invariant_examples():
    g = preset("conifold:0")
    F = free_energy(g, total=4)
    assert g_invariant(g, (1,), F) == inv_t(-1)
    assert g_invariant(g, (2,), F).is_zero()
    p2 = preset("localP2")
    Fp = free_energy(p2, total=3)
    assert g_invariant(p2, (2, 1, 0), Fp) == Fp[(2, 1, 0)]


def test_gv_extract_examples():
    assert gv_extract(None, (1,), inv_t(-1)) == {0: 1}
    assert gv_extract(None, (1,), ZERO) == {}
    assert gv_extract(None, (1,), inv_t(-3) + QRational.from_int(2)) == {0: 3, 1: 2}
    # (-t)^(g-1) basis: n^2 t contributes with sign (-1)^1
    assert gv_extract(None, (1,), QRational.from_int(-5) * t) == {2: 5}


@pytest.mark.parametrize(
    "value",
    [inv_t(Fraction(1, 2)), QRational(1, qnum(1) ** 4), QRational(qnum(1), qnum(1) * qnum(1)), QRational(1, qnum(3))],
)
def test_gv_extract_rejects_non_integral(value):
    with pytest.raises(IntegralityViolation) as info:
        gv_extract(None, (7,), value)
    assert info.value.degree == (7,)


def test_reconstruct_examples():
    table = GVTable(("e",), {((1,), 0): 1})
    assert reconstruct_free_energy(table, (1,)) == inv_t(-1)
    d2 = qnum(2) * qnum(2)
    assert reconstruct_free_energy(table, (2,)) == QRational(-1, d2 * 2)
    assert reconstruct_free_energy(GVTable(("e",)), (3,)).is_zero()


def test_class_aggregation():
    p2 = preset("localP2")
    F = free_energy(p2, total=3)
    _, table = gv_table(p2, F)
    same = aggregate_by_class(table, ClassMap.identity(3))
    assert same.entries == table.entries
    agg = aggregate_by_class(table, ClassMap.sum(3))
    assert agg.get((1,), 0) == 3
    assert aggregate_by_class(GVTable(("a", "b")), ClassMap.sum(2)).entries == {}
    series = aggregate_by_class(F, ClassMap.sum(3))
    assert series[(1,)] == inv_t(-3)


def test_class_map_validation():
    with pytest.raises(ValueError):
        ClassMap([[1, -1]])
    with pytest.raises(ValueError):
        ClassMap([[1, 1], [1]])
    assert ClassMap.from_json("[[1, 2, 0]]")((1, 1, 5)) == (3,)
    assert ClassMap.from_json('{"matrix": [[1, 0], [0, 1]]}')((2, 3)) == (2, 3)


def test_multinomial_examples():
    assert multinomial(1, (1, 1)) == 2
    assert multinomial(2, (1, 1)) == 6
    assert multinomial(1, (2, 1)) == 3


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=5), st.integers(1, 6))
def test_multinomial_divisibility(n, k):
    if gcd(*n) != 1:
        return
    assert multinomial(k, n) % sum(n) == 0


@pytest.mark.parametrize("name", ["conifold:2", "localP2", "flopF1"])
def test_bar_and_flip_invariance(name):
    g = preset(name)
    for d in degree_box((2,) * len(g.internal_edges), 2):
        z = z_coefficient(g, d)
        assert z.bar() == z
        for e in g.internal_edge_ids:
            assert z_coefficient(flip_edge(g, e), d) == z


def _two_conifolds(n1, n2):
    def ren(g, s):
        return (
            [Vertex(v.id + s, tuple(r + s for r in v.rotation) if v.rotation else None) for v in g.vertices],
            [Edge(e.id + s, e.tail + s, e.head + s, e.framing, e.internal) for e in g.edges],
        )

    va, ea = ren(preset(f"conifold:{n1}"), "a")
    vb, eb = ren(preset(f"conifold:{n2}"), "b")
    return GTGraph(va + vb, ea + eb).check()


def test_disconnected_graph_is_product():
    g = _two_conifolds(0, 1)
    za, zb = preset("conifold:0"), preset("conifold:1")
    for a, b in itertools.product(range(3), repeat=2):
        if a or b:
            want = (z_coefficient(za, (a,)) if a else ONE) * (z_coefficient(zb, (b,)) if b else ONE)
            assert z_coefficient(g, (a, b)) == want
    F = free_energy(g, total=3)
    _, table = gv_table(g, F)
    assert table.entries == {((1, 0), 0): 1, ((0, 1), 0): -1}


def test_parallel_sum_matches_serial():
    g = preset("flopF1")
    degs = degree_box((2, 2, 2, 2), 3)
    assert z_coefficients(g, degs, threads=3) == z_coefficients(g, degs, threads=1)


def test_serialization():
    g = preset("conifold:0")
    F = free_energy(g, total=2)
    doc = json.loads(F.to_json())
    assert doc["edges"] == ["e"] and [c["degree"] for c in doc["coefficients"]] == [[1], [2]]
    _, table = gv_table(g, F)
    assert table.to_csv() == "e,genus,n\n1,0,1\n"
    assert json.loads(table.to_json())["entries"] == [{"degree": [1], "genus": 0, "n": 1}]
    with pytest.raises(KeyError):
        F[(3,)]
    with pytest.raises(ValueError):
        DegreeSeries(("e",), (1,), {(2,): ONE})


def test_partition_series_rejects_bad_bounds():
    g = preset("localP2")
    with pytest.raises(InvalidDegree):
        partition_series(g, bound=(1, 1))
    with pytest.raises(ValueError):
        partition_series(g, bound=(0, 0, 0))
    with pytest.raises(ValueError):
        partition_series(g)
