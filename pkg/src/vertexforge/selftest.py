"""Built-in verification suite behind ``vertexforge selftest``.

Each check returns a ``CheckResult``; the golden three-point values are
written out as explicit coefficient tables so that a bug in the q-number
helpers cannot leak into the expected values.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from math import comb, gcd

from .amplitude import (
    ClassMap,
    aggregate_by_class,
    free_energy,
    gv_table,
    mobius,
    multinomial,
    reconstruct_free_energy,
    z_coefficient,
)
from .partitions import partitions_of
from .qseries import HalfLaurent, QRational
from .symfun import three_point
from .toric import Fan, FanError, NotCalabiYau, NotSmooth, flip_edge, from_fan, preset
from .vevoracle import three_point_oracle

PRESET_SAMPLES = ("conifold:0", "conifold:1", "conifold:-1", "localP2", "cycle:0,2", "flopF1")

LOCAL_P2_FAN = Fan(
    [
        [(0, 0, 1), (1, 0, 1), (0, 1, 1)],
        [(0, 0, 1), (0, 1, 1), (-1, -1, 1)],
        [(0, 0, 1), (-1, -1, 1), (1, 0, 1)],
    ]
)
CONIFOLD_FAN = Fan([[(0, 0, 1), (1, 0, 1), (0, 1, 1)], [(1, 0, 1), (0, 1, 1), (1, 1, 1)]])

# local P^2, sum class map: (beta, genus) -> n, from a separate sympy evaluation
LOCAL_P2_SUM_CLASS = {(1, 0): 3, (2, 0): -6, (3, 0): 27, (3, 1): -10}


def _L(d):
    return HalfLaurent(d)


def golden_three_point():
    """The five worked three-point values, as (triple, expected)."""
    # x = q^(1/2): q - 1 -> {2: 1, 0: -1} etc.
    return [
        (((1,), (), ()), QRational(_L({0: 1}), _L({1: 1, -1: -1}))),
        (((2,), (), ()), QRational(_L({4: 1}), _L({6: 1, 4: -1, 2: -1, 0: 1}))),
        (((1, 1), (), ()), QRational(_L({2: 1}), _L({6: 1, 4: -1, 2: -1, 0: 1}))),
        (((1,), (1,), ()), QRational(_L({4: 1, 2: -1, 0: 1}), _L({4: 1, 2: -2, 0: 1}))),
        (
            ((1,), (1,), (1,)),
            QRational(
                _L({8: 1, 6: -1, 4: 1, 2: -1, 0: 1}),
                _L({7: 1, 5: -3, 3: 3, 1: -1}),
            ),
        ),
    ]


def triples(max_weight):
    ps = [p for d in range(max_weight + 1) for p in partitions_of(d)]
    return itertools.product(ps, repeat=3)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def to_dict(self):
        return {
            "name": self.name,
            "ok": self.ok,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
            "failures": [str(f) for f in self.failures[:10]],
        }


# --- individual checks ----------------------------------------------------------


def check_golden():
    bad = []
    for tr, want in golden_three_point():
        if three_point(*tr) != want:
            bad.append(("three_point", tr))
        if three_point_oracle(*tr) != want:
            bad.append(("oracle", tr))
    return bad, "5 values, two routes"


def check_cyclic(max_weight=3):
    bad, n = [], 0
    for a, b, c in triples(max_weight):
        n += 1
        v = three_point(a, b, c)
        if v != three_point(b, c, a) or v != three_point(c, a, b):
            bad.append((a, b, c))
    return bad, f"{n} triples"


def check_oracle(max_weight=3):
    bad, n = [], 0
    for tr in triples(max_weight):
        n += 1
        if three_point(*tr) != three_point_oracle(*tr):
            bad.append(tr)
    return bad, f"{n} triples"


def closed_form_conifold(n, d):
    """F_d of the framing-n conifold for n in {0, 1}: -+1/(d [d]^2)."""
    sign = -1 if n == 0 else 1
    qd = _L({d: 1, -d: -1})
    return QRational(sign, qd * qd * d)


def check_conifold(framing, total=4):
    g = preset(f"conifold:{framing}")
    F = free_energy(g, total=total)
    bad = [d for d in range(1, total + 1) if F[(d,)] != closed_form_conifold(framing, d)]
    _, table = gv_table(g, F)
    want = {((1,), 0): -1 if framing else 1}
    if table.entries != want:
        bad.append(("gv", table.entries))
    return bad, f"|d| <= {total}"


def check_local_p2(total=3):
    g = preset("localP2")
    F = free_energy(g, total=total)
    _, table = gv_table(g, F)  # raises IntegralityViolation on failure
    agg = aggregate_by_class(table, ClassMap.sum(3))
    got = {(b[0], gg): v for (b, gg), v in agg.entries.items()}
    want = {k: v for k, v in LOCAL_P2_SUM_CLASS.items() if k[0] <= total}
    bad = [] if got == want else [("sum-class table", got)]
    return bad, f"|d| <= {total}, sum class"


def check_invariance(total=3, names=PRESET_SAMPLES):
    bad, n = [], 0
    for name in names:
        g = preset(name)
        F = free_energy(g, total=total)
        _, table = gv_table(g, F)
        flips = [flip_edge(g, e) for e in g.internal_edge_ids]
        for d in F.degrees():
            n += 1
            z = z_coefficient(g, d)
            if z.bar() != z:
                bad.append((name, d, "bar"))
            for e, h in zip(g.internal_edge_ids, flips):
                if z_coefficient(h, d) != z:
                    bad.append((name, d, f"flip {e}"))
            if reconstruct_free_energy(table, d) != F[d]:
                bad.append((name, d, "reconstruct"))
    return bad, f"{n} degrees over {len(names)} presets"


def check_fans():
    bad = []
    g = from_fan(LOCAL_P2_FAN)
    if len(g.internal_edges) != 3 or {e.framing for e in g.internal_edges} != {2}:
        bad.append(("localP2 fan", g.to_dict()))
    c = from_fan(CONIFOLD_FAN)
    if [e.framing for e in c.internal_edges] != [0]:
        bad.append(("conifold fan", c.to_dict()))
    seeded = [
        (Fan([[(0, 0, 1), (2, 0, 1), (0, 1, 1)]]), NotSmooth),
        (Fan([[(0, 0, 1), (1, 0, 1), (1, 2, 1)]]), NotSmooth),
        (Fan([[(0, 0, 2), (1, 0, 1), (0, 1, 1)]]), NotCalabiYau),
    ]
    for fan, err in seeded:
        try:
            fan.validate()
            bad.append(("accepted", fan.cones))
        except FanError as exc:
            if not isinstance(exc, err):
                bad.append(("wrong error", type(exc).__name__))
    return bad, "2 fans, 3 rejections"


def _vectors(max_parts=4, max_size=5):
    for l in range(1, max_parts + 1):
        for n in itertools.product(range(max_size + 1), repeat=l):
            if gcd(*n) == 1:
                yield n


def check_art_divisibility(max_k=5):
    bad, count = [], 0
    for n in _vectors():
        for k in range(1, max_k + 1):
            count += 1
            if multinomial(k, n) % sum(n):
                bad.append((k, n))
    return bad, f"{count} cases"


def check_art_congruence(max_k=5):
    bad, count = [], 0
    for n in _vectors():
        for p, i in itertools.product((2, 3), (1, 2)):
            for k in range(1, max_k + 1):
                if k % p == 0:
                    continue
                count += 1
                m = p**i * sum(n)
                if (multinomial(p**i * k, n) - multinomial(p ** (i - 1) * k, n)) % m:
                    bad.append((p, i, k, n))
    return bad, f"{count} cases"


def _expand_binomial_power(a, b, e):
    # (x1^a + x2^a)^e as {(i, j): coeff}
    return {(a * j, a * (e - j)): comb(e, j) for j in range(e + 1)}


def check_xpb(p=3, b=2):
    lhs = _expand_binomial_power(1, 1, p * b)
    rhs = _expand_binomial_power(p, 1, b)
    bad = []
    for mono in set(lhs) | set(rhs):
        if (lhs.get(mono, 0) - rhs.get(mono, 0)) % p:
            bad.append(mono)
    return bad, f"(x1+x2)^{p * b} vs (x1^{p}+x2^{p})^{b} mod {p}"


def check_mobius_sum(max_k=60):
    bad = []
    for k in range(1, max_k + 1):
        s = sum(mobius(j) for j in range(1, k + 1) if k % j == 0)
        if s != (1 if k == 1 else 0):
            bad.append(k)
    return bad, f"k <= {max_k}"


CHECKS = [
    ("golden three-point values", check_golden),
    ("cyclic symmetry, weights <= 3", check_cyclic),
    ("oracle equivalence, weights <= 3", check_oracle),
    ("conifold n=0 closed form", lambda: check_conifold(0)),
    ("conifold n=1 closed form", lambda: check_conifold(1)),
    ("local P2 integrality and sum-class GV", check_local_p2),
    ("flip / bar / reconstruction invariance", check_invariance),
    ("fan construction and validators", check_fans),
    ("multinomial divisibility", check_art_divisibility),
    ("multinomial congruence", check_art_congruence),
    ("Frobenius power congruence instance", check_xpb),
    ("Moebius summation", check_mobius_sum),
]


def run_all(checks=CHECKS):
    results = []
    for name, fn in checks:
        t0 = time.perf_counter()
        try:
            bad, detail = fn()
            res = CheckResult(name, not bad, detail, failures=list(bad))
        except Exception as exc:  # a crash is a failed check, reported as such
            res = CheckResult(name, False, f"{type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return results
