"""Partition function, free energy and Gopakumar-Vafa invariants of a GT graph.

Pipeline: Y over Gamma-partitions -> Z_d -> F = log Z (truncated) ->
Moebius-inverted G_d -> integer polynomial t*G_d in t -> n^g_d.
Degree vectors are tuples aligned with ``graph.internal_edge_ids``.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd, prod

from .partitions import kappa, partitions_of
from .qseries import ONE, ZERO, QRational, TConversionError, qnum, to_t_polynomial
from .symfun import three_point
from .toric import GTGraph, InvalidDegree, gamma_partitions, vertex_triples

__all__ = [
    "IntegralityViolation",
    "DegreeSeries",
    "GVTable",
    "ClassMap",
    "y_amplitude",
    "z_coefficient",
    "z_coefficients",
    "free_energy",
    "degree_box",
    "mobius",
    "divisors",
    "g_invariant",
    "gv_extract",
    "gv_table",
    "reconstruct_free_energy",
    "aggregate_by_class",
    "multinomial",
    "resolve_threads",
]


class IntegralityViolation(ArithmeticError):
    """t*G_d is not an integer polynomial in t: the integrality theorem fails here."""

    def __init__(self, degree, value, reason):
        self.degree = tuple(degree) if degree is not None else None
        self.value = value
        self.reason = reason
        super().__init__(f"degree {self.degree}: {reason}; t*G = {value}")


def resolve_threads(threads=None) -> int:
    if threads is None:
        threads = int(os.environ.get("VERTEXFORGE_THREADS", "1") or 1)
    if threads < 1:
        raise ValueError("thread count must be positive")
    return threads


# --- amplitudes --------------------------------------------------------------


def _edge_factor(framing, lam) -> QRational:
    # (-1)^{|lam|(n+1)} q^{n kappa/2}; q^{kappa/2} = x^kappa
    sign = -1 if (sum(lam) * (framing + 1)) % 2 else 1
    return QRational.monomial(framing * kappa(lam), sign)


def y_amplitude(graph: GTGraph, lam) -> QRational:
    """Y_lambda: edge framing factors times the three-point function at every vertex."""
    lam = tuple(lam)
    edges = graph.internal_edges
    if len(lam) != len(edges):
        raise InvalidDegree(
            f"Gamma-partition has {len(lam)} entries, graph has {len(edges)} internal edges"
        )
    out = ONE
    for e, p in zip(edges, lam):
        if p:
            out = out * _edge_factor(e.framing, p)
    for triple in vertex_triples(graph, lam).values():
        c = three_point(*triple)
        if c.is_zero():
            return ZERO
        out = out * c
    return out


def _sum_chunk(graph, lams):
    acc = ZERO
    for lam in lams:
        acc = acc + y_amplitude(graph, lam)
    return acc


def _chunks(seq, n):
    k = max(1, -(-len(seq) // n))
    return [seq[i : i + k] for i in range(0, len(seq), k)]


def z_coefficients(graph: GTGraph, degrees, threads=None) -> dict:
    """Z_d for each degree in ``degrees``; the zero vector maps to 1.

    With threads > 1 the Gamma-partition sums run in worker processes; partial
    sums are added back in submission order, and exact arithmetic makes the
    result independent of the split.
    """
    threads = resolve_threads(threads)
    degrees = [tuple(d) for d in degrees]
    jobs = []
    for d in degrees:
        lams = list(gamma_partitions(graph, d))
        if not any(d):
            continue
        parts = _chunks(lams, threads) if threads > 1 else [lams]
        jobs.extend((d, c) for c in parts)
    out = {d: (ONE if not any(d) else ZERO) for d in degrees}
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_sum_chunk, graph, c) for _, c in jobs]
            results = [f.result() for f in futures]
    else:
        results = [_sum_chunk(graph, c) for _, c in jobs]
    for (d, _), r in zip(jobs, results):
        out[d] = out[d] + r
    return out


def z_coefficient(graph: GTGraph, d, threads=None) -> QRational:
    """Z_d = sum of Y_lambda over Gamma-partitions of degree d."""
    d = tuple(d)
    return z_coefficients(graph, [d], threads)[d]


# --- series --------------------------------------------------------------------


def degree_box(bound, total=None):
    """All nonzero degree vectors d <= bound componentwise (and |d| <= total)."""
    out = []
    for d in itertools.product(*(range(b + 1) for b in bound)):
        if any(d) and (total is None or sum(d) <= total):
            out.append(d)
    out.sort(key=lambda d: (sum(d), tuple(-x for x in d)))
    return out


@dataclass
class DegreeSeries:
    """Truncated multivariate series in the edge variables Q_e."""

    edges: tuple
    bound: tuple
    coefficients: dict = field(default_factory=dict)
    total: int | None = None

    def __post_init__(self):
        self.edges = tuple(self.edges)
        self.bound = tuple(self.bound)
        for d in self.coefficients:
            if not self.admits(d):
                raise ValueError(f"degree {d} exceeds bound {self.bound}")

    def admits(self, d) -> bool:
        return (
            len(d) == len(self.bound)
            and all(0 <= x <= b for x, b in zip(d, self.bound))
            and (self.total is None or sum(d) <= self.total)
        )

    def __getitem__(self, d):
        d = tuple(d)
        if not self.admits(d):
            raise KeyError(f"degree {d} outside the truncation window")
        return self.coefficients.get(d, ZERO)

    def degrees(self):
        return degree_box(self.bound, self.total)

    def mul(self, other) -> "DegreeSeries":
        out = {}
        for a, x in self.coefficients.items():
            for b, y in other.coefficients.items():
                d = tuple(i + j for i, j in zip(a, b))
                if self.admits(d):
                    out[d] = out.get(d, ZERO) + x * y
        return DegreeSeries(self.edges, self.bound, out, self.total)

    def to_dict(self):
        return {
            "edges": list(self.edges),
            "bound": list(self.bound),
            "total": self.total,
            "coefficients": [
                {"degree": list(d), "value": str(self[d])} for d in self.degrees()
            ],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _resolve_bound(graph, bound, total):
    n = len(graph.internal_edges)
    if bound is None:
        if total is None:
            raise ValueError("need a componentwise bound or a total-degree bound")
        bound = (total,) * n
    bound = tuple(int(b) for b in bound)
    if len(bound) != n:
        raise InvalidDegree(f"bound has {len(bound)} entries, graph has {n} internal edges")
    if any(b < 0 for b in bound) or not any(bound):
        raise ValueError("bound must be nonnegative and not all zero")
    if total is not None and total < 1:
        raise ValueError("total-degree bound must be positive")
    return bound


def partition_series(graph: GTGraph, bound=None, total=None, threads=None) -> DegreeSeries:
    """Z truncated to the window, without the constant term 1."""
    bound = _resolve_bound(graph, bound, total)
    degs = degree_box(bound, total)
    z = z_coefficients(graph, degs, threads)
    return DegreeSeries(graph.internal_edge_ids, bound, {d: z[d] for d in degs}, total)


def free_energy(graph: GTGraph, bound=None, total=None, threads=None, z=None) -> DegreeSeries:
    """F = log(1 + W) = sum_m (-1)^(m-1)/m W^m, truncated to the window."""
    z = z if z is not None else partition_series(graph, bound, total, threads)
    w = DegreeSeries(
        z.edges, z.bound, {d: v for d, v in z.coefficients.items() if not v.is_zero()}, z.total
    )
    top = max((sum(d) for d in w.degrees()), default=0)
    out = dict(w.coefficients)
    power = w
    for m in range(2, top + 1):
        power = power.mul(w)
        if not power.coefficients:
            break
        c = QRational.from_int(Fraction((-1) ** (m - 1), m))
        for d, v in power.coefficients.items():
            out[d] = out.get(d, ZERO) + c * v
    return DegreeSeries(w.edges, w.bound, out, w.total)


# --- Moebius inversion and GV extraction ----------------------------------------


def mobius(k: int) -> int:
    if k < 1:
        raise ValueError("mobius needs k >= 1")
    out, p = 1, 2
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            out = -out
        p += 1
    return -out if k > 1 else out


def divisors(n: int):
    return [k for k in range(1, n + 1) if n % k == 0]


def g_invariant(graph, d, F: DegreeSeries) -> QRational:
    """G_d = sum_{k | gcd(d)} mu(k)/k * F_{d/k}(q^k)."""
    d = tuple(d)
    d0 = gcd(*d)
    acc = ZERO
    for k in divisors(d0):
        mu = mobius(k)
        if mu == 0:
            continue
        f = F[tuple(x // k for x in d)]
        if f.is_zero():
            continue
        acc = acc + QRational.from_int(Fraction(mu, k)) * f.substitute_power(k)
    return acc


def gv_extract(graph, d, G: QRational) -> dict:
    """Genus -> n^g from G = sum_g n^g (-t)^(g-1); raises IntegralityViolation."""
    tg = G * qnum(1) * qnum(1)
    try:
        poly = to_t_polynomial(tg)
    except TConversionError as exc:
        raise IntegralityViolation(d, tg, f"not a polynomial in t ({exc})") from exc
    if not poly.is_integral():
        raise IntegralityViolation(d, poly, "non-integer coefficient in t")
    out = {}
    for g, c in sorted(poly.coefficients.items()):
        if c:
            out[g] = int(c) if g % 2 == 1 else -int(c)
    return out


@dataclass
class GVTable:
    """n^g indexed by (degree or class vector, genus); zero entries are omitted."""

    labels: tuple
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.labels = tuple(self.labels)
        self.entries = {k: v for k, v in self.entries.items() if v}

    def get(self, d, g) -> int:
        return self.entries.get((tuple(d), g), 0)

    def by_degree(self, d) -> dict:
        d = tuple(d)
        return {g: v for (e, g), v in self.entries.items() if e == d}

    def rows(self):
        return sorted(
            ((d, g, v) for (d, g), v in self.entries.items()),
            key=lambda r: (sum(r[0]), tuple(-x for x in r[0]), r[1]),
        )

    def to_dict(self):
        return {
            "labels": list(self.labels),
            "entries": [{"degree": list(d), "genus": g, "n": v} for d, g, v in self.rows()],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(self.labels) + ["genus", "n"])
        for d, g, v in self.rows():
            w.writerow(list(d) + [g, v])
        return buf.getvalue()


def gv_table(graph, F: DegreeSeries) -> tuple:
    """(G by degree, GVTable) for every degree in the window of F."""
    gs, entries = {}, {}
    for d in F.degrees():
        G = g_invariant(graph, d, F)
        gs[d] = G
        for g, v in gv_extract(graph, d, G).items():
            entries[(d, g)] = v
    return gs, GVTable(F.edges, entries)


def t_k(k: int) -> QRational:
    return QRational(qnum(k) * qnum(k))


def reconstruct_free_energy(table: GVTable, d) -> QRational:
    """F_d = sum_g sum_{k | gcd(d)} n^g_{d/k} (-t_k)^(g-1) / k."""
    d = tuple(d)
    if not any(d):
        return ZERO
    acc = ZERO
    for k in divisors(gcd(*d)):
        sub = tuple(x // k for x in d)
        mt = -t_k(k)
        for g, n in table.by_degree(sub).items():
            acc = acc + QRational.from_int(Fraction(n, k)) * mt ** (g - 1)
    return acc


# --- classes -------------------------------------------------------------------


@dataclass(frozen=True)
class ClassMap:
    """Integer matrix sending an edge-degree vector to a class vector."""

    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if not m or len({len(r) for r in m}) != 1:
            raise ValueError("class map must be a nonempty rectangular matrix")
        if any(x < 0 for r in m for x in r):
            raise ValueError("class map entries must be nonnegative")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def sum(cls, n):
        return cls(((1,) * n,))

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(data["matrix"] if isinstance(data, dict) else data)

    @property
    def width(self):
        return len(self.matrix[0])

    def __call__(self, d):
        d = tuple(d)
        if len(d) != self.width:
            raise InvalidDegree(f"class map expects {self.width} entries, got {len(d)}")
        return tuple(sum(a * x for a, x in zip(row, d)) for row in self.matrix)


def aggregate_by_class(obj, cm: ClassMap):
    """Sum a DegreeSeries (-> {class: QRational}) or GVTable over class-map fibers."""
    labels = tuple(f"beta{i + 1}" for i in range(len(cm.matrix)))
    if isinstance(obj, GVTable):
        out = {}
        for (d, g), v in obj.entries.items():
            key = (cm(d), g)
            out[key] = out.get(key, 0) + v
        return GVTable(labels, out)
    if isinstance(obj, DegreeSeries):
        out = {}
        for d in obj.degrees():
            b = cm(d)
            out[b] = out.get(b, ZERO) + obj[d]
        return out
    if isinstance(obj, dict):
        out = {}
        for d, v in obj.items():
            b = cm(d)
            out[b] = out[b] + v if b in out else v
        return out
    raise TypeError(f"cannot aggregate {type(obj).__name__}")


# --- number theory ----------------------------------------------------------


def multinomial(k: int, n) -> int:
    """(k|n|)! / prod (k n_i)!."""
    if k < 1:
        raise ValueError("k must be positive")
    n = list(n)
    return factorial(k * sum(n)) // prod(factorial(k * x) for x in n)
