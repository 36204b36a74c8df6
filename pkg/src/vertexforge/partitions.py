"""Partitions, symmetric-group characters and power sums at q^(lambda+rho)."""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from .qseries import HalfLaurent, QRational, qnum

__all__ = [
    "Partition",
    "WeightMismatch",
    "ZeroIndex",
    "conjugate",
    "kappa",
    "z_lambda",
    "partitions_of",
    "union",
    "scale",
    "mn_character",
    "power_sum_principal",
]

EMPTY: "Partition"


class WeightMismatch(ValueError):
    pass


class ZeroIndex(ValueError):
    pass


class Partition(tuple):
    """A weakly decreasing tuple of positive integers (the empty tuple allowed).

    Behaves as a plain tuple for hashing and comparison, so partitions can be
    used directly as dict keys and sorted.
    """

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def _trusted(cls, parts):
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicities(self):
        return Counter(self)

    def conjugate(self) -> "Partition":
        return conjugate(self)

    @property
    def t(self) -> "Partition":
        return conjugate(self)

    def contains(self, other) -> bool:
        """Diagram inclusion other <= self."""
        return len(other) <= len(self) and all(a >= b for a, b in zip(self, other))

    def __repr__(self):
        return f"Partition({list(self)})"

    def __str__(self):
        return "(" + ",".join(map(str, self)) + ")" if self else "()"


EMPTY = Partition()


@lru_cache(maxsize=None)
def conjugate(lam) -> Partition:
    if not lam:
        return EMPTY
    return Partition._trusted(
        tuple(sum(1 for p in lam if p >= i) for i in range(1, lam[0] + 1))
    )


def kappa(lam) -> int:
    """kappa(lambda) = sum_i lambda_i (lambda_i - 2i + 1), twice the content sum."""
    return sum(p * (p - 2 * i + 1) for i, p in enumerate(lam, start=1))


def z_lambda(lam) -> int:
    """Centralizer order: product of parts times prod_k m_k!."""
    return prod(lam) * prod(factorial(m) for m in Counter(lam).values())


@lru_cache(maxsize=None)
def partitions_of(d: int) -> tuple:
    """All partitions of d in reverse-lexicographic order, e.g. (3), (2,1), (1,1,1)."""
    if d < 0:
        raise ValueError("d must be nonnegative")

    def gen(n, cap):
        if n == 0:
            yield ()
            return
        for first in range(min(n, cap), 0, -1):
            for rest in gen(n - first, first):
                yield (first,) + rest

    return tuple(Partition._trusted(p) for p in gen(d, d))


def union(mu, nu) -> Partition:
    return Partition._trusted(tuple(sorted(mu + nu, reverse=True)))


def scale(mu, k: int) -> Partition:
    if k < 1:
        raise ValueError("scale factor must be positive")
    return Partition._trusted(tuple(k * p for p in mu))


def _beta(lam):
    n = len(lam)
    return tuple(p + n - 1 - i for i, p in enumerate(lam))


def _from_beta(beta):
    b = sorted(beta, reverse=True)
    n = len(b)
    parts = [x - (n - 1 - i) for i, x in enumerate(b)]
    return tuple(p for p in parts if p > 0)


@lru_cache(maxsize=None)
def _mn(lam, mu):
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    beta = _beta(lam)
    occupied = set(beta)
    total = 0
    for b in beta:
        if b - r < 0 or (b - r) in occupied:
            continue
        # removing a rim hook of length r = sliding bead b down to b - r;
        # its leg length is the number of beads jumped over
        height = sum(1 for c in beta if b - r < c < b)
        new = _from_beta(tuple(c if c != b else b - r for c in beta))
        total += (-1) ** height * _mn(new, rest)
    return total


def mn_character(lam, mu) -> int:
    """Irreducible character chi^lambda evaluated at cycle type mu (Murnaghan-Nakayama)."""
    if sum(lam) != sum(mu):
        raise WeightMismatch(f"|{tuple(lam)}| != |{tuple(mu)}|")
    return _mn(tuple(lam), tuple(sorted(mu, reverse=True)))


@lru_cache(maxsize=None)
def power_sum_principal(i: int, lam) -> QRational:
    """p_i(q^(lambda+rho)): the finite sum over the parts plus 1/[i]."""
    if i == 0:
        raise ZeroIndex("power sum index must be nonzero")
    terms = {}
    for j, p in enumerate(lam, start=1):
        # q^{i(p - j + 1/2)} = x^{i(2p - 2j + 1)}
        a = i * (2 * p - 2 * j + 1)
        b = i * (-2 * j + 1)
        terms[a] = terms.get(a, 0) + 1
        terms[b] = terms.get(b, 0) - 1
    return QRational(HalfLaurent(terms)) + QRational(1, qnum(i))
