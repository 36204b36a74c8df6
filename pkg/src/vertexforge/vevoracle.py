"""Operator-side cross-checks: E-operator vacuum expectation values and an
independent evaluation of the three-point function from characters and power sums.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod

from .partitions import (
    conjugate,
    kappa,
    mn_character,
    partitions_of,
    power_sum_principal,
    union,
    z_lambda,
)
from .qseries import ONE, ZERO, HalfLaurent, QRational, qnum

__all__ = ["EOp", "DivergentTerm", "vev_e_product", "three_point_oracle"]


class DivergentTerm(ArithmeticError):
    """A rewrite would need 1/[0]."""


@dataclass(frozen=True)
class EOp:
    """E_c(n): energy index c, mode index n."""

    c: int
    n: int

    def __post_init__(self):
        if (self.c, self.n) == (0, 0):
            raise ValueError("E_0(0) is not an admissible operator")


def _pick_rightmost(pairs, word):
    return pairs[-1]


def _pick_leftmost(pairs, word):
    return pairs[0]


def _eligible(word):
    return [i for i in range(len(word) - 1) if word[i][0] >= 0 and word[i + 1][0] < 0]


def _evaluate(word, pick, memo):
    if word in memo:
        return memo[word]
    if not word:
        return ONE
    pairs = _eligible(word)
    if pairs:
        i = pick(pairs, word)
        (a, m), (b, n) = word[i], word[i + 1]
        swapped = word[:i] + ((b, n), (a, m)) + word[i + 2 :]
        out = _evaluate(swapped, pick, memo)
        if (a + b, m + n) == (0, 0):
            rest = word[:i] + word[i + 2 :]
            out = out + QRational.from_int(a) * _evaluate(rest, pick, memo)
        else:
            k = a * n - b * m
            if k:
                merged = word[:i] + ((a + b, m + n),) + word[i + 2 :]
                out = out + QRational(qnum(k)) * _evaluate(merged, pick, memo)
    elif word[0][0] < 0:
        out = ZERO
    else:
        # no negative operator is left, so the rightmost one meets the vacuum
        c, m = word[-1]
        if c > 0:
            out = ZERO
        elif m == 0:
            raise DivergentTerm(f"<... E_0(0)> needs 1/[0] in word {word}")
        else:
            out = _evaluate(word[:-1], pick, memo) * QRational(1, qnum(m))
    memo[word] = out
    return out


def vev_e_product(ops, order="rightmost", seed=None) -> QRational:
    """<E_c1(n1) ... E_cl(nl)> by repeated commutation.

    ``order`` picks which eligible pair (a >= 0 followed by b < 0) is commuted:
    "rightmost" (the reference strategy), "leftmost", or "random" (seeded).
    """
    word = tuple((op.c, op.n) if isinstance(op, EOp) else (int(op[0]), int(op[1])) for op in ops)
    if order == "rightmost":
        pick = _pick_rightmost
    elif order == "leftmost":
        pick = _pick_leftmost
    elif order == "random":
        rng = random.Random(seed)

        def pick(pairs, word):
            return rng.choice(pairs)

    else:
        raise ValueError(f"unknown order {order!r}")
    return _evaluate(word, pick, {})


# --- three-point function from characters -------------------------------------


def _qnum_product(nu) -> HalfLaurent:
    out = HalfLaurent({0: 1})
    for k in nu:
        out = out * qnum(k)
    return out


@lru_cache(maxsize=None)
def _middle_factor(l2) -> QRational:
    # sum over nu2 of chi^{l2}(nu2) / (z_nu2 [nu2])
    acc = ZERO
    for nu in partitions_of(sum(l2)):
        chi = mn_character(l2, nu)
        if chi:
            acc = acc + QRational(Fraction(chi, z_lambda(nu)), _qnum_product(nu))
    return acc


def _power_product(signed_parts, at) -> QRational:
    out = ONE
    for i in signed_parts:
        out = out * power_sum_principal(i, at)
    return out


@lru_cache(maxsize=None)
def three_point_oracle(l1, l2, l3) -> QRational:
    """C_{l1,l2,l3} as the character / power-sum quadruple sum.

    Matrix elements: <v_lam|mu> = chi^lam(mu); power sums act diagonally on
    v_{l2} with eigenvalue p_i(q^(l2+rho)); q^(-F2) on v_{l3^t} gives x^kappa(l3).
    """
    l1, l2, l3 = tuple(l1), tuple(l2), tuple(l3)
    l3t = conjugate(l3)
    w1, w3 = sum(l1), sum(l3)
    acc = ZERO
    for dm in range(min(w1, w3) + 1):
        for mu in partitions_of(dm):
            for nu1 in partitions_of(w1 - dm):
                c1 = mn_character(l1, union(nu1, mu))
                if not c1:
                    continue
                left = QRational.from_int(Fraction((-1) ** len(nu1) * c1, z_lambda(nu1)))
                left = left * _power_product(tuple(-k for k in nu1), l2)
                for nu3 in partitions_of(w3 - dm):
                    c3 = mn_character(l3t, union(nu3, mu))
                    if not c3:
                        continue
                    w = Fraction(c3, z_lambda(mu) * z_lambda(nu3))
                    acc = acc + left * QRational.from_int(w) * _power_product(nu3, l2)
    if acc.is_zero():
        return acc
    return QRational.monomial(kappa(l3)) * _middle_factor(l2) * acc
