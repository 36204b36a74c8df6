"""Schur functions at q^rho and q^(lambda+rho); the two- and three-point functions.

All values are QRationals in x = q^(1/2).  A specialization point is named by
its partition: ``at=()`` is q^rho, ``at=lam`` is q^(lambda+rho).  The q^(-rho)
values needed by the two-point function come from the bar involution.
"""
from __future__ import annotations

from functools import lru_cache

from .partitions import EMPTY, Partition, conjugate, kappa, partitions_of
from .qseries import ONE, ZERO, HalfLaurent, QRational, qnum

__all__ = [
    "SpecPoint",
    "h_rho",
    "e_rho",
    "eh_principal",
    "skew_schur_principal",
    "schur_principal",
    "three_point",
    "two_point",
]

SpecPoint = Partition  # the specialization q^(lambda+rho) is determined by lambda


@lru_cache(maxsize=None)
def _qfactorial(i):
    out = HalfLaurent({0: 1})
    for k in range(1, i + 1):
        out = out * qnum(k)
    return out


@lru_cache(maxsize=None)
def h_rho(i: int) -> QRational:
    """h_i(q^rho) = q^(i(i-1)/4) / ([1]...[i])."""
    if i < 0:
        return ZERO
    return QRational(HalfLaurent({i * (i - 1) // 2: 1}), _qfactorial(i))


@lru_cache(maxsize=None)
def e_rho(i: int) -> QRational:
    """e_i(q^rho) = q^(-i(i-1)/4) / ([1]...[i])."""
    if i < 0:
        return ZERO
    return QRational(HalfLaurent({-(i * (i - 1) // 2): 1}), _qfactorial(i))


def _poly_mul_trunc(a, b, n):
    # product of two z-series with HalfLaurent coefficients, kept to order z^n
    out = [HalfLaurent() for _ in range(n + 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j in range(min(len(b), n + 1 - i)):
            out[i + j] = out[i + j] + x * b[j]
    return out


@lru_cache(maxsize=None)
def _prefactor(kind, lam, n):
    """z-series (to order n) of the finite product in front of the q^rho series.

    kind 'h': prod_j (1 - q^{-j+1/2} z) / (1 - q^{lam_j - j + 1/2} z)
    kind 'e': prod_j (1 + q^{lam_j - j + 1/2} z) / (1 + q^{-j+1/2} z)
    """
    series = [HalfLaurent({0: 1})] + [HalfLaurent() for _ in range(n)]
    for j, p in enumerate(lam, start=1):
        a = 2 * p - 2 * j + 1  # x-exponent of q^{lam_j - j + 1/2}
        b = -2 * j + 1  # x-exponent of q^{-j + 1/2}
        if kind == "h":
            top, geo = (HalfLaurent({0: 1}), HalfLaurent({b: -1})), a
            sign = 1
        else:
            top, geo = (HalfLaurent({0: 1}), HalfLaurent({a: 1})), b
            sign = -1
        # 1 / (1 - sign * x^geo z) as a geometric series
        inv = [HalfLaurent({geo * k: sign**k}) for k in range(n + 1)]
        series = _poly_mul_trunc(series, list(top), n)
        series = _poly_mul_trunc(series, inv, n)
    return tuple(series)


@lru_cache(maxsize=None)
def _eh_table(kind, lam, n):
    base = h_rho if kind == "h" else e_rho
    if not lam:
        return tuple(base(i) for i in range(n + 1))
    pre = _prefactor(kind, lam, n)
    out = []
    for i in range(n + 1):
        acc = ZERO
        for k in range(i + 1):
            c = pre[i - k]
            if not c.is_zero():
                acc = acc + QRational(c) * base(k)
        out.append(acc)
    return tuple(out)


def eh_principal(kind: str, i: int, at=EMPTY) -> QRational:
    """e_i or h_i evaluated at q^(at+rho)."""
    if kind not in ("e", "h"):
        raise ValueError("kind must be 'e' or 'h'")
    if i < 0:
        return ZERO
    at = tuple(at)
    # one table per (kind, lambda); grow in small steps so reuse is high
    n = (i // 4 + 1) * 4
    return _eh_table(kind, at, n)[i]


def _det(m):
    """Determinant by Laplace expansion along rows, memoized on used columns."""
    n = len(m)
    if n == 0:
        return ONE
    memo = {}

    def rec(row, used):
        if row == n:
            return ONE
        key = used
        if key in memo:
            return memo[key]
        acc = ZERO
        sign = 1
        for col in range(n):
            if used >> col & 1:
                continue
            entry = m[row][col]
            if not entry.is_zero():
                minor = rec(row + 1, used | (1 << col))
                if not minor.is_zero():
                    term = entry * minor
                    acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[key] = acc
        return acc

    return rec(0, 0)


@lru_cache(maxsize=None)
def _skew_h(mu, nu, at):
    l = len(mu)
    nu = nu + (0,) * (l - len(nu))
    m = [
        [eh_principal("h", mu[i] - nu[j] - i + j, at) for j in range(l)]
        for i in range(l)
    ]
    return _det(m)


@lru_cache(maxsize=None)
def _skew_e(mu, nu, at):
    mt, nt = conjugate(mu), conjugate(nu)
    l = len(mt)
    nt = tuple(nt) + (0,) * (l - len(nt))
    m = [
        [eh_principal("e", mt[i] - nt[j] - i + j, at) for j in range(l)]
        for i in range(l)
    ]
    return _det(m)


def skew_schur_principal(mu, nu=EMPTY, at=EMPTY, via="h") -> QRational:
    """s_{mu/nu}(q^(at+rho)) by the Jacobi-Trudi determinant (h or e form)."""
    mu, nu, at = tuple(mu), tuple(nu), tuple(at)
    if len(nu) > len(mu) or any(b > a for a, b in zip(mu, nu)):
        return ZERO
    if via == "h":
        return _skew_h(mu, nu, at)
    if via == "e":
        return _skew_e(mu, nu, at)
    raise ValueError("via must be 'h' or 'e'")


def schur_principal(lam, at=EMPTY) -> QRational:
    return skew_schur_principal(lam, EMPTY, at)


@lru_cache(maxsize=None)
def three_point(l1, l2, l3) -> QRational:
    """The topological vertex C_{l1,l2,l3}(q)."""
    l1, l2, l3 = Partition(l1), Partition(l2), Partition(l3)
    l2t, l3t = conjugate(l2), conjugate(l3)
    acc = ZERO
    for d in range(min(sum(l1), sum(l3)) + 1):
        for eta in partitions_of(d):
            a = skew_schur_principal(l1, eta, l2t)
            if a.is_zero():
                continue
            b = skew_schur_principal(l3t, eta, l2)
            if b.is_zero():
                continue
            acc = acc + a * b
    if acc.is_zero():
        return acc
    # q^{kappa/2} = x^{kappa}
    return QRational.monomial(kappa(l3)) * schur_principal(l2) * acc


@lru_cache(maxsize=None)
def two_point(mu, nu) -> QRational:
    """W_{mu,nu}(q); the q^(-rho) Schur values are bar images of the q^rho ones."""
    mu, nu = Partition(mu), Partition(nu)
    acc = ZERO
    for d in range(min(sum(mu), sum(nu)) + 1):
        for eta in partitions_of(d):
            a = skew_schur_principal(mu, eta)
            b = skew_schur_principal(nu, eta)
            if a.is_zero() or b.is_zero():
                continue
            acc = acc + (a * b).bar()
    sign = -1 if (sum(mu) + sum(nu)) % 2 else 1
    return QRational.monomial(kappa(mu) + kappa(nu), sign) * acc


def clear_caches():
    """Drop every memoized value (needed after monkeypatching q-numbers)."""
    for f in (_qfactorial, h_rho, e_rho, _prefactor, _eh_table, _skew_h, _skew_e, three_point, two_point):
        f.cache_clear()
