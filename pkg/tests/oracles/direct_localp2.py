"""Stand-alone evaluation of the local P^2 GV invariants, written from the
definitions with sympy and sharing no code with the package.

Route: Schur polynomials by the bialternant formula, Littlewood-Richardson
coefficients by elimination in the Schur basis, s_nu(q^-rho) by the
hook-content formula, the cycle-graph amplitude written with the two-point
function W, then log, Moebius inversion and conversion to t = q - 2 + 1/q.
Run as a script to print the table.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import sympy as sp

s = sp.Symbol("s", positive=True)  # s = q^(1/2)
q = s**2
t_expr = q - 2 + 1 / q
NV = 3  # enough variables for every shape of weight <= 3


def parts_of(n, cap=None):
    cap = n if cap is None else cap
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, cap), 0, -1):
        out += [(first,) + rest for rest in parts_of(n - first, first)]
    return out


def transpose(lam):
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0])) if lam else ()


def content_sum2(lam):
    # kappa = 2 * sum of contents (j - i)
    return 2 * sum(j - i for i, row in enumerate(lam) for j in range(row))


xs = sp.symbols("x1:%d" % (NV + 1))


@lru_cache(maxsize=None)
def schur_poly(lam):
    lam = tuple(lam) + (0,) * (NV - len(lam))
    num = sp.Matrix(NV, NV, lambda i, j: xs[i] ** (lam[j] + NV - 1 - j))
    den = sp.Matrix(NV, NV, lambda i, j: xs[i] ** (NV - 1 - j))
    return sp.Poly(sp.cancel(num.det() / den.det()), *xs)


@lru_cache(maxsize=None)
def lr_expand(eta, nu):
    """Coefficients c^mu_{eta,nu} by peeling leading monomials."""
    prod = schur_poly(eta) * schur_poly(nu)
    out = {}
    while not prod.is_zero:
        mono, coeff = prod.terms()[0]  # lex-leading monomial
        mu = tuple(e for e in mono if e)
        out[mu] = out.get(mu, 0) + coeff
        prod = prod - coeff * schur_poly(mu)
    return out


def hooks(lam):
    lt = transpose(lam)
    return [lam[i] - j + lt[j] - i - 1 for i in range(len(lam)) for j in range(lam[i])]


def qn(k):
    return s**k - s**(-k)


def schur_minus_rho(lam):
    # s_lam(q^-rho) = (-1)^|lam| q^(-kappa/4) / prod [h]
    val = (-1) ** sum(lam) * s ** (-sp.Rational(content_sum2(lam), 2))
    for h in hooks(lam):
        val /= qn(h)
    return val


def skew_minus_rho(mu, eta):
    total = 0
    for nu in parts_of(sum(mu) - sum(eta)):
        c = lr_expand(eta, nu).get(mu, 0) if sum(mu) >= sum(eta) else 0
        if c:
            total += c * schur_minus_rho(nu)
    return total


def two_point(mu, nu):
    acc = 0
    for k in range(min(sum(mu), sum(nu)) + 1):
        for eta in parts_of(k):
            acc += skew_minus_rho(mu, eta) * skew_minus_rho(nu, eta)
    return (-1) ** (sum(mu) + sum(nu)) * s ** (content_sum2(mu) + content_sum2(nu)) * acc


def amplitude(lams, gammas=(1, 1, 1)):
    r = len(lams)
    val = 1
    for i in range(r):
        g = gammas[i]
        val *= (-1) ** (g * sum(lams[i])) * s ** (g * content_sum2(lams[i]))
        val *= two_point(lams[i], lams[(i + 1) % r])
    return val


def z_sum_class(beta):
    acc = 0
    for d in itertools.product(range(beta + 1), repeat=3):
        if sum(d) != beta:
            continue
        for lams in itertools.product(*(parts_of(x) for x in d)):
            acc += amplitude(lams)
    return sp.factor(acc)


def mobius(k):
    return sp.mobius(k)


def to_t(expr):
    """Coefficients of the polynomial P with P(q - 2 + 1/q) = expr."""
    expr = sp.expand(sp.cancel(expr))
    out = {}
    while expr != 0:
        top = sp.Poly(sp.expand(expr * s**400), s)
        deg = top.degree() - 400
        assert deg % 2 == 0, "half-integer power of q"
        g = deg // 2
        c = top.LC()
        out[g] = c
        expr = sp.expand(expr - c * t_expr**g)
    return out


def gv_sum_class(max_beta=3):
    Q = sp.Symbol("Q")
    z = 1 + sum(z_sum_class(b) * Q**b for b in range(1, max_beta + 1))
    logz = sp.series(sp.log(z), Q, 0, max_beta + 1).removeO()
    F = {b: sp.cancel(logz.coeff(Q, b)) for b in range(1, max_beta + 1)}
    table = {}
    for b in range(1, max_beta + 1):
        G = sum(
            mobius(k) * sp.Rational(1, k) * F[b // k].subs(s, s**k)
            for k in range(1, b + 1)
            if b % k == 0
        )
        for g, c in to_t(sp.cancel(G * t_expr)).items():
            assert c == int(c)
            if c:
                table[(b, g)] = int((-1) ** (g - 1) * c)
    return table


if __name__ == "__main__":
    for (b, g), n in sorted(gv_sum_class().items()):
        print(f"beta={b} g={g} n={n}")
