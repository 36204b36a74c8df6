"""Integer polynomial kernels backing the exact q-series arithmetic.

Two interchangeable backends implement the same small API over dense
integer polynomials in one variable (coefficients stored low to high):

* ``flint``  -- python-flint ``fmpz_poly`` (fast multiplication and GCD)
* ``python`` -- tuples of Python ints, pure Python

The backend is picked once at import time from ``VERTEXFORGE_KERNEL``
(``flint`` / ``python``); the default is ``flint`` when importable.
Everything above this module treats polynomials as opaque handles and only
talks to the selected ``KERNEL`` object.
"""
from __future__ import annotations

import os
from math import gcd as igcd

try:
    import flint

    HAVE_FLINT = True
except ImportError:  # pragma: no cover - exercised only without the extra
    flint = None
    HAVE_FLINT = False


class PyKernel:
    """Pure-Python backend; a polynomial is a tuple of ints with no high zeros."""

    name = "python"
    # below this length schoolbook beats Kronecker packing
    KRONECKER_MIN = 24

    def make(self, coeffs):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        return tuple(int(a) for a in c)

    def coeffs(self, p):
        return list(p)

    def key(self, p):
        return p

    zero = ()
    one = (1,)

    def is_zero(self, p):
        return not p

    def degree(self, p):
        return len(p) - 1

    def const(self, p):
        return p[0] if p else 0

    def lead(self, p):
        return p[-1] if p else 0

    def trailing(self, p):
        i = 0
        while p[i] == 0:
            i += 1
        return i

    def shift_down(self, p, k):
        return p[k:]

    def shift_up(self, p, k):
        return (0,) * k + p if p else p

    def reverse(self, p):
        return self.make(reversed(p))

    def inflate(self, p, k):
        if k == 1 or not p:
            return p
        out = [0] * ((len(p) - 1) * k + 1)
        out[::k] = p
        return tuple(out)

    def neg(self, p):
        return tuple(-a for a in p)

    def scale(self, p, c):
        if c == 0:
            return ()
        return tuple(a * c for a in p)

    def divscalar(self, p, c):
        return tuple(a // c for a in p)

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return self.make(out)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        if min(len(a), len(b)) < self.KRONECKER_MIN:
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return tuple(out)
        return self._kronecker(a, b)

    def _kronecker(self, a, b):
        bound = max(abs(x) for x in a) * max(abs(y) for y in b) * min(len(a), len(b))
        bits = (2 * bound).bit_length() + 1
        na = 0
        for c in reversed(a):
            na = (na << bits) + c
        nb = 0
        for c in reversed(b):
            nb = (nb << bits) + c
        n = na * nb
        half = 1 << (bits - 1)
        mask = (1 << bits) - 1
        out = []
        for _ in range(len(a) + len(b) - 1):
            r = n & mask
            if r >= half:
                r -= 1 << bits
            out.append(r)
            n = (n - r) >> bits
        return tuple(out)

    def content(self, p):
        g = 0
        for c in p:
            g = igcd(g, c)
            if g == 1:
                break
        return g

    def divmod(self, a, b):
        """Division with remainder over Z; raises if a quotient coefficient is fractional."""
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(a)
        db = len(b) - 1
        lb = b[-1]
        if len(r) - 1 < db:
            return (), a
        q = [0] * (len(r) - db)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if c == 0:
                continue
            qc, rem = divmod(c, lb)
            if rem:
                raise ArithmeticError("inexact integer polynomial division")
            q[i - db] = qc
            for j in range(db + 1):
                r[i - db + j] -= qc * b[j]
        return self.make(q), self.make(r)

    def divexact(self, a, b):
        q, r = self.divmod(a, b)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def primitive(self, p):
        c = self.content(p)
        if p and p[-1] < 0:
            c = -c
        return self.divscalar(p, c) if c not in (0, 1) else p

    def gcd(self, a, b):
        """GCD in Z[x], normalized to positive leading coefficient."""
        if not a:
            return self.primitive(b) if b and b[-1] < 0 else b
        if not b:
            return self.primitive(a) if a[-1] < 0 else a
        if len(a) == 1 or len(b) == 1:
            return (igcd(self.content(a), self.content(b)),)
        ca, cb = self.content(a), self.content(b)
        g = self._heu_gcd(self.divscalar(a, ca), self.divscalar(b, cb))
        if g is None:
            g = self._prs_gcd(self.primitive(a), self.primitive(b))
        return self.scale(g, igcd(ca, cb))

    def _eval_at(self, p, x):
        v = 0
        for c in reversed(p):
            v = v * x + c
        return v

    def _heu_gcd(self, a, b):
        # heuristic GCD: evaluate at a large integer, recover by balanced base-x digits
        ma = max(abs(c) for c in a)
        mb = max(abs(c) for c in b)
        x = 2 * min(ma, mb) + 29
        for _ in range(6):
            h = igcd(self._eval_at(a, x), self._eval_at(b, x))
            cand = []
            hh = h
            half = x // 2
            while hh:
                r = hh % x
                if r > half:
                    r -= x
                cand.append(r)
                hh = (hh - r) // x
            g = self.primitive(self.make(cand))
            if g and self._divides(g, a) and self._divides(g, b):
                return g
            x = (x * 73794) // 27011
        return None

    def _divides(self, g, p):
        try:
            _, r = self.divmod(p, g)
        except ArithmeticError:
            return False
        return not r

    def _prs_gcd(self, a, b):
        # primitive polynomial remainder sequence; slow but always correct
        if len(a) < len(b):
            a, b = b, a
        while b:
            if len(b) == 1:
                return (1,)
            r = list(a)
            db = len(b) - 1
            lb = b[-1]
            while len(r) - 1 >= db and any(r):
                c = r[-1]
                shift = len(r) - 1 - db
                r = [x * lb for x in r]
                for j in range(db + 1):
                    r[shift + j] -= c * b[j]
                r = list(self.make(r))
            a, b = b, self.primitive(self.make(r))
        return self.primitive(a)


class FlintKernel:
    """python-flint backend; a polynomial is an ``fmpz_poly``."""

    name = "flint"

    def __init__(self):
        self.zero = flint.fmpz_poly([])
        self.one = flint.fmpz_poly([1])

    def make(self, coeffs):
        return flint.fmpz_poly([int(c) for c in coeffs])

    def coeffs(self, p):
        return [int(c) for c in p.coeffs()]

    def key(self, p):
        return tuple(int(c) for c in p.coeffs())

    def is_zero(self, p):
        return p.is_zero()

    def degree(self, p):
        return p.degree()

    def const(self, p):
        return int(p[0])

    def lead(self, p):
        return int(p.leading_coefficient())

    def trailing(self, p):
        i = 0
        while p[i] == 0:
            i += 1
        return i

    def shift_down(self, p, k):
        return p.right_shift(k) if k else p

    def shift_up(self, p, k):
        return p.left_shift(k) if k else p

    def reverse(self, p):
        return flint.fmpz_poly(p.coeffs()[::-1])

    def inflate(self, p, k):
        return p.inflate(k) if k != 1 else p

    def neg(self, p):
        return -p

    def scale(self, p, c):
        return p * c

    def divscalar(self, p, c):
        return p / c

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def content(self, p):
        return int(p.content())

    def divmod(self, a, b):
        return divmod(a, b)

    def divexact(self, a, b):
        try:
            return a / b
        except Exception as exc:  # flint raises DomainError
            raise ArithmeticError("polynomial division is not exact") from exc

    def primitive(self, p):
        c = int(p.content())
        if c == 0:
            return p
        if p.leading_coefficient() < 0:
            c = -c
        return p / c if c != 1 else p

    def gcd(self, a, b):
        return a.gcd(b)


def _select():
    want = os.environ.get("VERTEXFORGE_KERNEL", "").strip().lower()
    if want == "python":
        return PyKernel()
    if want == "flint" and not HAVE_FLINT:
        raise ImportError("VERTEXFORGE_KERNEL=flint but python-flint is not installed")
    if want not in ("", "python", "flint"):
        raise ValueError(f"unknown VERTEXFORGE_KERNEL value {want!r}")
    return FlintKernel() if HAVE_FLINT else PyKernel()


KERNEL = _select()
