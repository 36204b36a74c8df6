"""Exact Laurent polynomials and rational functions in x = q^(1/2).

Every quantity in the pipeline lives in Q(x) with x = q^(1/2), so half-integer
powers of q are ordinary integer powers of x.  Nothing here ever rounds.

Canonical text form (used by the CLI and golden tests) is written in q:
terms by descending exponent, ``q^(3/2)`` for half-integer exponents, and
``(N)/(D)`` for a genuine quotient, e.g. ``(q^2 - q + 1)/(q^2 - 2*q + 1)``.
"""
from __future__ import annotations

import os
from fractions import Fraction
from math import gcd as igcd

from ._kernels import KERNEL as K

__all__ = [
    "HalfLaurent",
    "QRational",
    "TPoly",
    "NotPolynomial",
    "NotSymmetric",
    "HalfIntegerPower",
    "TConversionError",
    "qnum",
    "substitute_power",
    "bar_involution",
    "to_t_polynomial",
    "t_k_polynomial",
    "t_variable",
]

# Reduce numerator/denominator by a full polynomial GCD once their combined
# degree exceeds this; content is always stripped.  0 means "always".
GCD_THRESHOLD = int(os.environ.get("VERTEXFORGE_GCD_THRESHOLD", "0"))


class TConversionError(ValueError):
    """Base class for failures of the change of basis to t = [1]^2."""


class NotPolynomial(TConversionError):
    pass


class NotSymmetric(TConversionError):
    pass


class HalfIntegerPower(TConversionError):
    pass


def _fmt_exp(m):
    # m is an exponent of x; render as a power of q
    if m % 2 == 0:
        e = m // 2
        if e == 1:
            return "q"
        return f"q^{e}" if e >= 0 else f"q^({e})"
    return f"q^({m}/2)"


def render_terms(terms, fmt_exp=_fmt_exp):
    """Render ``[(exponent, coefficient), ...]`` by descending exponent."""
    terms = sorted(((e, c) for e, c in terms if c != 0), reverse=True)
    if not terms:
        return "0"
    out = []
    for i, (e, c) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = str(a)
        elif a == 1:
            body = fmt_exp(e)
        else:
            body = f"{a}*{fmt_exp(e)}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


class HalfLaurent:
    """Laurent polynomial in x = q^(1/2) with rational coefficients.

    Stored as ``x^low * P(x) / den`` with ``P`` an integer polynomial having a
    nonzero constant term, ``den > 0`` and ``gcd(content(P), den) == 1``.
    """

    __slots__ = ("_p", "_low", "_den")

    def __init__(self, coefficients=None):
        if coefficients is None:
            coefficients = {}
        items = [(int(e), Fraction(c)) for e, c in dict(coefficients).items() if c != 0]
        if not items:
            self._p, self._low, self._den = K.zero, 0, 1
            return
        lo = min(e for e, _ in items)
        hi = max(e for e, _ in items)
        den = 1
        for _, c in items:
            den = den * c.denominator // igcd(den, c.denominator)
        dense = [0] * (hi - lo + 1)
        for e, c in items:
            dense[e - lo] = int(c * den)
        self._set(K.make(dense), lo, den)

    @classmethod
    def _raw(cls, p, low, den=1):
        obj = cls.__new__(cls)
        if K.is_zero(p):
            obj._p, obj._low, obj._den = K.zero, 0, 1
            return obj
        tz = K.trailing(p)
        if tz:
            p = K.shift_down(p, tz)
            low += tz
        obj._set(p, low, den)
        return obj

    def _set(self, p, low, den):
        g = igcd(K.content(p), den)
        if g != 1:
            p = K.divscalar(p, g)
            den //= g
        self._p, self._low, self._den = p, low, den

    @classmethod
    def monomial(cls, exponent, coefficient=1):
        return cls({exponent: coefficient})

    def coefficients(self):
        """Dict exponent-of-x -> Fraction."""
        return {
            self._low + i: Fraction(c, self._den)
            for i, c in enumerate(K.coeffs(self._p))
            if c
        }

    def is_zero(self):
        return K.is_zero(self._p)

    def min_exponent(self):
        return self._low

    def max_exponent(self):
        return self._low + K.degree(self._p)

    def __add__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self._low, other._low)
        a = K.shift_up(K.scale(self._p, other._den), self._low - lo)
        b = K.shift_up(K.scale(other._p, self._den), other._low - lo)
        return HalfLaurent._raw(K.add(a, b), lo, self._den * other._den)

    __radd__ = __add__

    def __neg__(self):
        return HalfLaurent._raw(K.neg(self._p), self._low, self._den)

    def __sub__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return other
        return HalfLaurent._raw(
            K.mul(self._p, other._p), self._low + other._low, self._den * other._den
        )

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial; use QRational")
        out = HalfLaurent({0: 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return (
            self._low == other._low
            and self._den == other._den
            and K.key(self._p) == K.key(other._p)
        )

    def __hash__(self):
        return hash((self._low, self._den, K.key(self._p)))

    def substitute_power(self, k):
        return HalfLaurent._raw(K.inflate(self._p, k), self._low * k, self._den)

    def bar(self):
        deg = K.degree(self._p)
        return HalfLaurent._raw(K.reverse(self._p), -self._low - deg, self._den)

    def to_qrational(self):
        return QRational._build(self._p, K.make([self._den]), self._low, reduce=False)

    def __str__(self):
        return render_terms(self.coefficients().items())

    def __repr__(self):
        return f"HalfLaurent({self})"


def _as_laurent(v):
    if isinstance(v, HalfLaurent):
        return v
    if isinstance(v, (int, Fraction)):
        return HalfLaurent({0: v})
    return NotImplemented


class QRational:
    """Rational function N/D in x = q^(1/2).

    Internally ``x^shift * num(x) / den(x)`` where ``num``/``den`` are integer
    polynomials with nonzero constant terms, jointly content-free, and
    ``den(0) > 0``.  Values are immutable.
    """

    __slots__ = ("_n", "_d", "_s", "_reduced", "_hash")

    def __init__(self, numerator=0, denominator=1):
        num = _to_qr(numerator)
        den = _to_qr(denominator)
        r = num / den
        self._n, self._d, self._s = r._n, r._d, r._s
        self._reduced = r._reduced
        self._hash = None

    @classmethod
    def _build(cls, n, d, s, reduce=None):
        obj = cls.__new__(cls)
        obj._hash = None
        if K.is_zero(d):
            raise ZeroDivisionError("QRational with zero denominator")
        if K.is_zero(n):
            obj._n, obj._d, obj._s, obj._reduced = K.zero, K.one, 0, True
            return obj
        tz = K.trailing(n)
        if tz:
            n = K.shift_down(n, tz)
            s += tz
        tz = K.trailing(d)
        if tz:
            d = K.shift_down(d, tz)
            s -= tz
        if reduce is None:
            reduce = K.degree(n) + K.degree(d) > GCD_THRESHOLD
        if reduce and K.degree(d) > 0 and K.degree(n) > 0:
            g = K.gcd(n, d)
            if K.degree(g) > 0:
                n = K.divexact(n, g)
                d = K.divexact(d, g)
        c = igcd(K.content(n), K.content(d))
        if K.const(d) < 0:
            c = -c
        if c != 1:
            n = K.divscalar(n, c)
            d = K.divscalar(d, c)
        obj._n, obj._d, obj._s = n, d, s
        obj._reduced = bool(reduce) or K.degree(d) == 0 or K.degree(n) == 0
        return obj

    @classmethod
    def from_int(cls, v):
        v = Fraction(v)
        return cls._build(K.make([v.numerator]), K.make([v.denominator]), 0, reduce=False)

    @classmethod
    def monomial(cls, exponent, coefficient=1):
        """coefficient * x^exponent."""
        c = Fraction(coefficient)
        return cls._build(K.make([c.numerator]), K.make([c.denominator]), exponent, reduce=False)

    # --- accessors -----------------------------------------------------
    def reduced(self):
        if self._reduced:
            return self
        return QRational._build(self._n, self._d, self._s, reduce=True)

    @property
    def numerator(self):
        """Numerator as a HalfLaurent, with common x-powers stripped."""
        r = self.reduced()
        return HalfLaurent._raw(r._n, max(r._s, 0))

    @property
    def denominator(self):
        r = self.reduced()
        return HalfLaurent._raw(r._d, max(-r._s, 0))

    def is_zero(self):
        return K.is_zero(self._n)

    def is_laurent(self):
        return K.degree(self.reduced()._d) == 0

    def to_laurent(self):
        """The HalfLaurent equal to self; raises NotPolynomial otherwise."""
        r = self.reduced()
        if K.degree(r._d) != 0:
            raise NotPolynomial(f"not a Laurent polynomial: {r}")
        d = K.const(r._d)
        out = HalfLaurent._raw(r._n, r._s)
        if d != 1:
            out = out * HalfLaurent({0: Fraction(1, d)})
        return out

    # --- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = _to_qr(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        s = min(self._s, other._s)
        n1 = K.shift_up(self._n, self._s - s)
        n2 = K.shift_up(other._n, other._s - s)
        d1, d2 = self._d, other._d
        if K.key(d1) == K.key(d2):
            return QRational._build(K.add(n1, n2), d1, s)
        reduce = K.degree(d1) + K.degree(d2) > GCD_THRESHOLD
        if reduce and K.degree(d1) > 0 and K.degree(d2) > 0:
            g = K.gcd(d1, d2)
            if K.degree(g) > 0:
                d1g = K.divexact(d1, g)
                d2g = K.divexact(d2, g)
                num = K.add(K.mul(n1, d2g), K.mul(n2, d1g))
                return QRational._build(num, K.mul(d1g, d2), s)
        num = K.add(K.mul(n1, d2), K.mul(n2, d1))
        return QRational._build(num, K.mul(d1, d2), s)

    __radd__ = __add__

    def __neg__(self):
        obj = QRational._build(K.neg(self._n), self._d, self._s, reduce=False)
        obj._reduced = self._reduced
        return obj

    def __sub__(self, other):
        other = _to_qr(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _to_qr(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return ZERO
        n1, d1, n2, d2 = self._n, self._d, other._n, other._d
        reduce = (
            K.degree(n1) + K.degree(n2) + K.degree(d1) + K.degree(d2) > GCD_THRESHOLD
        )
        if reduce:
            # cross-cancel; inputs reduced implies output reduced
            if K.degree(n1) > 0 and K.degree(d2) > 0:
                g = K.gcd(n1, d2)
                if K.degree(g) > 0:
                    n1, d2 = K.divexact(n1, g), K.divexact(d2, g)
            if K.degree(n2) > 0 and K.degree(d1) > 0:
                g = K.gcd(n2, d1)
                if K.degree(g) > 0:
                    n2, d1 = K.divexact(n2, g), K.divexact(d1, g)
            obj = QRational._build(
                K.mul(n1, n2), K.mul(d1, d2), self._s + other._s, reduce=False
            )
            obj._reduced = self._reduced and other._reduced
            if not obj._reduced:
                obj = obj.reduced()
            return obj
        return QRational._build(K.mul(n1, n2), K.mul(d1, d2), self._s + other._s)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero QRational")
        obj = QRational._build(self._d, self._n, -self._s, reduce=False)
        obj._reduced = self._reduced
        return obj

    def __truediv__(self, other):
        other = _to_qr(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _to_qr(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = _to_qr(other)
        if other is NotImplemented:
            return NotImplemented
        if self._s != other._s:
            return False
        return K.key(K.mul(self._n, other._d)) == K.key(K.mul(other._n, self._d))

    def __hash__(self):
        if self._hash is None:
            r = self.reduced()
            self._hash = hash((r._s, K.key(r._n), K.key(r._d)))
        return self._hash

    # --- q-maps ----------------------------------------------------------
    def substitute_power(self, k):
        if k < 1:
            raise ValueError("substitute_power needs k >= 1")
        if k == 1:
            return self
        obj = QRational._build(
            K.inflate(self._n, k), K.inflate(self._d, k), self._s * k, reduce=False
        )
        obj._reduced = self._reduced
        return obj

    def bar(self):
        n, d = self._n, self._d
        s = -self._s - K.degree(n) + K.degree(d)
        obj = QRational._build(K.reverse(n), K.reverse(d), s, reduce=False)
        obj._reduced = self._reduced
        return obj

    def __str__(self):
        num, den = self.numerator, self.denominator
        dc = den.coefficients()
        if dc == {0: 1}:
            return str(num)
        if len(dc) == 1 and 0 in dc:
            return f"({num})/{dc[0]}"
        return f"({num})/({den})"

    def __repr__(self):
        return f"QRational({self})"

    def __reduce__(self):
        # backend-neutral state so values cross process boundaries
        return (_restore, (K.coeffs(self._n), K.coeffs(self._d), self._s, self._reduced))


def _restore(n, d, s, reduced):
    obj = QRational._build(K.make(n), K.make(d), s, reduce=False)
    obj._reduced = reduced
    return obj


def _to_qr(v):
    if isinstance(v, QRational):
        return v
    if isinstance(v, (int, Fraction)):
        return QRational.from_int(v)
    if isinstance(v, HalfLaurent):
        return v.to_qrational()
    return NotImplemented


ZERO = QRational._build(K.zero, K.one, 0)
ONE = QRational._build(K.one, K.one, 0)


def qnum(k: int) -> HalfLaurent:
    """The q-number [k] = q^(k/2) - q^(-k/2) = x^k - x^(-k)."""
    if k == 0:
        return HalfLaurent()
    return HalfLaurent({k: 1, -k: -1})


def substitute_power(f, k: int):
    """q -> q^k applied to every monomial."""
    if k < 1:
        raise ValueError("substitute_power needs k >= 1")
    return f.substitute_power(k)


def bar_involution(f):
    """q -> 1/q."""
    return f.bar()


class TPoly:
    """Polynomial in t with rational coefficients, stored low degree first."""

    __slots__ = ("_c",)

    def __init__(self, coefficients=()):
        if isinstance(coefficients, dict):
            n = max(coefficients, default=-1) + 1
            c = [Fraction(0)] * n
            for k, v in coefficients.items():
                if k < 0:
                    raise ValueError("negative power of t")
                c[k] = Fraction(v)
        else:
            c = [Fraction(v) for v in coefficients]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @property
    def coefficients(self):
        return {i: c for i, c in enumerate(self._c) if c}

    def coefficient(self, k):
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    @property
    def degree(self):
        return len(self._c) - 1

    def is_integral(self):
        return all(c.denominator == 1 for c in self._c)

    def is_monic(self):
        return bool(self._c) and self._c[-1] == 1

    def __add__(self, other):
        other = other if isinstance(other, TPoly) else TPoly([other])
        n = max(len(self._c), len(other._c))
        return TPoly([self.coefficient(i) + other.coefficient(i) for i in range(n)])

    __radd__ = __add__

    def __mul__(self, other):
        other = other if isinstance(other, TPoly) else TPoly([other])
        if not self._c or not other._c:
            return TPoly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return TPoly(out)

    __rmul__ = __mul__

    def __neg__(self):
        return TPoly([-c for c in self._c])

    def __sub__(self, other):
        return self + (-(other if isinstance(other, TPoly) else TPoly([other])))

    def __eq__(self, other):
        if not isinstance(other, TPoly):
            other = TPoly([other])
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __call__(self, t):
        """Horner evaluation at any ring element (HalfLaurent, QRational, number)."""
        acc = 0
        for c in reversed(self._c):
            acc = acc * t + c
        return acc

    def __str__(self):
        def fmt(e):
            return "t" if e == 1 else f"t^{e}"

        return render_terms(list(enumerate(self._c)), fmt)

    def __repr__(self):
        return f"TPoly({self})"


def t_variable() -> HalfLaurent:
    """t = [1]^2 = q - 2 + q^(-1)."""
    return qnum(1) ** 2


def to_t_polynomial(f) -> TPoly:
    """Rewrite a bar-invariant Laurent polynomial in q as a polynomial in t.

    Uses y = q + 1/q = t + 2 and P_{j+1} = y P_j - P_{j-1} with
    P_j = q^j + q^(-j).
    """
    if isinstance(f, HalfLaurent):
        lau = f
    else:
        f = _to_qr(f)
        if not f.is_laurent():
            raise NotPolynomial(f"denominator does not divide numerator: {f}")
        lau = f.to_laurent()
    coeffs = lau.coefficients()
    odd = [m for m in coeffs if m % 2]
    if odd:
        raise HalfIntegerPower(f"odd power x^{odd[0]} (half-integer power of q)")
    if lau.bar() != lau:
        raise NotSymmetric("not invariant under q -> 1/q")
    qc = {m // 2: c for m, c in coeffs.items()}
    top = max((abs(j) for j in qc), default=0)
    y = TPoly([2, 1])
    out = TPoly([qc.get(0, 0)])
    p_prev, p_cur = TPoly([2]), y
    for j in range(1, top + 1):
        c = qc.get(j, 0)
        if c:
            out = out + p_cur * c
        p_prev, p_cur = p_cur, y * p_cur - p_prev
    return out


def t_k_polynomial(k: int) -> TPoly:
    """t_k = [k]^2 written as a (monic, integral) polynomial in t."""
    if k < 1:
        raise ValueError("t_k needs k >= 1")
    return to_t_polynomial(qnum(k) ** 2)
