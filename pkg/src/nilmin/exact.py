"""Exact scalars beyond Q: Gaussian rationals and real quadratic surds.

``QuadraticSurd`` lets catalog families with square-root parameters (h12's
alpha = sqrt((s-1)^2 + t^2)) stay exact; it mixes freely with ``Fraction``.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = k^2 * m with m squarefree; returns (k, m). n > 0."""
    k, m = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            m *= p
        p += 1
    return k, m * n


class QuadraticSurd:
    """a + b*sqrt(d) with rational a, b and squarefree integer d > 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)

    @staticmethod
    def make(a, b, d: int):
        a, b = Fraction(a), Fraction(b)
        if b == 0 or d == 1:
            return a + b
        return QuadraticSurd(a, b, d)

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if other.d != self.d:
                raise ValueError(f"cannot mix sqrt({self.d}) and sqrt({other.d})")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticSurd.make(self.a + o[0], self.b + o[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticSurd.make(self.a - o[0], self.b - o[1], self.d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = o
        return QuadraticSurd.make(self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def inverse(self):
        norm = self.a * self.a - self.b * self.b * self.d
        return QuadraticSurd.make(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadraticSurd):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd.make(self.a / other, self.b / other, self.d)
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o[0] and self.b == o[1]

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def sign(self) -> int:
        # sign of a + b sqrt(d) without floating point
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else sb

    def __lt__(self, other):
        return sign(self - other) < 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadraticSurd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        b = "" if abs(self.b) == 1 else f"{abs(self.b)}*"
        sign = "-" if self.b < 0 else "+"
        if self.a == 0:
            return f"{'-' if self.b < 0 else ''}{b}sqrt({self.d})"
        return f"{self.a}{sign}{b}sqrt({self.d})"


def sign(x) -> int:
    if isinstance(x, QuadraticSurd):
        return x.sign()
    return (x > 0) - (x < 0)


def sqrt_exact(r) -> Fraction | QuadraticSurd:
    """Square root of a nonnegative rational, as a Fraction when possible."""
    r = Fraction(r)
    if r < 0:
        raise ValueError("square root of a negative number")
    if r == 0:
        return Fraction(0)
    num = r.numerator * r.denominator
    k, m = _squarefree_split(num)
    # sqrt(p/q) = sqrt(p q) / q = k sqrt(m) / q
    coeff = Fraction(k, r.denominator)
    return QuadraticSurd.make(0, coeff, m) if m > 1 else coeff


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticSurd))


_SURD_RE = re.compile(
    r"^\s*(?:(?P<a>[-+]?\d+(?:/\d+)?)\s*(?=[-+]))?\s*(?P<sb>[-+])?\s*(?:(?P<b>\d+(?:/\d+)?)\s*\*\s*)?sqrt\((?P<d>\d+)\)\s*$"
)


def parse_exact(text) -> Fraction | QuadraticSurd:
    """Parse ``"p/q"``, integers, or ``"a+b*sqrt(d)"`` / ``"-sqrt(2)"`` strings."""
    if isinstance(text, (int, Fraction, QuadraticSurd)):
        return Fraction(text) if isinstance(text, int) else text
    if isinstance(text, float):
        raise TypeError("floats are not exact; pass a string like '1/3'")
    s = str(text).strip()
    try:
        return Fraction(s)
    except ValueError:
        pass
    m = _SURD_RE.match(s)
    if not m:
        raise ValueError(f"not an exact number: {text!r}")
    a = Fraction(m.group("a") or 0)
    b = Fraction(m.group("b") or 1)
    if m.group("sb") == "-":
        b = -b
    k, d = _squarefree_split(int(m.group("d")))
    return QuadraticSurd.make(a, b * k, d)


def format_exact(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return str(x)


def _real(x):
    if isinstance(x, QuadraticSurd):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact")
    return Fraction(x)


class GaussianRational:
    """re + im*i with rational parts (quadratic surd parts are also allowed)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _real(re)
        self.im = _real(im)

    @staticmethod
    def of(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(x, 0)

    def __add__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.of(other))

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __mul__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = GaussianRational.of(other)
        n = o.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        p = self * o.conjugate()
        return GaussianRational(p.re / n, p.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.of(other) / self

    def __eq__(self, other):
        try:
            o = GaussianRational.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = "" if abs(self.im) == 1 else f"{abs(self.im)}*"
        if not self.re:
            return f"{'-' if self.im < 0 else ''}{im}i"
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}i"


I = GaussianRational(0, 1)
