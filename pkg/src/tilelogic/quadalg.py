"""Exact arithmetic on numbers a + b*sqrt(d) with rational a, b, d >= 0.

Enough for sorting the breakpoints of one-parameter quadratic constraint
systems: exact comparison (also across different radicands), rational
enclosures of any precision, and a rational strictly between two values.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Union

__all__ = ["QuadAlg", "quad_roots", "rational_between"]

RatLike = Union[int, Fraction]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _radical_sign(p: Fraction, q: Fraction, d: Fraction) -> int:
    """Sign of p + q*sqrt(d) for rational p, q and rational d >= 0."""
    if q == 0 or d == 0:
        return _sign(p)
    if p == 0:
        return _sign(q)
    sp, sq = _sign(p), _sign(q)
    if sp == sq:
        return sp
    mag = _sign(p * p - q * q * d)  # compares |p| with |q|*sqrt(d)
    if mag == 0:
        return 0
    return sp if mag > 0 else sq


def _two_radical_sign(p: Fraction, q: Fraction, d: Fraction,
                      r: Fraction, e: Fraction) -> int:
    """Sign of p + q*sqrt(d) + r*sqrt(e)."""
    if q == 0 or d == 0:
        return _radical_sign(p, r, e)
    if r == 0 or e == 0:
        return _radical_sign(p, q, d)
    sa = _radical_sign(p, q, d)
    sb = _sign(r)
    if sb == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # opposite signs: compare (p + q*sqrt(d))^2 with r^2 * e
    mag = _radical_sign(p * p + q * q * d - r * r * e, 2 * p * q, d)
    if mag == 0:
        return 0
    return sa if mag > 0 else sb


def _fold_square(d: Fraction) -> Fraction | None:
    """sqrt(d) as a Fraction when d is a perfect square, else None."""
    num, den = d.numerator, d.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _sqrt_bounds(d: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Enclosure of sqrt(d) with width 1 / (den * 2^bits)."""
    num, den = d.numerator, d.denominator
    scale = 1 << bits
    r = math.isqrt(num * den * scale * scale)
    return Fraction(r, den * scale), Fraction(r + 1, den * scale)


@total_ordering
class QuadAlg:
    """Value a + b*sqrt(d); normalised so that b = 0 whenever the
    radical part is rational (including d = 0)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: RatLike, b: RatLike = 0, d: RatLike = 0):
        a, b, d = Fraction(a), Fraction(b), Fraction(d)
        if d < 0:
            raise ValueError("radicand must be non-negative")
        if b != 0 and d != 0:
            root = _fold_square(d)
            if root is not None:
                a, b, d = a + b * root, Fraction(0), Fraction(0)
        if b == 0 or d == 0:
            b, d = Fraction(0), Fraction(0)
        self.a, self.b, self.d = a, b, d

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self!r} is irrational")
        return self.a

    def _cmp(self, other) -> int:
        if isinstance(other, (int, Fraction)):
            other = QuadAlg(other)
        if not isinstance(other, QuadAlg):
            return NotImplemented
        if self.d == other.d:
            return _radical_sign(self.a - other.a, self.b - other.b, self.d)
        return _two_radical_sign(self.a - other.a, self.b, self.d, -other.b, other.d)

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    __hash__ = None  # ordered but deliberately unhashable

    def __neg__(self) -> "QuadAlg":
        return QuadAlg(-self.a, -self.b, self.d)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(float(self.d))

    def bounds(self, bits: int = 32) -> tuple[Fraction, Fraction]:
        """Rational enclosure [lo, hi] of the value."""
        if self.is_rational:
            return self.a, self.a
        lo, hi = _sqrt_bounds(self.d, bits)
        if self.b >= 0:
            return self.a + self.b * lo, self.a + self.b * hi
        return self.a + self.b * hi, self.a + self.b * lo

    def __repr__(self) -> str:
        if self.is_rational:
            return f"QuadAlg({self.a})"
        return f"QuadAlg({self.a} + {self.b}*sqrt({self.d}))"


def quad_roots(a: Fraction, b: Fraction, c: Fraction) -> list[QuadAlg]:
    """Real roots of a*t^2 + b*t + c (constants yield no roots)."""
    if a == 0:
        if b == 0:
            return []
        return [QuadAlg(Fraction(-c, 1) / b)]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    mid = Fraction(-b, 1) / (2 * a)
    if disc == 0:
        return [QuadAlg(mid)]
    spread = Fraction(1, 1) / (2 * a)
    return [QuadAlg(mid, -abs(spread), disc), QuadAlg(mid, abs(spread), disc)]


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with smallest denominator strictly inside (lo, hi)."""
    if not lo < hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -_simplest_between(-hi, -lo)
    # 0 <= lo < hi
    fl = lo.numerator // lo.denominator
    if Fraction(fl + 1) < hi:
        return Fraction(fl + 1)
    frac_lo = lo - fl
    span = hi - fl
    if frac_lo == 0:
        # lo is exactly the integer fl: take fl + 1/m for the first m that fits
        m = (1 / span).numerator // (1 / span).denominator + 1
        return fl + Fraction(1, m)
    return fl + 1 / _simplest_between(1 / span, 1 / frac_lo)


def rational_between(x: QuadAlg, y: QuadAlg) -> Fraction:
    """A rational strictly between x and y (requires x < y)."""
    if not x < y:
        raise ValueError("need x < y")
    bits = 16
    while True:
        _, x_hi = x.bounds(bits)
        y_lo, _ = y.bounds(bits)
        if x_hi < y_lo:
            r = _simplest_between(x_hi, y_lo)
            if x < QuadAlg(r) < y:
                return r
        if x_hi == y_lo and x < QuadAlg(x_hi) < y:
            return x_hi
        bits *= 2
        if bits > 1 << 20:
            raise RuntimeError("failed to separate values")  # pragma: no cover
