"""Dyadic interval arithmetic with outward rounding.

An interval stores integer endpoints lo <= hi at a fixed binary precision;
the represented set is [lo, hi] / 2**prec.  Every operation rounds outward,
so enclosures are sound by construction and fully deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from ..errors import IndeterminateSign, NegativeRadicand


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class Interval:
    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo: int, hi: int, prec: int):
        if lo > hi:
            raise ValueError("inverted interval")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    @classmethod
    def from_fraction(cls, q: Fraction, prec: int) -> "Interval":
        scaled_num = q.numerator << prec
        lo = _floor_div(scaled_num, q.denominator)
        hi = _ceil_div(scaled_num, q.denominator)
        return cls(lo, hi, prec)

    @classmethod
    def exact_int(cls, n: int, prec: int) -> "Interval":
        v = n << prec
        return cls(v, v, prec)

    # queries -------------------------------------------------------------

    def lo_fraction(self) -> Fraction:
        return Fraction(self.lo, 1 << self.prec)

    def hi_fraction(self) -> Fraction:
        return Fraction(self.hi, 1 << self.prec)

    def midpoint(self) -> Fraction:
        return Fraction(self.lo + self.hi, 2 << self.prec)

    def width(self) -> Fraction:
        return Fraction(self.hi - self.lo, 1 << self.prec)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def sign(self) -> int | None:
        """Certified sign: -1, 0, +1, or None when undecided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    # arithmetic ----------------------------------------------------------

    def _check(self, other: "Interval") -> None:
        if self.prec != other.prec:
            raise ValueError("mixed precisions")

    def __add__(self, other: "Interval") -> "Interval":
        self._check(other)
        return Interval(self.lo + other.lo, self.hi + other.hi, self.prec)

    def __sub__(self, other: "Interval") -> "Interval":
        self._check(other)
        return Interval(self.lo - other.hi, self.hi - other.lo, self.prec)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.prec)

    def __mul__(self, other: "Interval") -> "Interval":
        self._check(other)
        one = 1 << self.prec
        prods = (self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi)
        return Interval(_floor_div(min(prods), one),
                        _ceil_div(max(prods), one), self.prec)

    def __truediv__(self, other: "Interval") -> "Interval":
        self._check(other)
        if other.contains_zero():
            raise IndeterminateSign("division by an interval containing zero")
        one = 1 << self.prec
        quots = []
        for a in (self.lo, self.hi):
            for b in (other.lo, other.hi):
                quots.append(_floor_div(a * one, b))
                quots.append(_ceil_div(a * one, b))
        return Interval(min(quots), max(quots), self.prec)

    def sqrt(self) -> "Interval":
        if self.hi < 0:
            raise NegativeRadicand("interval certainly negative")
        if self.lo < 0:
            raise IndeterminateSign("radicand interval straddles zero")
        one = 1 << self.prec
        lo = isqrt(self.lo * one)
        hi = isqrt(self.hi * one)
        if hi * hi < self.hi * one:
            hi += 1
        return Interval(lo, hi, self.prec)

    def pow(self, n: int) -> "Interval":
        out = Interval.exact_int(1, self.prec)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __repr__(self) -> str:
        return f"Interval[{self.lo_fraction()}, {self.hi_fraction()}]@{self.prec}"
